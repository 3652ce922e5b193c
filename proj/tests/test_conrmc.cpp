#include <catch2/catch_amalgamated.hpp>

#include <optional>
#include <random>

#include "dmc/conrmc.hpp"
#include "dmc/gadgets.hpp"

using namespace dmc;

namespace {

// Reference oracle: enumerate all 2^l candidate centers.
std::optional<RowVector> enumerate_center(const IncompleteMatrix& S, const std::vector<int>& radii) {
  const std::size_t l = S.l();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << l); ++mask) {
    RowVector v(l);
    for (std::size_t j = 0; j < l; ++j) v.set(j, (mask >> j) & 1 ? Cell::One : Cell::Zero);
    bool ok = true;
    for (std::size_t i = 0; i < S.n() && ok; ++i)
      ok = hamming_distance(v, S.row(i)) <= radii[i];
    if (ok) return v;
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("fixed center instances") {
  auto S = IncompleteMatrix::from_strings({"00", "11"});
  auto v = solve_conrmc01({S, {1, 1}});
  REQUIRE(v);
  CHECK(hamming_distance(*v, S.row(0)) <= 1);
  CHECK(hamming_distance(*v, S.row(1)) <= 1);

  // Three columns at mutual distance three: no radius-1 center exists, which
  // the 8-vector enumeration confirms.
  auto far = IncompleteMatrix::from_strings({"000", "111"});
  CHECK_FALSE(enumerate_center(far, {1, 1}).has_value());
  CHECK_FALSE(solve_conrmc01({far, {1, 1}}).has_value());

  // Radius 0 pins known entries; missing ones stay free.
  auto pin = IncompleteMatrix::from_strings({"1?"});
  auto center = solve_conrmc01({pin, {0}});
  REQUIRE(center);
  CHECK(center->at(0) == Cell::One);
}

TEST_CASE("contradictory radius-0 rows yield none") {
  auto S = IncompleteMatrix::from_strings({"1?", "0?"});
  CHECK_FALSE(solve_conrmc01({S, {0, 0}}).has_value());
}

TEST_CASE("usage errors") {
  auto S = IncompleteMatrix::from_strings({"01"});
  CHECK_THROWS_AS(solve_conrmc01({S, {2}}), std::invalid_argument);
  CHECK_THROWS_AS(solve_conrmc01({S, {1, 1}}), std::invalid_argument);
}

TEST_CASE("agreement with exhaustive center enumeration") {
  std::mt19937_64 rng(20240610);
  for (int t = 0; t < 10000; ++t) {
    int n = 1 + static_cast<int>(rng() % 6);
    int l = 1 + static_cast<int>(rng() % 12);
    IncompleteMatrix S = random_incomplete_matrix(rng, n, l, l, 3 * l);
    std::vector<int> radii;
    for (int i = 0; i < n; ++i) radii.push_back(static_cast<int>(rng() % 2));
    auto fast = solve_conrmc01({S, radii});
    auto slow = enumerate_center(S, radii);
    REQUIRE(fast.has_value() == slow.has_value());
    if (fast) {
      for (std::size_t i = 0; i < S.n(); ++i)
        CHECK(hamming_distance(*fast, S.row(i)) <= radii[i]);
    }
  }
}
