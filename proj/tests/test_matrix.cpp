#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "dmc/matrix.hpp"

using namespace dmc;

namespace {

RowVector rv(const std::string& s) { return RowVector::from_string(s); }

RowVector random_row(std::mt19937_64& rng, std::size_t l, bool allow_missing) {
  RowVector r(l);
  for (std::size_t j = 0; j < l; ++j) {
    int roll = static_cast<int>(rng() % (allow_missing ? 3 : 2));
    r.set(j, roll == 0 ? Cell::Zero : roll == 1 ? Cell::One : Cell::Missing);
  }
  return r;
}

}  // namespace

TEST_CASE("hamming distance ignores missing positions") {
  CHECK(hamming_distance(rv("001"), rv("111")) == 2);
  CHECK(hamming_distance(rv("0?1"), rv("111")) == 1);
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    RowVector u = random_row(rng, 1 + rng() % 40, true);
    CHECK(hamming_distance(u, u) == 0);
  }
  CHECK_THROWS_AS(hamming_distance(rv("01"), rv("011")), std::invalid_argument);
}

TEST_CASE("disagreement sets") {
  CHECK(disagreement_set(rv("001"), rv("111")) == std::vector<int>{0, 1});
  CHECK(disagreement_set(rv("0?1"), rv("111")) == std::vector<int>{0});

  std::mt19937_64 rng(11);
  for (int t = 0; t < 300; ++t) {
    std::size_t l = 1 + rng() % 30;
    RowVector u = random_row(rng, l, true), w = random_row(rng, l, true);
    CHECK(static_cast<Dist>(disagreement_set(u, w).size()) == hamming_distance(u, w));
  }
}

TEST_CASE("symmetric difference identity for complete triples") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 500; ++t) {
    std::size_t l = 1 + rng() % 24;
    RowVector u = random_row(rng, l, false), v = random_row(rng, l, false),
              w = random_row(rng, l, false);
    auto duv = disagreement_set(u, v);
    auto dvw = disagreement_set(v, w);
    std::vector<int> inter;
    std::set_intersection(duv.begin(), duv.end(), dvw.begin(), dvw.end(),
                          std::back_inserter(inter));
    Dist expect = static_cast<Dist>(duv.size()) + static_cast<Dist>(dvw.size()) -
                  2 * static_cast<Dist>(inter.size());
    CHECK(hamming_distance(u, w) == expect);
  }
}

TEST_CASE("triangle inequality through a complete middle vector") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 500; ++t) {
    std::size_t l = 1 + rng() % 24;
    RowVector u = random_row(rng, l, true), w = random_row(rng, l, true),
              v = random_row(rng, l, false);
    CHECK(hamming_distance(u, w) <= hamming_distance(u, v) + hamming_distance(v, w));
  }
}

TEST_CASE("pair distance parity for complete triples") {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 500; ++t) {
    std::size_t l = 1 + rng() % 24;
    RowVector u = random_row(rng, l, false), v = random_row(rng, l, false),
              w = random_row(rng, l, false);
    Dist total = hamming_distance(u, v) + hamming_distance(v, w) + hamming_distance(w, u);
    CHECK(total % 2 == 0);
  }
}

TEST_CASE("restricted distance") {
  std::vector<int> J{0, 1};
  CHECK(restricted_distance(rv("001"), rv("111"), J) == 2);
  CHECK(restricted_distance(rv("001"), rv("111"), std::vector<int>{}) == 0);
  std::vector<int> all{0, 1, 2};
  CHECK(restricted_distance(rv("0?1"), rv("110"), all) == hamming_distance(rv("0?1"), rv("110")));
  CHECK_THROWS_AS(restricted_distance(rv("01"), rv("10"), std::vector<int>{5}), std::out_of_range);
}

TEST_CASE("apply completion") {
  CHECK(apply_completion(rv("0?1"), rv("111")) == rv("011"));
  CHECK(apply_completion(rv("??"), rv("10")) == rv("10"));
  CHECK(apply_completion(rv("010"), rv("111")) == rv("010"));
  CHECK_THROWS_AS(apply_completion(rv("0?"), rv("1?")), std::invalid_argument);
}

TEST_CASE("diameter stats on the published four-row completion") {
  auto T = CompleteMatrix::from_strings({"11101", "01010", "10010", "00101"});
  DiameterStats st = diameter_stats(T);
  CHECK(st.delta == 4);
  CHECK(st.gamma == 2);

  // The full pairwise table, computed independently by scalar loops.
  std::vector<std::string> rows{"11101", "01010", "10010", "00101"};
  Dist lo = kInfiniteDistance, hi = 0;
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = a + 1; b < rows.size(); ++b) {
      Dist d = 0;
      for (std::size_t j = 0; j < 5; ++j) d += rows[a][j] != rows[b][j];
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
  CHECK(lo == st.gamma);
  CHECK(hi == st.delta);
}

TEST_CASE("diameter stats degenerate cases") {
  auto single = CompleteMatrix::from_strings({"0110"});
  DiameterStats st = diameter_stats(single);
  CHECK(st.gamma == kInfiniteDistance);
  CHECK(st.delta == 0);

  auto twin = CompleteMatrix::from_strings({"0110", "0110"});
  st = diameter_stats(twin);
  CHECK(st.gamma == 0);
  CHECK(st.delta == 0);
}

TEST_CASE("diameter stats with offsets") {
  auto T = CompleteMatrix::from_strings({"00", "01", "11"});
  PairOffsets off(3);
  off.set_delta(0, 2, 5);
  DiameterStats st = diameter_stats(T, off);
  CHECK(st.gamma == 1);
  CHECK(st.delta == 7);
  CHECK(off.delta(2, 0) == 5);
  CHECK_THROWS_AS(off.delta(1, 1), std::invalid_argument);
}

TEST_CASE("verify instance on the published example") {
  auto S = IncompleteMatrix::from_strings({"?1101", "?1010", "10010", "0?101"});
  auto good = CompleteMatrix::from_strings({"11101", "01010", "10010", "00101"});
  CHECK(verify_instance(DmcInstance(S, 0, 4), good));

  // Flipping a known entry breaks the completion relation.
  auto bad = CompleteMatrix::from_strings({"11101", "01010", "10010", "00100"});
  CHECK_FALSE(verify_instance(DmcInstance(S, 0, 4), bad));

  // The witness has a pair at distance four.
  CHECK_FALSE(verify_instance(DmcInstance(S, 0, 3), good));
}

TEST_CASE("dirty columns") {
  CHECK(dirty_columns(IncompleteMatrix::from_strings({"01", "11"})) == std::vector<int>{0});
  CHECK(dirty_columns(IncompleteMatrix::from_strings({"0?", "?0"})).empty());
  CHECK(dirty_columns(IncompleteMatrix::from_strings({"??", "??"})).empty());
}

TEST_CASE("pair offsets storage") {
  PairOffsets off(5);
  CHECK(off.all_zero());
  off.set_delta(3, 1, 7);
  CHECK(off.delta(1, 3) == 7);
  CHECK(!off.all_zero());
  off.add_delta(1, 3, 2);
  CHECK(off.delta(3, 1) == 9);
  CHECK_THROWS_AS(off.set_delta(0, 5, 1), std::out_of_range);
  CHECK_THROWS_AS(off.set_delta(0, 1, -2), std::invalid_argument);
}

TEST_CASE("instance construction guards") {
  auto S = IncompleteMatrix::from_strings({"01"});
  CHECK_THROWS_AS(DmcInstance(S, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(DmcInstance(S, 1, 2, PairOffsets(3)), std::invalid_argument);
}

TEST_CASE("row vector packing survives round trips") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 200; ++t) {
    std::size_t l = 1 + rng() % 200;  // spans several 64-bit words
    RowVector r = random_row(rng, l, true);
    CHECK(RowVector::from_string(r.to_string()) == r);
    std::size_t missing = 0;
    for (std::size_t j = 0; j < l; ++j) missing += r.at(j) == Cell::Missing;
    CHECK(missing == r.missing_count());
  }
}
