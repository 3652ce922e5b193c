#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "dmc/gadgets.hpp"
#include "dmc/oracle.hpp"
#include "dmc/setsystem.hpp"

using namespace dmc;

TEST_CASE("distance-shift matrix A") {
  for (int n = 3; n <= 8; ++n) {
    CompleteMatrix A = gen_A(n);
    CHECK(A.l() == 2 * static_cast<std::size_t>(n) - 1);
    for (int h = 0; h < n; ++h)
      for (int hp = h + 1; hp < n; ++hp) {
        Dist expect = (h == 0 && hp == 1) ? 2 : 4;
        CHECK(hamming_distance(A.row(h), A.row(hp)) == expect);
      }
  }
}

TEST_CASE("distance-shift matrix A with the special pair relocated") {
  for (int n = 3; n <= 6; ++n)
    for (int h = 0; h < n; ++h)
      for (int hp = h + 1; hp < n; ++hp) {
        CompleteMatrix A = gen_A_swapped(n, h, hp);
        for (int a = 0; a < n; ++a)
          for (int b = a + 1; b < n; ++b) {
            Dist expect = (a == h && b == hp) ? 2 : 4;
            CHECK(hamming_distance(A.row(a), A.row(b)) == expect);
          }
      }
}

TEST_CASE("distance law of B and equality of offset and materialized forms") {
  for (int n = 3; n <= 8; ++n) {
    Dist gb = gamma_B(n);
    for (int i = 0; i < n; ++i)
      for (int ip = i + 1; ip < n; ++ip) {
        CompleteMatrix B = gen_B(n, i, ip);
        CHECK(B.l() == static_cast<std::size_t>((n * (n - 1) / 2 - 1) * (2 * n - 1)));
        PairOffsets off = gen_B_offsets(n, i, ip, 1);
        for (int h = 0; h < n; ++h)
          for (int hp = h + 1; hp < n; ++hp) {
            Dist d = hamming_distance(B.row(h), B.row(hp));
            Dist expect = (h == i && hp == ip) ? 2 * static_cast<Dist>(n) * (n - 1) - 4
                                               : 2 * static_cast<Dist>(n) * (n - 1) - 6;
            CHECK(d == expect);
            CHECK((d == gb || d == gb + 2));
            CHECK(off.delta(h, hp) == d);
          }
      }
  }
}

TEST_CASE("worked three-row B instance") {
  CompleteMatrix B = gen_B(3, 0, 1);
  CHECK(B.l() == 10);
  CHECK(hamming_distance(B.row(0), B.row(1)) == 8);
  CHECK(hamming_distance(B.row(0), B.row(2)) == 6);
  CHECK(hamming_distance(B.row(1), B.row(2)) == 6);
}

TEST_CASE("stacked B recipes: offsets match materialization under diameter stats") {
  std::mt19937_64 rng(20240801);
  for (int t = 0; t < 20; ++t) {
    int n = 3 + static_cast<int>(rng() % 3);
    std::vector<BStack> recipe;
    for (int s = 0; s < 3; ++s) {
      int i = static_cast<int>(rng() % (n - 1));
      int ip = i + 1 + static_cast<int>(rng() % (n - 1 - i));
      recipe.push_back({i, ip, static_cast<Dist>(1 + rng() % 2)});
    }
    CompleteMatrix big = materialize_b_stacks(n, recipe);
    PairOffsets off = offsets_from_b_stacks(n, recipe);
    for (int h = 0; h < n; ++h)
      for (int hp = h + 1; hp < n; ++hp)
        CHECK(hamming_distance(big.row(h), big.row(hp)) == off.delta(h, hp));

    // An n-row zero matrix with offsets reproduces the stats of the stack.
    CompleteMatrix zero(IncompleteMatrix(static_cast<std::size_t>(n), 1, Cell::Zero));
    DiameterStats via_offsets = diameter_stats(zero, off);
    DiameterStats direct = diameter_stats(big);
    CHECK(via_offsets.gamma == direct.gamma);
    CHECK(via_offsets.delta == direct.delta);
  }
}

TEST_CASE("formula shape validators and generators") {
  for (int m : {4, 8}) {
    for (int s = 0; s < 10; ++s) {
      CnfFormula f = random_3b2(m, 1000 + s);
      CHECK(is_3b2(f));
      CHECK(f.num_vars == 3 * m / 4);
    }
  }
  for (int m : {3, 4, 5}) {
    for (int s = 0; s < 10; ++s) {
      CnfFormula f = random_cubic_monotone(m, 2000 + s);
      CHECK(is_cubic_monotone(f));
    }
  }
  CnfFormula broken;
  broken.num_vars = 3;
  broken.clauses.push_back({1, 1, 2});
  CHECK_FALSE(is_3b2(broken));
  CHECK_FALSE(is_cubic_monotone(broken));
}

TEST_CASE("radius-2 reduction block distances") {
  std::mt19937_64 rng(20240802);
  for (int t = 0; t < 40; ++t) {
    int n = 2 + static_cast<int>(rng() % 4);
    int l = 2 + static_cast<int>(rng() % 5);
    Dist alpha = static_cast<Dist>(rng() % 5);
    Dist beta = 2 * ((alpha + 1) / 2) + 4 + static_cast<Dist>(rng() % 3);
    IncompleteMatrix S = random_incomplete_matrix(rng, n, l, l, 10);
    DmcInstance red = reduce_conrmc_r2(S, alpha, beta);

    REQUIRE(red.matrix().n() == static_cast<std::size_t>(n) + 1);
    // The appended block pins the distances among the complete columns.
    for (int i = 0; i < n; ++i) {
      RowVector top = red.matrix().row(i);
      RowVector bottom = red.matrix().row(n);
      std::vector<int> block_cols;
      for (std::size_t j = S.l(); j < red.matrix().l(); ++j)
        block_cols.push_back(static_cast<int>(j));
      CHECK(restricted_distance(top, bottom, block_cols) == beta - 2);
      for (int ip = i + 1; ip < n; ++ip)
        CHECK(restricted_distance(red.matrix().row(i), red.matrix().row(ip), block_cols) ==
              2 * ((alpha + 1) / 2));
    }
  }
  CHECK_THROWS_AS(reduce_conrmc_r2(IncompleteMatrix(2, 2), 2, 5), std::invalid_argument);
}

TEST_CASE("radius-2 reduction soundness both ways") {
  std::mt19937_64 rng(20240803);
  auto center_exists = [](const IncompleteMatrix& S) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << S.l()); ++mask) {
      RowVector v(S.l());
      for (std::size_t j = 0; j < S.l(); ++j) v.set(j, (mask >> j) & 1 ? Cell::One : Cell::Zero);
      bool ok = true;
      for (std::size_t i = 0; i < S.n() && ok; ++i) ok = hamming_distance(v, S.row(i)) <= 2;
      if (ok) return true;
    }
    return false;
  };
  int yes_seen = 0, no_seen = 0;
  for (int t = 0; t < 60; ++t) {
    int n = 2 + static_cast<int>(rng() % 3);
    int l = 4 + static_cast<int>(rng() % 3);
    IncompleteMatrix S = random_incomplete_matrix(rng, n, l, l, 6);
    Dist alpha = static_cast<Dist>(rng() % 3);
    DmcInstance red = reduce_conrmc_r2(S, alpha, 2 * ((alpha + 1) / 2) + 4);
    auto verdict = solve_backtracking(red, SearchBudget{20'000'000});
    REQUIRE(!verdict.inconclusive());
    bool expect = center_exists(S);
    CHECK(verdict.yes() == expect);
    yes_seen += expect;
    no_seen += !expect;
  }
  CHECK(yes_seen > 0);
  CHECK(no_seen > 0);
}

TEST_CASE("(3,B2) reduction: class table holds for m in {4, 8}") {
  for (int m : {4, 8}) {
    CnfFormula f = random_3b2(m, 99 + m);
    Reduction3B2 red = reduce_3b2sat(f);
    const auto& inst = red.instance;
    const std::size_t n = inst.matrix().n();
    REQUIRE(n == 11 * static_cast<std::size_t>(m));
    CHECK(inst.matrix().max_missing_per_row() == 2);
    for (std::size_t h = 0; h < n; ++h)
      for (std::size_t hp = h + 1; hp < n; ++hp) {
        Dist d = hamming_distance(inst.matrix().row(h), inst.matrix().row(hp)) +
                 inst.offsets().delta(h, hp);
        auto targets = pair_class_targets(red.klass[h][hp - h - 1], red.beta);
        CHECK(std::find(targets.begin(), targets.end(), d) != targets.end());
      }
  }
}

TEST_CASE("(3,B2) forward soundness: assignments map to verified completions") {
  std::mt19937_64 rng(20240804);
  int satisfiable_seen = 0;
  for (int s = 0; satisfiable_seen < 25 && s < 500; ++s) {
    CnfFormula f = random_3b2(4, rng());
    auto assignment = brute_force_sat(f);
    if (!assignment) continue;
    ++satisfiable_seen;
    Reduction3B2 red = reduce_3b2sat(f);
    CompleteMatrix T = completion_from_assignment_3b2(red, f, *assignment);
    CHECK(verify_instance(red.instance, T));
  }
  REQUIRE(satisfiable_seen == 25);
}

TEST_CASE("(3,B2) backward soundness on unsatisfiable formulas") {
  std::mt19937_64 rng(20240805);
  int unsat_seen = 0, sat_seen = 0;
  for (int s = 0; (unsat_seen < 3 || sat_seen < 5) && s < 4000; ++s) {
    CnfFormula f = random_3b2(4, rng());
    bool sat = brute_force_sat(f).has_value();
    if (!sat) {
      if (unsat_seen >= 3) continue;
      ++unsat_seen;
    } else {
      if (sat_seen >= 5) continue;
      ++sat_seen;
    }
    Reduction3B2 red = reduce_3b2sat(f);
    auto verdict = solve_backtracking(red.instance, SearchBudget{10'000'000});
    REQUIRE(!verdict.inconclusive());
    CHECK(verdict.yes() == sat);
  }
  CHECK(unsat_seen == 3);
  CHECK(sat_seen == 5);
}

TEST_CASE("1-in-3 reduction reproduces the worked four-variable matrix") {
  // Clauses: (1,2,3), (1,2,4), (1,3,4), (2,3,4).
  CnfFormula f;
  f.num_vars = 4;
  f.clauses = {{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}};
  REQUIRE(is_cubic_monotone(f));
  Reduction1In3 red = reduce_1in3sat(f);
  const IncompleteMatrix& C = red.instance.matrix();
  // Column layout: 2m variable-pair columns, 3m clause-triple columns, one
  // trailing separator column.
  REQUIRE(C.n() == 9);
  REQUIRE(C.l() == 21);
  std::vector<std::string> got;
  for (std::size_t i = 0; i < C.n(); ++i) got.push_back(C.row(i).to_string());
  CHECK(got == std::vector<std::string>{
      "??000000" "011011011000" "1",
      "00??0000" "101101000011" "1",
      "0000??00" "110000101101" "1",
      "000000??" "000110110110" "1",
      "10101000" "???000000000" "0",
      "10100010" "000???000000" "0",
      "10001010" "000000???000" "0",
      "00101010" "000000000???" "0",
      "00000000" "000000000000" "0",
  });
}

TEST_CASE("1-in-3 reduction agrees with brute force for small m") {
  std::mt19937_64 rng(20240806);
  int yes_seen = 0, no_seen = 0;
  for (int t = 0; t < 14; ++t) {
    int m = 3 + static_cast<int>(t % 2);  // m in {3, 4}: exhaustive reach
    CnfFormula f = random_cubic_monotone(m, rng());
    bool expect = brute_force_one_in_three(f).has_value();
    Reduction1In3 red = reduce_1in3sat(f);
    CHECK(red.instance.matrix().max_missing_per_row() == 3);
    auto verdict = solve_exhaustive(red.instance, SearchBudget{80'000'000});
    REQUIRE(!verdict.inconclusive());
    CHECK(verdict.yes() == expect);
    yes_seen += expect;
    no_seen += !expect;

    if (expect) {
      CompleteMatrix T = completion_from_assignment_1in3(red, f, *brute_force_one_in_three(f));
      CHECK(verify_instance(red.instance, T));
    }

    // The backtracking solver confirms at m = 5 scale as well.
    if (t < 4) {
      CnfFormula f5 = random_cubic_monotone(5, rng());
      Reduction1In3 red5 = reduce_1in3sat(f5);
      auto bt = solve_backtracking(red5.instance, SearchBudget{10'000'000});
      REQUIRE(!bt.inconclusive());
      CHECK(bt.yes() == brute_force_one_in_three(f5).has_value());
    }
  }
  CHECK(yes_seen > 0);
  CHECK(no_seen > 0);
}

TEST_CASE("orthogonal vectors embedding reproduces the worked example") {
  OvInstance inst;
  inst.u = {RowVector::from_string("010"), RowVector::from_string("110")};
  inst.v = {RowVector::from_string("110"), RowVector::from_string("101")};
  CompleteMatrix T = gen_ov(inst);
  REQUIRE(T.n() == 4);
  REQUIRE(T.l() == 18);
  CHECK(T.row(0).to_string() == "001111001000000000");
  CHECK(T.row(1).to_string() == "111111001000000000");
  CHECK(T.row(2).to_string() == "111111010111111111");
  CHECK(T.row(3).to_string() == "111010111111111111");
  CHECK(diameter_stats(T).delta == 15);  // u1 and v2 are orthogonal
}

TEST_CASE("orthogonal vectors embedding: diameter 5l exactly on orthogonal pairs") {
  // Tiny no-instance.
  OvInstance one;
  one.u = {RowVector::from_string("1")};
  one.v = {RowVector::from_string("1")};
  CHECK(diameter_stats(gen_ov(one)).delta == 3);

  std::mt19937_64 rng(20240807);
  for (int t = 0; t < 500; ++t) {
    int n = 1 + static_cast<int>(rng() % 4);
    int l = 1 + static_cast<int>(rng() % 4);
    OvInstance inst;
    for (int i = 0; i < n; ++i) {
      RowVector u(l), v(l);
      for (int j = 0; j < l; ++j) {
        u.set(j, (rng() & 1) ? Cell::One : Cell::Zero);
        v.set(j, (rng() & 1) ? Cell::One : Cell::Zero);
      }
      inst.u.push_back(u);
      inst.v.push_back(v);
    }
    bool orthogonal = false;
    for (int i = 0; i < n && !orthogonal; ++i)
      for (int ip = 0; ip < n && !orthogonal; ++ip) {
        bool ok = true;
        for (int j = 0; j < l; ++j)
          ok = ok && !(inst.u[i].at(j) == Cell::One && inst.v[ip].at(j) == Cell::One);
        orthogonal = ok;
      }
    CHECK((diameter_stats(gen_ov(inst)).delta == 5 * static_cast<Dist>(l)) == orthogonal);
  }
}

TEST_CASE("planted instances carry valid witnesses") {
  std::mt19937_64 rng(20240808);
  for (int t = 0; t < 300; ++t) {
    int n = 1 + static_cast<int>(rng() % 8);
    int l = 1 + static_cast<int>(rng() % 10);
    auto planted = plant_yes_instance(n, l, t % 3 == 0 ? 0.0 : 0.3, rng());
    CHECK(verify_instance(planted.instance, planted.witness));
    if (t % 3 == 0) CHECK(planted.instance.matrix().complete());
  }
}

TEST_CASE("planted sunflower matrices") {
  CompleteMatrix T = plant_sunflower_matrix(4, 0, 1, 5);
  DiameterStats st = diameter_stats(T);
  CHECK(st.gamma == 1);
  CHECK(st.delta == 2);

  CompleteMatrix T2 = plant_sunflower_matrix(5, 1, 1, 6);
  st = diameter_stats(T2);
  CHECK(st.gamma == 2);
  CHECK(st.delta == 2);

  // Difference sets relative to the base row recover the planted core.
  DiffSystem d = diff_system(T2, T2.n() - 1);
  std::vector<ColumnSet> family = d.sets;
  auto sun = detect_sunflower(family);
  REQUIRE(sun);
  CHECK(sun->core == ColumnSet{0});
  CHECK_THROWS_AS(plant_sunflower_matrix(4, 1, 2, 5), std::invalid_argument);
}
