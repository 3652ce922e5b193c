#pragma once

// Instance constructions: the distance-shift matrices A^n and B^n, the
// reductions from bounded-occurrence SAT variants and from radius-2 center
// finding, the orthogonal-vectors embedding, and random/planted instance
// generation for cross-validation.
//
// Appending c copies of B^n(i, i') to a matrix with n rows adds c * gamma_B
// to every pairwise distance and 2c more to the pair (i, i'). Reductions
// therefore carry their appended stacks as pair offsets instead of
// materializing millions of columns; the tiny materializer below exists to
// validate that equivalence.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "dmc/matrix.hpp"

namespace dmc {

// ---------------------------------------------------------------------------
// CNF formulas for the reduction inputs.

struct CnfFormula {
  int num_vars = 0;
  std::vector<std::array<int, 3>> clauses;  // signed 1-based literals
};

// Every literal occurs exactly twice and every clause holds three distinct
// variables.
inline bool is_3b2(const CnfFormula& f) {
  if (f.num_vars <= 0) return false;
  std::vector<int> pos_count(f.num_vars, 0), neg_count(f.num_vars, 0);
  for (const auto& cl : f.clauses) {
    for (int lit : cl) {
      int v = std::abs(lit) - 1;
      if (lit == 0 || v >= f.num_vars) return false;
      (lit > 0 ? pos_count[v] : neg_count[v])++;
    }
    if (std::abs(cl[0]) == std::abs(cl[1]) || std::abs(cl[0]) == std::abs(cl[2]) ||
        std::abs(cl[1]) == std::abs(cl[2]))
      return false;
  }
  for (int v = 0; v < f.num_vars; ++v)
    if (pos_count[v] != 2 || neg_count[v] != 2) return false;
  return true;
}

// Every variable occurs exactly three times; clauses are three distinct
// positive literals; as many clauses as variables.
inline bool is_cubic_monotone(const CnfFormula& f) {
  if (f.num_vars <= 0 || f.clauses.size() != static_cast<std::size_t>(f.num_vars)) return false;
  std::vector<int> count(f.num_vars, 0);
  for (const auto& cl : f.clauses) {
    for (int lit : cl) {
      if (lit <= 0 || lit > f.num_vars) return false;
      count[lit - 1]++;
    }
    if (cl[0] == cl[1] || cl[0] == cl[2] || cl[1] == cl[2]) return false;
  }
  for (int v = 0; v < f.num_vars; ++v)
    if (count[v] != 3) return false;
  return true;
}

namespace detail {

inline CnfFormula deal_slots(int num_vars, int num_clauses, std::vector<int> slots,
                             std::mt19937_64& rng, bool (*valid)(const CnfFormula&)) {
  for (int attempt = 0; attempt < 100000; ++attempt) {
    std::shuffle(slots.begin(), slots.end(), rng);
    CnfFormula f;
    f.num_vars = num_vars;
    for (int c = 0; c < num_clauses; ++c)
      f.clauses.push_back({slots[3 * c], slots[3 * c + 1], slots[3 * c + 2]});
    if (valid(f)) return f;
  }
  throw std::runtime_error("formula shuffle failed to produce a valid shape");
}

}  // namespace detail

// Shape-preserving random formulas: shuffle the literal slots and reject
// deals that repeat a variable inside a clause.
inline CnfFormula random_3b2(int m, std::uint64_t seed) {
  if (m < 4 || m % 4 != 0) throw std::invalid_argument("random_3b2: clause count must be a positive multiple of 4");
  int vars = 3 * m / 4;
  std::vector<int> slots;
  for (int v = 1; v <= vars; ++v) {
    slots.insert(slots.end(), {v, v, -v, -v});
  }
  std::mt19937_64 rng(seed);
  return detail::deal_slots(vars, m, std::move(slots), rng, &is_3b2);
}

inline CnfFormula random_cubic_monotone(int m, std::uint64_t seed) {
  if (m < 3) throw std::invalid_argument("random_cubic_monotone: need at least three clauses");
  std::vector<int> slots;
  for (int v = 1; v <= m; ++v) slots.insert(slots.end(), {v, v, v});
  std::mt19937_64 rng(seed);
  return detail::deal_slots(m, m, std::move(slots), rng, &is_cubic_monotone);
}

inline std::optional<std::vector<bool>> brute_force_sat(const CnfFormula& f) {
  if (f.num_vars > 25) throw std::invalid_argument("brute_force_sat: too many variables");
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << f.num_vars); ++mask) {
    bool ok = true;
    for (const auto& cl : f.clauses) {
      bool sat = false;
      for (int lit : cl) sat = sat || (((mask >> (std::abs(lit) - 1)) & 1) == (lit > 0 ? 1u : 0u));
      if (!sat) { ok = false; break; }
    }
    if (ok) {
      std::vector<bool> a(f.num_vars);
      for (int v = 0; v < f.num_vars; ++v) a[v] = (mask >> v) & 1;
      return a;
    }
  }
  return std::nullopt;
}

inline std::optional<std::vector<bool>> brute_force_one_in_three(const CnfFormula& f) {
  if (f.num_vars > 25) throw std::invalid_argument("brute_force_one_in_three: too many variables");
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << f.num_vars); ++mask) {
    bool ok = true;
    for (const auto& cl : f.clauses) {
      int sat = 0;
      for (int lit : cl) sat += ((mask >> (std::abs(lit) - 1)) & 1) == (lit > 0 ? 1u : 0u);
      if (sat != 1) { ok = false; break; }
    }
    if (ok) {
      std::vector<bool> a(f.num_vars);
      for (int v = 0; v < f.num_vars; ++v) a[v] = (mask >> v) & 1;
      return a;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Distance-shift matrices.

// A^n (n >= 3, width 2n - 1): two indicator rows, then rows of 111 followed by
// two identity blocks. d(A[0], A[1]) = 2 and every other pair sits at 4.
inline CompleteMatrix gen_A(int n) {
  if (n < 3) throw std::invalid_argument("gen_A: need n >= 3");
  std::size_t width = 2 * static_cast<std::size_t>(n) - 1;
  IncompleteMatrix m(static_cast<std::size_t>(n), width, Cell::Zero);
  m.set_cell(0, 0, Cell::One);
  m.set_cell(1, 1, Cell::One);
  for (int i = 2; i < n; ++i) {
    m.set_cell(i, 0, Cell::One);
    m.set_cell(i, 1, Cell::One);
    m.set_cell(i, 2, Cell::One);
    m.set_cell(i, 3 + (i - 2), Cell::One);
    m.set_cell(i, 3 + (n - 2) + (i - 2), Cell::One);
  }
  return CompleteMatrix(std::move(m));
}

// A^n with the special pair moved to rows (h, hp), 0-based h < hp. The first
// two rows of A^n land at positions h and hp; the symmetric rows fill the
// rest in ascending order.
inline CompleteMatrix gen_A_swapped(int n, int h, int hp) {
  if (!(0 <= h && h < hp && hp < n)) throw std::invalid_argument("gen_A_swapped: need 0 <= h < hp < n");
  CompleteMatrix base = gen_A(n);
  std::vector<int> source(static_cast<std::size_t>(n), -1);
  source[h] = 0;
  source[hp] = 1;
  int next = 2;
  for (int i = 0; i < n; ++i)
    if (source[i] < 0) source[i] = next++;
  std::vector<RowVector> rows;
  rows.reserve(n);
  for (int i = 0; i < n; ++i) rows.push_back(base.row(static_cast<std::size_t>(source[i])));
  return CompleteMatrix(IncompleteMatrix(std::move(rows)));
}

inline Dist gamma_B(int n) { return 2 * static_cast<Dist>(n) * (n - 1) - 6; }

// B^n(i, ip): horizontal stack of A^n(h, hp) over every pair except (i, ip).
// The pair (i, ip) ends up at gamma_B + 2; all other pairs at gamma_B.
inline CompleteMatrix gen_B(int n, int i, int ip) {
  if (!(0 <= i && i < ip && ip < n)) throw std::invalid_argument("gen_B: need 0 <= i < ip < n");
  std::optional<IncompleteMatrix> acc;
  for (int h = 0; h < n; ++h)
    for (int hp = h + 1; hp < n; ++hp) {
      if (h == i && hp == ip) continue;
      IncompleteMatrix block = gen_A_swapped(n, h, hp).grid();
      acc = acc ? acc->hstack(block) : block;
    }
  return CompleteMatrix(std::move(*acc));
}

inline PairOffsets gen_B_offsets(int n, int i, int ip, Dist copies) {
  if (!(0 <= i && i < ip && ip < n)) throw std::invalid_argument("gen_B_offsets: need 0 <= i < ip < n");
  if (copies < 0) throw std::invalid_argument("gen_B_offsets: negative copy count");
  PairOffsets off(static_cast<std::size_t>(n));
  for (int h = 0; h < n; ++h)
    for (int hp = h + 1; hp < n; ++hp)
      off.set_delta(h, hp, copies * (gamma_B(n) + ((h == i && hp == ip) ? 2 : 0)));
  return off;
}

// A recipe of B stacks: copies of B^n(i, ip) per pair. Used to validate that
// the offset form and the materialized form agree.
struct BStack {
  int i = 0, ip = 0;
  Dist copies = 0;
};

inline PairOffsets offsets_from_b_stacks(int n, const std::vector<BStack>& stacks) {
  PairOffsets off(static_cast<std::size_t>(n));
  for (const auto& s : stacks)
    for (int h = 0; h < n; ++h)
      for (int hp = h + 1; hp < n; ++hp)
        off.add_delta(h, hp, s.copies * (gamma_B(n) + ((h == s.i && hp == s.ip) ? 2 : 0)));
  return off;
}

inline CompleteMatrix materialize_b_stacks(int n, const std::vector<BStack>& stacks) {
  std::optional<IncompleteMatrix> acc;
  for (const auto& s : stacks) {
    CompleteMatrix b = gen_B(n, s.i, s.ip);
    for (Dist c = 0; c < s.copies; ++c) acc = acc ? acc->hstack(b.grid()) : b.grid();
  }
  if (!acc) throw std::invalid_argument("materialize_b_stacks: empty recipe");
  return CompleteMatrix(std::move(*acc));
}

// ---------------------------------------------------------------------------
// Reduction from radius-2 center finding. Appends an all-missing row and a
// complete block pinning the new row's distances: identity stacks put every
// old pair at 2*ceil(alpha/2) and the appended row at beta - 2 from everyone.
inline DmcInstance reduce_conrmc_r2(const IncompleteMatrix& S, Dist alpha, Dist beta) {
  Dist ha = (alpha + 1) / 2;
  if (beta < 2 * ha + 4)
    throw std::invalid_argument("reduce_conrmc_r2: need beta >= 2*ceil(alpha/2) + 4");
  const std::size_t n = S.n();
  const std::size_t width = (n + 1) * static_cast<std::size_t>(ha) +
                            static_cast<std::size_t>(beta - 2 * ha - 2);

  IncompleteMatrix ext = S;
  ext.append_row(RowVector(S.l()));
  IncompleteMatrix block(n + 1, width, Cell::Zero);
  std::size_t col = 0;
  for (Dist copy = 0; copy < ha; ++copy)
    for (std::size_t d = 0; d < n + 1; ++d, ++col) block.set_cell(d, col, Cell::One);
  for (Dist copy = 0; copy < beta - 2 * ha - 2; ++copy, ++col) block.set_cell(n, col, Cell::One);
  return DmcInstance(ext.hstack(block), alpha, beta);
}

// ---------------------------------------------------------------------------
// Reduction from (3,B2)-SAT: k = 2, beta = alpha + 3 NP-hardness construction.

enum class PairClass : std::uint8_t { H1, H2, H3, H4, H5, H6, H7 };

struct Reduction3B2 {
  DmcInstance instance;
  Dist beta = 0;
  // Upper-triangular pair classes, indexed like the offsets.
  std::vector<std::vector<PairClass>> klass;  // klass[h][hp - h - 1]
};

// Distance targets per class, relative to beta.
inline std::vector<Dist> pair_class_targets(PairClass k, Dist beta) {
  switch (k) {
    case PairClass::H1:
    case PairClass::H2: return {beta - 1};
    case PairClass::H3: return {beta - 3};
    case PairClass::H4:
    case PairClass::H5: return {beta - 3, beta - 2};
    case PairClass::H6: return {beta - 2, beta - 1};
    case PairClass::H7: return {beta - 1, beta};
  }
  return {};
}

namespace detail {

// The 11x8 clause block: three literal rows with paired missing entries, the
// clause row with missing selector entries, their 00- and 11-completions, and
// the 00-completed clause row.
inline IncompleteMatrix clause_block_3b2() {
  return IncompleteMatrix::from_strings({
      "??000011",
      "00??0010",
      "0000??01",
      "101010??",
      "00000011",
      "00000010",
      "00000001",
      "11000011",
      "00110010",
      "00001101",
      "10101000",
  });
}

}  // namespace detail

// Conflicting occurrence tuples: (block i, slot j, block ip, slot jp), i < ip,
// one occurrence positive and the other negative of the same variable. Each
// variable contributes exactly four tuples (2 positive x 2 negative).
inline std::vector<std::array<int, 4>> conflict_tuples_3b2(const CnfFormula& f) {
  std::vector<std::vector<std::pair<int, int>>> pos_occ(f.num_vars), neg_occ(f.num_vars);
  for (std::size_t i = 0; i < f.clauses.size(); ++i)
    for (int j = 0; j < 3; ++j) {
      int lit = f.clauses[i][j];
      auto& bucket = lit > 0 ? pos_occ[lit - 1] : neg_occ[-lit - 1];
      bucket.emplace_back(static_cast<int>(i), j + 1);  // slots are 1-based
    }
  std::vector<std::array<int, 4>> out;
  for (int v = 0; v < f.num_vars; ++v)
    for (auto [pi, pj] : pos_occ[v])
      for (auto [ni, nj] : neg_occ[v]) {
        if (pi < ni) out.push_back({pi, pj, ni, nj});
        else out.push_back({ni, nj, pi, pj});
      }
  return out;
}

inline Reduction3B2 reduce_3b2sat(const CnfFormula& f, std::optional<Dist> alpha = std::nullopt) {
  if (!is_3b2(f)) throw std::invalid_argument("reduce_3b2sat: formula is not in (3,B2) shape");
  const int m = static_cast<int>(f.clauses.size());
  const std::size_t n = 11 * static_cast<std::size_t>(m);
  const std::size_t width = 8 * static_cast<std::size_t>(m);

  IncompleteMatrix C(n, width, Cell::Zero);
  IncompleteMatrix block = detail::clause_block_3b2();
  for (int i = 0; i < m; ++i)
    for (std::size_t r = 0; r < 11; ++r)
      for (std::size_t c = 0; c < 8; ++c)
        C.set_cell(11 * i + r, 8 * i + c, block.cell(r, c));

  auto tuples = conflict_tuples_3b2(f);
  for (const auto& [i, j, ip, jp] : tuples) {
    C.set_cell(11 * i + (j - 1), 8 * ip + 2 * jp - 1, Cell::One);
    C.set_cell(11 * ip + (jp - 1), 8 * i + 2 * j - 1, Cell::One);
  }

  // Classify every row pair. Within a block: literal rows against their fixed
  // completions (H1), the clause row against its completion (H2), literal
  // rows against the clause row (H3). Conflicting literal rows across blocks
  // form H4; everything else splits by how many of the two rows still hold
  // missing entries (H5/H6/H7).
  auto block_of = [](std::size_t h) { return h / 11; };
  auto slot_of = [](std::size_t h) { return h % 11 + 1; };  // 1-based inside block
  std::vector<std::vector<PairClass>> klass(n);
  for (std::size_t h = 0; h < n; ++h) klass[h].assign(n - h - 1, PairClass::H7);

  for (std::size_t h = 0; h < n; ++h)
    for (std::size_t hp = h + 1; hp < n; ++hp) {
      PairClass k;
      std::size_t j = slot_of(h), jp = slot_of(hp);
      if (block_of(h) == block_of(hp) &&
          ((jp == j + 4 && j <= 3) || (jp == j + 7 && j <= 3))) {
        k = PairClass::H1;
      } else if (block_of(h) == block_of(hp) && j == 4 && jp == 11) {
        k = PairClass::H2;
      } else if (block_of(h) == block_of(hp) && j <= 3 && jp == 4) {
        k = PairClass::H3;
      } else {
        bool h_missing = j <= 4, hp_missing = jp <= 4;
        int cnt = static_cast<int>(h_missing) + static_cast<int>(hp_missing);
        k = cnt == 2 ? PairClass::H5 : cnt == 1 ? PairClass::H6 : PairClass::H7;
      }
      klass[h][hp - h - 1] = k;
    }
  for (const auto& [i, j, ip, jp] : tuples)
    klass[11 * i + (j - 1)][(11 * ip + (jp - 1)) - (11 * i + (j - 1)) - 1] = PairClass::H4;

  // Multipliers. H1/H2/H3 are constants; the rest follow from the block
  // distance so that the final distance lands in the class target set. The
  // shared gamma_B term of beta cancels, so multipliers are computable before
  // beta is known.
  Dist gb = gamma_B(static_cast<int>(n));
  std::vector<std::vector<Dist>> mult(n);
  for (std::size_t h = 0; h < n; ++h) mult[h].assign(n - h - 1, 0);
  Dist total_copies = 0;
  for (std::size_t h = 0; h < n; ++h)
    for (std::size_t hp = h + 1; hp < n; ++hp) {
      Dist dc = hamming_distance(C.row(h), C.row(hp));
      Dist c;
      switch (klass[h][hp - h - 1]) {
        case PairClass::H1: c = 4; break;
        case PairClass::H2: c = 5; break;
        case PairClass::H3: c = 2; break;
        case PairClass::H4:
        case PairClass::H5: c = (8 - dc + 1) / 2; break;
        case PairClass::H6: c = (9 - dc + 1) / 2; break;
        default: c = (10 - dc + 1) / 2; break;
      }
      if (c < 0) throw std::logic_error("reduce_3b2sat: negative multiplier");
      mult[h][hp - h - 1] = c;
      total_copies += c;
    }

  Dist beta = total_copies * gb + 11;
  PairOffsets off(n);
  for (std::size_t h = 0; h < n; ++h)
    for (std::size_t hp = h + 1; hp < n; ++hp)
      off.set_delta(h, hp, (beta - 11) + 2 * mult[h][hp - h - 1]);

  // The construction is asserted, not trusted: every pair must land in its
  // class target set.
  for (std::size_t h = 0; h < n; ++h)
    for (std::size_t hp = h + 1; hp < n; ++hp) {
      Dist d = hamming_distance(C.row(h), C.row(hp)) + off.delta(h, hp);
      auto targets = pair_class_targets(klass[h][hp - h - 1], beta);
      if (std::find(targets.begin(), targets.end(), d) == targets.end())
        throw std::logic_error("reduce_3b2sat: pair distance missed its class target");
    }

  Dist a = alpha.value_or(beta - 3);
  if (a > beta - 3) throw std::invalid_argument("reduce_3b2sat: alpha must be at most beta - 3");
  return Reduction3B2{DmcInstance(std::move(C), a, beta, std::move(off)), beta, std::move(klass)};
}

// Completion derived from a satisfying assignment: the selector entries pick
// one satisfied literal per clause, whose paired entries read 10 while the
// others read 01.
inline CompleteMatrix completion_from_assignment_3b2(const Reduction3B2& red, const CnfFormula& f,
                                                     const std::vector<bool>& assignment) {
  IncompleteMatrix work = red.instance.matrix();
  for (std::size_t i = 0; i < f.clauses.size(); ++i) {
    int chosen = -1;
    for (int j = 0; j < 3; ++j) {
      int lit = f.clauses[i][j];
      bool value = assignment[std::abs(lit) - 1];
      if ((lit > 0) == value) { chosen = j; break; }
    }
    if (chosen < 0) throw std::invalid_argument("completion_from_assignment_3b2: clause unsatisfied");
    // Selector c_i: 00 / 01 / 10 chooses literal 1 / 2 / 3.
    work.set_cell(11 * i + 3, 8 * i + 6, chosen == 2 ? Cell::One : Cell::Zero);
    work.set_cell(11 * i + 3, 8 * i + 7, chosen == 1 ? Cell::One : Cell::Zero);
    for (int j = 0; j < 3; ++j) {
      bool hit = j == chosen;
      work.set_cell(11 * i + j, 8 * i + 2 * j, hit ? Cell::One : Cell::Zero);
      work.set_cell(11 * i + j, 8 * i + 2 * j + 1, hit ? Cell::Zero : Cell::One);
    }
  }
  return CompleteMatrix(std::move(work));
}

// ---------------------------------------------------------------------------
// Reduction from cubic monotone 1-in-3 SAT: k = 3, alpha = beta construction.

struct Reduction1In3 {
  DmcInstance instance;
  Dist alpha = 0;
};

inline Reduction1In3 reduce_1in3sat(const CnfFormula& f) {
  if (!is_cubic_monotone(f))
    throw std::invalid_argument("reduce_1in3sat: formula is not cubic monotone");
  const int m = f.num_vars;
  const std::size_t n = 2 * static_cast<std::size_t>(m) + 1;
  const std::size_t width = 5 * static_cast<std::size_t>(m) + 1;
  const std::size_t zero_row = n - 1;

  // occurs[i][j] in {0,1,2,3}: x_{j+1} is the occurs-th literal of clause i.
  std::vector<std::vector<int>> occurs(m, std::vector<int>(m, 0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < 3; ++j) occurs[i][f.clauses[i][j] - 1] = j + 1;

  IncompleteMatrix C(n, width, Cell::Zero);
  for (int v = 0; v < m; ++v) {
    // Variable row: paired missing entries on the diagonal, literal-position
    // codes under each clause containing the variable, and a trailing 1.
    C.set_cell(v, 2 * v, Cell::Missing);
    C.set_cell(v, 2 * v + 1, Cell::Missing);
    for (int i = 0; i < m; ++i) {
      int slot = occurs[i][v];
      if (slot == 0) continue;
      std::size_t base = 2 * static_cast<std::size_t>(m) + 3 * i;
      // 011 / 101 / 110 for the 1st / 2nd / 3rd literal.
      C.set_cell(v, base + 0, slot == 1 ? Cell::Zero : Cell::One);
      C.set_cell(v, base + 1, slot == 2 ? Cell::Zero : Cell::One);
      C.set_cell(v, base + 2, slot == 3 ? Cell::Zero : Cell::One);
    }
    C.set_cell(v, width - 1, Cell::One);
  }
  for (int i = 0; i < m; ++i) {
    // Clause row: 10 under each member variable, three missing entries on the
    // clause diagonal.
    std::size_t r = static_cast<std::size_t>(m) + i;
    for (int v = 0; v < m; ++v)
      if (occurs[i][v] != 0) C.set_cell(r, 2 * v, Cell::One);
    std::size_t base = 2 * static_cast<std::size_t>(m) + 3 * i;
    C.set_cell(r, base + 0, Cell::Missing);
    C.set_cell(r, base + 1, Cell::Missing);
    C.set_cell(r, base + 2, Cell::Missing);
  }

  // Stack multipliers per pair; alpha accumulates gamma_B per appended copy.
  Dist gb = gamma_B(static_cast<int>(n));
  PairOffsets off(n);
  std::vector<std::vector<Dist>> copies(n);
  for (std::size_t h = 0; h < n; ++h) copies[h].assign(n, 0);
  Dist total = 0;
  auto add_copies = [&](std::size_t h, std::size_t hp, Dist c) {
    copies[h][hp] += c;
    total += c;
  };
  for (int v = 0; v < m; ++v) add_copies(v, zero_row, 3);
  for (int i = 0; i < m; ++i) add_copies(m + i, zero_row, 5);
  for (int v = 0; v < m; ++v)
    for (int vp = v + 1; vp < m; ++vp) {
      Dist shared = 0;
      for (int i = 0; i < m; ++i) shared += occurs[i][v] != 0 && occurs[i][vp] != 0;
      add_copies(v, vp, shared);
    }
  for (int i = 0; i < m; ++i)
    for (int ip = i + 1; ip < m; ++ip) {
      Dist shared = 0;
      for (int v = 0; v < m; ++v) shared += occurs[i][v] != 0 && occurs[ip][v] != 0;
      add_copies(m + i, m + ip, shared + 3);
    }
  for (int v = 0; v < m; ++v)
    for (int i = 0; i < m; ++i) add_copies(v, m + i, occurs[i][v] != 0 ? 2 : 1);

  Dist alpha = 14 + total * gb;
  for (std::size_t h = 0; h < n; ++h)
    for (std::size_t hp = h + 1; hp < n; ++hp)
      off.set_delta(h, hp, (alpha - 14) + 2 * copies[h][hp]);

  // Assert the block distance table the offsets were tuned for.
  for (int v = 0; v < m; ++v) {
    if (hamming_distance(C.row(v), C.row(zero_row)) != 7)
      throw std::logic_error("reduce_1in3sat: variable row base distance is off");
    if (hamming_distance(C.row(m + v), C.row(zero_row)) != 3)
      throw std::logic_error("reduce_1in3sat: clause row base distance is off");
  }
  for (std::size_t h = 0; h < n; ++h)
    for (std::size_t hp = h + 1; hp < n; ++hp) {
      Dist d = hamming_distance(C.row(h), C.row(hp)) + off.delta(h, hp);
      bool var_pair = hp < static_cast<std::size_t>(m);
      bool clause_pair = h >= static_cast<std::size_t>(m) && hp < zero_row;
      bool mixed = h < static_cast<std::size_t>(m) && hp >= static_cast<std::size_t>(m) && hp < zero_row;
      Dist expect;
      if (hp == zero_row) expect = alpha - 1;
      else if (var_pair || clause_pair) expect = alpha - 2;
      else if (mixed) expect = occurs[hp - m][h] != 0 ? alpha - 3 : alpha - 2;
      else expect = -1;
      if (d != expect) throw std::logic_error("reduce_1in3sat: pair distance missed its target");
    }

  return Reduction1In3{DmcInstance(std::move(C), alpha, alpha, std::move(off)), alpha};
}

// Completion from a 1-in-3 assignment: variable pairs read 10 when true and
// 01 when false; each clause triple holds a single 1 marking its satisfied
// literal.
inline CompleteMatrix completion_from_assignment_1in3(const Reduction1In3& red, const CnfFormula& f,
                                                      const std::vector<bool>& assignment) {
  const int m = f.num_vars;
  IncompleteMatrix work = red.instance.matrix();
  for (int v = 0; v < m; ++v) {
    work.set_cell(v, 2 * v, assignment[v] ? Cell::One : Cell::Zero);
    work.set_cell(v, 2 * v + 1, assignment[v] ? Cell::Zero : Cell::One);
  }
  for (int i = 0; i < m; ++i) {
    int chosen = -1;
    for (int j = 0; j < 3; ++j)
      if (assignment[f.clauses[i][j] - 1]) {
        if (chosen >= 0) throw std::invalid_argument("completion_from_assignment_1in3: two true literals");
        chosen = j;
      }
    if (chosen < 0) throw std::invalid_argument("completion_from_assignment_1in3: no true literal");
    std::size_t base = 2 * static_cast<std::size_t>(m) + 3 * i;
    for (int j = 0; j < 3; ++j)
      work.set_cell(static_cast<std::size_t>(m) + i, base + j, j == chosen ? Cell::One : Cell::Zero);
  }
  return CompleteMatrix(std::move(work));
}

// ---------------------------------------------------------------------------
// Orthogonal vectors embedding.

struct OvInstance {
  std::vector<RowVector> u, v;  // complete vectors of a common length
};

// 2n x 6l complete matrix whose diameter is 5l exactly when some u and v are
// coordinate-wise orthogonal.
inline CompleteMatrix gen_ov(const OvInstance& inst) {
  if (inst.u.size() != inst.v.size() || inst.u.empty())
    throw std::invalid_argument("gen_ov: need two equal-size nonempty vector sets");
  const std::size_t n = inst.u.size();
  const std::size_t l = inst.u[0].size();
  for (const auto& r : inst.u)
    if (r.size() != l || !r.complete()) throw std::invalid_argument("gen_ov: malformed u vector");
  for (const auto& r : inst.v)
    if (r.size() != l || !r.complete()) throw std::invalid_argument("gen_ov: malformed v vector");

  IncompleteMatrix T(2 * n, 6 * l, Cell::Zero);
  auto put = [&](std::size_t row, std::size_t group, const char* bits) {
    for (int t = 0; t < 3; ++t)
      T.set_cell(row, 3 * group + t, bits[t] == '1' ? Cell::One : Cell::Zero);
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < 2 * l; ++j) {
      if (j < l) put(i, j, inst.u[i].at(j) == Cell::One ? "111" : "001");
      else put(i, j, "000");
      if (j < l) put(n + i, j, inst.v[i].at(j) == Cell::One ? "111" : "010");
      else put(n + i, j, "111");
    }
  }
  return CompleteMatrix(std::move(T));
}

// ---------------------------------------------------------------------------
// Random and planted instances.

struct PlantedInstance {
  DmcInstance instance;
  CompleteMatrix witness;
};

// Draw a complete matrix, take alpha/beta from its own diameter stats, then
// erase cells independently; the result is Yes by construction.
inline PlantedInstance plant_yes_instance(int n, int l, double missing_rate, std::uint64_t seed) {
  if (n < 1 || l < 1) throw std::invalid_argument("plant_yes_instance: dimensions must be positive");
  if (!(missing_rate >= 0.0 && missing_rate < 1.0))
    throw std::invalid_argument("plant_yes_instance: missing rate must be in [0, 1)");
  std::mt19937_64 rng(seed);
  IncompleteMatrix grid(static_cast<std::size_t>(n), static_cast<std::size_t>(l));
  for (std::size_t i = 0; i < grid.n(); ++i)
    for (std::size_t j = 0; j < grid.l(); ++j)
      grid.set_cell(i, j, (rng() & 1) ? Cell::One : Cell::Zero);
  CompleteMatrix T(grid);
  DiameterStats st = diameter_stats(T);
  Dist alpha = n == 1 ? 0 : st.gamma;

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  IncompleteMatrix S = T.grid();
  for (std::size_t i = 0; i < S.n(); ++i)
    for (std::size_t j = 0; j < S.l(); ++j)
      if (coin(rng) < missing_rate) S.set_cell(i, j, Cell::Missing);
  return PlantedInstance{DmcInstance(std::move(S), alpha, st.delta), std::move(T)};
}

// Base row of zeros; every other row flips the core columns plus a private
// petal block. Distances: 2 * petal between non-base rows, core + petal to
// the base row.
inline CompleteMatrix plant_sunflower_matrix(int n, int core_size, int petal_size, int l) {
  if (n < 1 || core_size < 0 || petal_size < 0)
    throw std::invalid_argument("plant_sunflower_matrix: malformed parameters");
  if (l < core_size + (n - 1) * petal_size)
    throw std::invalid_argument("plant_sunflower_matrix: width too small");
  // The all-zero base row sits last as the reference row.
  IncompleteMatrix m(static_cast<std::size_t>(n), static_cast<std::size_t>(l), Cell::Zero);
  for (int i = 0; i + 1 < n; ++i) {
    for (int c = 0; c < core_size; ++c) m.set_cell(i, c, Cell::One);
    for (int p = 0; p < petal_size; ++p)
      m.set_cell(i, core_size + i * petal_size + p, Cell::One);
  }
  return CompleteMatrix(std::move(m));
}

// Random matrix for harnesses: uniform bits, then up to max_missing erasures
// with at most k_cap per row.
inline IncompleteMatrix random_incomplete_matrix(std::mt19937_64& rng, int n, int l, int k_cap,
                                                 int max_missing) {
  IncompleteMatrix m(static_cast<std::size_t>(n), static_cast<std::size_t>(l));
  for (std::size_t i = 0; i < m.n(); ++i)
    for (std::size_t j = 0; j < m.l(); ++j)
      m.set_cell(i, j, (rng() & 1) ? Cell::One : Cell::Zero);
  if (k_cap <= 0 || max_missing <= 0) return m;
  std::uniform_int_distribution<int> pick_target(0, std::min(max_missing, n * std::min(k_cap, l)));
  int target = pick_target(rng);
  std::vector<int> per_row(static_cast<std::size_t>(n), 0);
  std::uniform_int_distribution<int> pick_row(0, n - 1), pick_col(0, l - 1);
  int placed = 0;
  for (int attempt = 0; attempt < 20 * std::max(target, 1) + 100 && placed < target; ++attempt) {
    int i = pick_row(rng), j = pick_col(rng);
    if (per_row[i] >= k_cap) continue;
    if (m.cell(i, j) == Cell::Missing) continue;
    m.set_cell(i, j, Cell::Missing);
    ++per_row[i];
    ++placed;
  }
  return m;
}

}  // namespace dmc
