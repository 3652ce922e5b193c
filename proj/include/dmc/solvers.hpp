#pragma once

// Per-regime polynomial solvers and the auto-dispatcher.
//
// Regimes:
//   n <= 2                 closed form over the achievable-distance interval
//   (0, 1)                 at most one dirty column
//   (0, 2)                 radius-1 center over the dirty columns
//   (0, 3)                 column-drop / three-column center families
//   alpha = beta           parity for odd alpha, sunflower completion for even
//   beta = alpha + 1       sunflower completion (odd alpha) or core/excess-row
//                          enumeration (even alpha)
//   k = 1                  2-SAT over single missing entries
//   k = 2, alpha = beta    pivot normalization plus 2-SAT over fill choices
//
// Named solvers reject instances outside their regime with a usage error.
// Structural solvers require zero pair offsets; only the oracle solvers and
// verification accept offsets.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dmc/conrmc.hpp"
#include "dmc/factor.hpp"
#include "dmc/matrix.hpp"
#include "dmc/oracle.hpp"
#include "dmc/twosat.hpp"

namespace dmc {

enum class SolverChoice {
  Auto,
  Oracle,
  Backtrack,
  D0B1,
  D0B2,
  D0B3,
  AlphaEqBeta,
  AlphaPlus1,
  K1,
  K2Eq,
};

inline const char* solver_name(SolverChoice c) {
  switch (c) {
    case SolverChoice::Auto: return "auto";
    case SolverChoice::Oracle: return "oracle";
    case SolverChoice::Backtrack: return "backtrack";
    case SolverChoice::D0B1: return "d0b1";
    case SolverChoice::D0B2: return "d0b2";
    case SolverChoice::D0B3: return "d0b3";
    case SolverChoice::AlphaEqBeta: return "alpha_eq_beta";
    case SolverChoice::AlphaPlus1: return "alpha_plus1";
    case SolverChoice::K1: return "k1";
    case SolverChoice::K2Eq: return "k2eq";
  }
  return "?";
}

inline std::optional<SolverChoice> solver_from_name(std::string_view s) {
  for (SolverChoice c : {SolverChoice::Auto, SolverChoice::Oracle, SolverChoice::Backtrack,
                         SolverChoice::D0B1, SolverChoice::D0B2, SolverChoice::D0B3,
                         SolverChoice::AlphaEqBeta, SolverChoice::AlphaPlus1, SolverChoice::K1,
                         SolverChoice::K2Eq})
    if (s == solver_name(c)) return c;
  return std::nullopt;
}

namespace detail {

inline void require_zero_offsets(const DmcInstance& inst, const char* who) {
  if (!inst.offsets().all_zero())
    throw std::invalid_argument(std::string(who) + ": pair offsets are only supported by oracle/backtrack");
}

// Unique known value of a non-dirty column, 0 when the column is all missing.
inline Cell non_dirty_fill(const IncompleteMatrix& S, std::size_t j) {
  for (std::size_t i = 0; i < S.n(); ++i) {
    Cell c = S.cell(i, j);
    if (c != Cell::Missing) return c;
  }
  return Cell::Zero;
}

// Scatter a completion of the selected columns back into the full matrix.
// Every column outside the selection must be non-dirty; its missing cells take
// the column's unique known value (0 when fully missing).
inline CompleteMatrix reinflate(const IncompleteMatrix& S, std::span<const int> cols,
                                const CompleteMatrix& sub) {
  IncompleteMatrix work = S;
  for (std::size_t t = 0; t < cols.size(); ++t)
    for (std::size_t i = 0; i < S.n(); ++i)
      work.set_cell(i, static_cast<std::size_t>(cols[t]), sub.cell(i, t));
  std::vector<bool> selected(S.l(), false);
  for (int j : cols) selected[static_cast<std::size_t>(j)] = true;
  for (std::size_t j = 0; j < S.l(); ++j) {
    if (selected[j]) continue;
    Cell fill = non_dirty_fill(S, j);
    for (std::size_t i = 0; i < S.n(); ++i)
      if (work.cell(i, j) == Cell::Missing) work.set_cell(i, j, fill);
  }
  return CompleteMatrix(std::move(work));
}

// Complete a matrix that has no dirty columns: each column takes its unique
// known value, 0 when fully missing.
inline CompleteMatrix complete_non_dirty(const IncompleteMatrix& S) {
  IncompleteMatrix work = S;
  for (std::size_t j = 0; j < S.l(); ++j) {
    Cell fill = non_dirty_fill(S, j);
    for (std::size_t i = 0; i < S.n(); ++i)
      if (work.cell(i, j) == Cell::Missing) work.set_cell(i, j, fill);
  }
  return CompleteMatrix(std::move(work));
}

inline std::vector<int> all_columns_except(std::size_t l, std::span<const int> drop) {
  std::vector<bool> dropped(l, false);
  for (int j : drop) dropped[static_cast<std::size_t>(j)] = true;
  std::vector<int> keep;
  for (std::size_t j = 0; j < l; ++j)
    if (!dropped[j]) keep.push_back(static_cast<int>(j));
  return keep;
}

}  // namespace detail

// n <= 2. One row is always Yes; for two rows the achievable distances form
// the interval [known disagreements, known disagreements + free positions],
// where a position is free when either row is missing there. Offsets are
// folded into the bounds.
inline SolveResult solve_n2(const DmcInstance& inst) {
  const IncompleteMatrix& S = inst.matrix();
  if (S.n() > 2) throw std::invalid_argument("solve_n2: more than two rows");

  if (S.n() == 1) {
    IncompleteMatrix work = S;
    for (std::size_t j = 0; j < S.l(); ++j)
      if (work.cell(0, j) == Cell::Missing) work.set_cell(0, j, Cell::Zero);
    auto r = SolveResult::make_yes(CompleteMatrix(std::move(work)));
    r.solver = "n2";
    return r;
  }

  Dist shift = inst.offsets().delta(0, 1);
  Dist d_known = hamming_distance(S.row(0), S.row(1));
  std::vector<int> free_cols;
  for (std::size_t j = 0; j < S.l(); ++j)
    if (!S.row(0).known(j) || !S.row(1).known(j)) free_cols.push_back(static_cast<int>(j));

  Dist lo = std::max(inst.alpha() - shift, d_known);
  Dist hi = std::min(inst.beta() - shift, d_known + static_cast<Dist>(free_cols.size()));
  if (lo > hi) {
    auto r = SolveResult::make_no();
    r.solver = "n2";
    return r;
  }

  Dist need = lo - d_known;  // extra disagreements to place among free columns
  IncompleteMatrix work = S;
  for (int j : free_cols) {
    bool disagree = need > 0;
    if (disagree) --need;
    std::size_t col = static_cast<std::size_t>(j);
    Cell a = work.cell(0, col), b = work.cell(1, col);
    if (a == Cell::Missing && b == Cell::Missing) {
      work.set_cell(0, col, disagree ? Cell::One : Cell::Zero);
      work.set_cell(1, col, Cell::Zero);
    } else if (a == Cell::Missing) {
      work.set_cell(0, col, disagree == (b == Cell::Zero) ? Cell::One : Cell::Zero);
    } else {
      work.set_cell(1, col, disagree == (a == Cell::Zero) ? Cell::One : Cell::Zero);
    }
  }
  auto r = SolveResult::make_yes(CompleteMatrix(std::move(work)));
  r.solver = "n2";
  return r;
}

// (0, 1): Yes iff at most one dirty column. The dirty column keeps its known
// entries and completes missing ones with the column's majority value.
inline SolveResult solve_d0b1(const DmcInstance& inst) {
  if (inst.alpha() != 0 || inst.beta() != 1)
    throw std::invalid_argument("solve_d0b1: regime is alpha = 0, beta = 1");
  detail::require_zero_offsets(inst, "solve_d0b1");
  const IncompleteMatrix& S = inst.matrix();

  auto dirty = dirty_columns(S);
  if (dirty.size() > 1) {
    auto r = SolveResult::make_no();
    r.solver = "d0b1";
    return r;
  }

  IncompleteMatrix work = S;
  for (std::size_t j = 0; j < S.l(); ++j) {
    Cell fill;
    if (!dirty.empty() && static_cast<std::size_t>(dirty[0]) == j) {
      int zeros = 0, ones = 0;
      for (std::size_t i = 0; i < S.n(); ++i) {
        zeros += S.cell(i, j) == Cell::Zero;
        ones += S.cell(i, j) == Cell::One;
      }
      fill = ones > zeros ? Cell::One : Cell::Zero;
    } else {
      fill = detail::non_dirty_fill(S, j);
    }
    for (std::size_t i = 0; i < S.n(); ++i)
      if (work.cell(i, j) == Cell::Missing) work.set_cell(i, j, fill);
  }
  auto r = SolveResult::make_yes(CompleteMatrix(std::move(work)));
  r.solver = "d0b1";
  return r;
}

// (0, 2): restrict to dirty columns; small widths go to backtracking, wider
// ones are equivalent to finding a radius-1 center over the dirty columns.
inline SolveResult solve_d0b2(const DmcInstance& inst, const SearchBudget& budget = {}) {
  if (inst.alpha() != 0 || inst.beta() != 2)
    throw std::invalid_argument("solve_d0b2: regime is alpha = 0, beta = 2");
  detail::require_zero_offsets(inst, "solve_d0b2");
  const IncompleteMatrix& S = inst.matrix();

  auto dirty = dirty_columns(S);
  if (dirty.empty()) {
    auto r = SolveResult::make_yes(detail::complete_non_dirty(S));
    r.solver = "d0b2";
    return r;
  }

  IncompleteMatrix sub = S.with_columns(dirty);
  if (dirty.size() <= 4) {
    SolveResult bt = solve_backtracking(DmcInstance(sub, 0, 2), budget);
    SolveResult r = bt;
    if (bt.yes()) r = SolveResult::make_yes(detail::reinflate(S, dirty, *bt.witness), bt.nodes);
    r.solver = "d0b2";
    return r;
  }

  auto center = solve_conrmc01({sub, std::vector<int>(S.n(), 1)});
  if (!center) {
    auto r = SolveResult::make_no();
    r.solver = "d0b2";
    return r;
  }
  std::vector<RowVector> rows;
  rows.reserve(S.n());
  for (std::size_t i = 0; i < S.n(); ++i) rows.push_back(apply_completion(sub.row(i), *center));
  auto r = SolveResult::make_yes(detail::reinflate(S, dirty, CompleteMatrix(IncompleteMatrix(std::move(rows)))));
  r.solver = "d0b2";
  return r;
}

// (0, 3): first try diameter 2; then, over the dirty columns, either
// backtracking (width <= 13) or the two center families: drop one column with
// radii 1, or pin three columns to values (v1, v2, v3) with radii forced to 0
// on rows already matching a complement.
inline SolveResult solve_d0b3(const DmcInstance& inst, const SearchBudget& budget = {}) {
  if (inst.alpha() != 0 || inst.beta() != 3)
    throw std::invalid_argument("solve_d0b3: regime is alpha = 0, beta = 3");
  detail::require_zero_offsets(inst, "solve_d0b3");
  const IncompleteMatrix& S = inst.matrix();

  SolveResult two = solve_d0b2(DmcInstance(S, 0, 2), budget);
  if (two.yes()) {
    two.solver = "d0b3";
    return two;
  }

  auto dirty = dirty_columns(S);
  // No dirty columns would have been a (0, 2) Yes already.
  IncompleteMatrix sub = S.with_columns(dirty);
  const std::size_t n = S.n();
  const std::size_t lp = dirty.size();

  if (lp <= 13) {
    SolveResult bt = solve_backtracking(DmcInstance(sub, 0, 3), budget);
    SolveResult r = bt;
    if (bt.yes()) r = SolveResult::make_yes(detail::reinflate(S, dirty, *bt.witness), bt.nodes);
    r.solver = "d0b3";
    return r;
  }

  // Family 1: drop one column, radius 1 everywhere.
  for (std::size_t j = 0; j < lp; ++j) {
    std::vector<int> drop{static_cast<int>(j)};
    auto keep = detail::all_columns_except(lp, drop);
    auto center = solve_conrmc01({sub.with_columns(keep), std::vector<int>(n, 1)});
    if (!center) continue;
    IncompleteMatrix completed(n, lp);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t t = 0; t < keep.size(); ++t) {
        Cell c = sub.cell(i, static_cast<std::size_t>(keep[t]));
        completed.set_cell(i, static_cast<std::size_t>(keep[t]),
                           c == Cell::Missing ? center->at(t) : c);
      }
      Cell c = sub.cell(i, j);
      completed.set_cell(i, j, c == Cell::Missing ? Cell::Zero : c);
    }
    auto r = SolveResult::make_yes(detail::reinflate(S, dirty, CompleteMatrix(std::move(completed))));
    r.solver = "d0b3";
    return r;
  }

  // Family 2: pin three columns to (v1, v2, v3). A row already holding the
  // complement at one of the pinned columns must match the center exactly
  // elsewhere; a row holding complements at all three cannot exist.
  for (std::size_t j1 = 0; j1 < lp; ++j1)
    for (std::size_t j2 = j1 + 1; j2 < lp; ++j2)
      for (std::size_t j3 = j2 + 1; j3 < lp; ++j3)
        for (int bits = 0; bits < 8; ++bits) {
          const std::size_t pin[3] = {j1, j2, j3};
          Cell v[3];
          for (int t = 0; t < 3; ++t) v[t] = (bits >> (2 - t)) & 1 ? Cell::One : Cell::Zero;

          std::vector<int> radii(n, 1);
          bool viable = true;
          for (std::size_t i = 0; i < n && viable; ++i) {
            int complements = 0;
            for (int t = 0; t < 3; ++t) {
              Cell c = sub.cell(i, pin[t]);
              if (c != Cell::Missing && c != v[t]) ++complements;
            }
            if (complements == 3) viable = false;
            else if (complements > 0) radii[i] = 0;
          }
          if (!viable) continue;

          std::vector<int> drop{static_cast<int>(j1), static_cast<int>(j2), static_cast<int>(j3)};
          auto keep = detail::all_columns_except(lp, drop);
          auto center = solve_conrmc01({sub.with_columns(keep), radii});
          if (!center) continue;

          RowVector full_center(lp);
          for (std::size_t t = 0; t < keep.size(); ++t)
            full_center.set(static_cast<std::size_t>(keep[t]), center->at(t));
          for (int t = 0; t < 3; ++t) full_center.set(pin[t], v[t]);

          std::vector<RowVector> rows;
          rows.reserve(n);
          for (std::size_t i = 0; i < n; ++i) rows.push_back(apply_completion(sub.row(i), full_center));
          auto r = SolveResult::make_yes(
              detail::reinflate(S, dirty, CompleteMatrix(IncompleteMatrix(std::move(rows)))));
          r.solver = "d0b3";
          return r;
        }

  auto r = SolveResult::make_no();
  r.solver = "d0b3";
  return r;
}

// alpha = beta. Odd alpha with three or more rows is impossible because the
// three pairwise distances of any row triple have even sum. Even alpha reduces
// to a sunflower completion with an appended all-missing row once n is large
// enough for the uniform difference sets to form a sunflower.
inline SolveResult solve_alpha_eq_beta(const DmcInstance& inst, const SearchBudget& budget = {}) {
  if (inst.alpha() != inst.beta())
    throw std::invalid_argument("solve_alpha_eq_beta: regime is alpha = beta");
  detail::require_zero_offsets(inst, "solve_alpha_eq_beta");
  const IncompleteMatrix& S = inst.matrix();
  const Dist a = inst.alpha();

  if (S.n() <= 2) {
    auto r = solve_n2(inst);
    r.solver = "alpha_eq_beta";
    return r;
  }
  if (a % 2 == 1) {
    auto r = SolveResult::make_no();
    r.solver = "alpha_eq_beta";
    return r;
  }

  const Dist half = a / 2;
  if (static_cast<Dist>(S.n()) < half * half + half + 3) {
    auto r = solve_backtracking(inst, budget);
    r.solver = "alpha_eq_beta";
    return r;
  }

  IncompleteMatrix extended = S;
  extended.append_row(RowVector(S.l()));
  auto completion = solve_smc({std::move(extended), static_cast<int>(half),
                               a * static_cast<Dist>(S.n()) / 2});
  if (!completion) {
    auto r = SolveResult::make_no();
    r.solver = "alpha_eq_beta";
    return r;
  }
  std::vector<int> first_rows(S.n());
  std::iota(first_rows.begin(), first_rows.end(), 0);
  auto r = SolveResult::make_yes(CompleteMatrix(completion->grid().with_rows(first_rows)));
  r.solver = "alpha_eq_beta";
  return r;
}

namespace detail {

// Joint search for the last-row completion and the excess-row completions on
// the column set J: the last row must agree with every retained row, each
// excess row must sit at distance half + 1 from it, and excess rows must sit
// at pairwise distance 2 * half. Returns the completed rows (excess rows in
// order, last row at the back), or nullopt.
struct ExcessSystem {
  std::vector<RowVector> rows;  // |I_beta| + 1 rows over the columns J
};

inline std::optional<ExcessSystem> solve_excess_system(
    const IncompleteMatrix& sperm, const std::vector<int>& excess_rows, const std::vector<int>& J,
    Dist half, std::uint64_t& nodes, std::uint64_t max_nodes, bool& out_of_budget) {
  const std::size_t n = sperm.n();

  // Forced values of the last row on J: its own knowns plus the knowns of
  // every retained row (they must match it exactly on J).
  RowVector t_last(J.size());
  std::vector<bool> is_excess(n, false);
  for (int i : excess_rows) is_excess[static_cast<std::size_t>(i)] = true;
  for (std::size_t t = 0; t < J.size(); ++t) {
    Cell forced = Cell::Missing;
    for (std::size_t i = 0; i < n; ++i) {
      if (is_excess[i]) continue;
      Cell c = sperm.cell(i, static_cast<std::size_t>(J[t]));
      if (c == Cell::Missing) continue;
      if (forced == Cell::Missing) forced = c;
      else if (forced != c) return std::nullopt;
    }
    if (forced != Cell::Missing) t_last.set(t, forced);
  }

  std::vector<RowVector> parts;  // excess rows restricted to J, then the last row
  for (int i : excess_rows) {
    RowVector r(J.size());
    for (std::size_t t = 0; t < J.size(); ++t)
      r.set(t, sperm.cell(static_cast<std::size_t>(i), static_cast<std::size_t>(J[t])));
    parts.push_back(std::move(r));
  }
  parts.push_back(std::move(t_last));

  const std::size_t m = parts.size();
  std::vector<RowVector> placed(m);

  // Place the last row first, then each excess row with exact checks.
  auto dfs = [&](auto&& self, std::size_t idx) -> bool {
    if (idx == m) return true;
    std::size_t part = idx == 0 ? m - 1 : idx - 1;  // last row first
    auto missing = parts[part].missing_positions();
    if (missing.size() > 62) {
      out_of_budget = true;
      return false;
    }
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << missing.size()); ++code) {
      if (nodes >= max_nodes) {
        out_of_budget = true;
        return false;
      }
      ++nodes;
      RowVector r = parts[part];
      for (std::size_t t = 0; t < missing.size(); ++t)
        r.set(static_cast<std::size_t>(missing[t]),
              (code >> (missing.size() - 1 - t)) & 1 ? Cell::One : Cell::Zero);
      bool ok = true;
      if (idx > 0) {
        ok = hamming_distance(r, placed[m - 1]) == half + 1;
        for (std::size_t other = 0; other + 1 < idx && ok; ++other)
          ok = hamming_distance(r, placed[other]) == 2 * half;
      }
      if (!ok) continue;
      placed[part] = std::move(r);
      if (self(self, idx + 1)) return true;
      if (out_of_budget) return false;
    }
    return false;
  };

  if (!dfs(dfs, 0)) return std::nullopt;
  return ExcessSystem{std::move(placed)};
}

}  // namespace detail

// beta = alpha + 1. Odd alpha: sunflower completion where one petal may fall
// one short. Even alpha: either dropping one column leaves an (alpha, alpha)
// instance, or, for some reference row, a core C plus a bounded set of excess
// rows and their columns J explains every distance-beta pair and the rest
// reduces to a sunflower completion.
inline SolveResult solve_alpha_plus1(const DmcInstance& inst, const SearchBudget& budget = {}) {
  if (inst.beta() != inst.alpha() + 1)
    throw std::invalid_argument("solve_alpha_plus1: regime is beta = alpha + 1");
  detail::require_zero_offsets(inst, "solve_alpha_plus1");
  const IncompleteMatrix& S = inst.matrix();
  const Dist a = inst.alpha();
  const Dist b = inst.beta();
  const std::size_t n = S.n();

  if (n <= 2) {
    auto r = solve_n2(inst);
    r.solver = "alpha_plus1";
    return r;
  }
  if (a == 0) {
    // (0, 1) is the dirty-column case.
    auto r = solve_d0b1(inst);
    r.solver = "alpha_plus1";
    return r;
  }

  if (a % 2 == 1) {
    if (static_cast<Dist>(n) < b * b / 2 + b + 7) {
      auto r = solve_backtracking(inst, budget);
      r.solver = "alpha_plus1";
      return r;
    }
    const Dist s = b / 2;
    IncompleteMatrix extended = S;
    extended.append_row(RowVector(S.l()));
    auto completion = solve_smc({std::move(extended), static_cast<int>(s),
                                 static_cast<Dist>(n) * s - 1});
    SolveResult r = SolveResult::make_no();
    if (completion) {
      std::vector<int> first_rows(n);
      std::iota(first_rows.begin(), first_rows.end(), 0);
      r = SolveResult::make_yes(CompleteMatrix(completion->grid().with_rows(first_rows)));
    }
    r.solver = "alpha_plus1";
    return r;
  }

  // Even alpha. Enumeration thresholds; ceilings enlarge the ranges, which
  // only adds choices.
  const Dist c = (b * (b + 2) + 3) / 4 + 4;
  if (static_cast<Dist>(n) <= 2 * c) {
    auto r = solve_backtracking(inst, budget);
    r.solver = "alpha_plus1";
    return r;
  }

  const Dist half = a / 2;
  const std::size_t l = S.l();
  std::uint64_t nodes = 0;
  bool out_of_budget = false;

  // Branch (a): drop one column and solve (alpha, alpha) on the rest.
  if (l >= 2) {
    for (std::size_t j = 0; j < l && !out_of_budget; ++j) {
      std::vector<int> drop{static_cast<int>(j)};
      auto keep = detail::all_columns_except(l, drop);
      SolveResult sub = solve_alpha_eq_beta(DmcInstance(S.with_columns(keep), a, a), budget);
      if (sub.inconclusive()) out_of_budget = true;
      if (!sub.yes()) continue;
      IncompleteMatrix work = S;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t t = 0; t < keep.size(); ++t)
          work.set_cell(i, static_cast<std::size_t>(keep[t]), sub.witness->cell(i, t));
        if (work.cell(i, j) == Cell::Missing) work.set_cell(i, j, Cell::Zero);
      }
      auto r = SolveResult::make_yes(CompleteMatrix(std::move(work)), nodes);
      r.solver = "alpha_plus1";
      return r;
    }
  }

  // Branch (b): choose a reference row, a core C of size alpha/2, a set of
  // excess rows at distance beta from it, and the columns J their difference
  // sets occupy outside C.
  for (std::size_t ref = 0; ref < n && !out_of_budget; ++ref) {
    std::vector<int> order;
    for (std::size_t i = 0; i < n; ++i)
      if (i != ref) order.push_back(static_cast<int>(i));
    order.push_back(static_cast<int>(ref));
    IncompleteMatrix sperm = S.with_rows(order);
    const std::size_t last = n - 1;

    // All size-(alpha/2) column subsets, lexicographic.
    std::vector<int> C(static_cast<std::size_t>(half));
    std::iota(C.begin(), C.end(), 0);
    bool more_cores = static_cast<std::size_t>(half) <= l;
    if (half == 0) C.clear();

    while (more_cores && !out_of_budget) {
      // Forced completion of the last row on C: every other row must differ
      // there, so a column admitting both values among the others fails.
      RowVector t_core(C.size());
      bool core_ok = true;
      for (std::size_t t = 0; t < C.size() && core_ok; ++t) {
        std::size_t j = static_cast<std::size_t>(C[t]);
        Cell own = sperm.cell(last, j);
        bool others0 = false, others1 = false;
        for (std::size_t i = 0; i < last; ++i) {
          Cell cc = sperm.cell(i, j);
          others0 = others0 || cc == Cell::Zero;
          others1 = others1 || cc == Cell::One;
        }
        Cell want;
        if (own != Cell::Missing) want = own;
        else if (others0 && others1) { core_ok = false; break; }
        else if (others0) want = Cell::One;
        else if (others1) want = Cell::Zero;
        else want = Cell::Zero;
        if ((want == Cell::Zero && others0) || (want == Cell::One && others1)) core_ok = false;
        t_core.set(t, want);
      }

      if (core_ok) {
        std::vector<bool> in_core(l, false);
        for (int j : C) in_core[static_cast<std::size_t>(j)] = true;

        // Enumerate excess-row subsets by size.
        std::vector<int> candidates(last);
        std::iota(candidates.begin(), candidates.end(), 0);
        std::vector<int> excess;
        auto try_choice = [&](const std::vector<int>& I_beta) -> std::optional<SolveResult> {
          if (nodes >= budget.max_nodes) {
            out_of_budget = true;
            return std::nullopt;
          }
          ++nodes;
          std::vector<bool> is_excess(n, false);
          for (int i : I_beta) is_excess[static_cast<std::size_t>(i)] = true;

          // Required J columns: conflicts among excess rows and the last row
          // outside the core. Everything they disagree on must live inside J.
          std::vector<int> required;
          for (std::size_t j = 0; j < l; ++j) {
            if (in_core[j]) continue;
            bool has0 = false, has1 = false;
            for (std::size_t i = 0; i < n; ++i) {
              if (!is_excess[i] && i != last) continue;
              Cell cc = sperm.cell(i, j);
              has0 = has0 || cc == Cell::Zero;
              has1 = has1 || cc == Cell::One;
            }
            if (has0 && has1) required.push_back(static_cast<int>(j));
          }
          const Dist cap = std::min<Dist>(b * c, static_cast<Dist>(I_beta.size()) * (half + 1));
          if (static_cast<Dist>(required.size()) > cap) return std::nullopt;

          std::vector<int> optional_cols;
          for (std::size_t j = 0; j < l; ++j)
            if (!in_core[j] &&
                !std::binary_search(required.begin(), required.end(), static_cast<int>(j)))
              optional_cols.push_back(static_cast<int>(j));

          // Extras, smallest first.
          std::size_t max_extra = static_cast<std::size_t>(cap - static_cast<Dist>(required.size()));
          max_extra = std::min(max_extra, optional_cols.size());
          std::vector<int> extra;
          std::optional<SolveResult> found;
          auto try_J = [&](const std::vector<int>& J) -> bool {
            if (nodes >= budget.max_nodes) {
              out_of_budget = true;
              return false;
            }
            ++nodes;
            auto system = detail::solve_excess_system(sperm, I_beta, J, half, nodes,
                                                      budget.max_nodes, out_of_budget);
            if (!system) return false;

            // Reduced sunflower instance over the remaining columns.
            std::vector<bool> in_J(l, false);
            for (int j : J) in_J[static_cast<std::size_t>(j)] = true;
            std::vector<int> rest_cols;
            for (std::size_t j = 0; j < l; ++j)
              if (!in_core[j] && !in_J[j]) rest_cols.push_back(static_cast<int>(j));
            if (rest_cols.empty()) return false;

            std::vector<int> kept_rows;
            for (std::size_t i = 0; i < last; ++i)
              if (!is_excess[i]) kept_rows.push_back(static_cast<int>(i));

            IncompleteMatrix reduced(kept_rows.size() + 1, rest_cols.size());
            for (std::size_t ri = 0; ri < kept_rows.size(); ++ri)
              for (std::size_t t = 0; t < rest_cols.size(); ++t)
                reduced.set_cell(ri, t, sperm.cell(static_cast<std::size_t>(kept_rows[ri]),
                                                   static_cast<std::size_t>(rest_cols[t])));
            for (std::size_t t = 0; t < rest_cols.size(); ++t) {
              Cell merged = Cell::Missing;
              for (std::size_t i = 0; i < n; ++i) {
                if (!is_excess[i] && i != last) continue;
                Cell cc = sperm.cell(i, static_cast<std::size_t>(rest_cols[t]));
                if (cc != Cell::Missing) merged = cc;
              }
              reduced.set_cell(kept_rows.size(), t, merged);
            }

            auto smc = solve_smc({std::move(reduced), static_cast<int>(half),
                                  static_cast<Dist>(kept_rows.size()) * half});
            if (!smc) return false;

            // Assemble the full completion in permuted order.
            IncompleteMatrix full(n, l);
            for (std::size_t t = 0; t < rest_cols.size(); ++t) {
              std::size_t j = static_cast<std::size_t>(rest_cols[t]);
              for (std::size_t ri = 0; ri < kept_rows.size(); ++ri)
                full.set_cell(static_cast<std::size_t>(kept_rows[ri]), j, smc->cell(ri, t));
              Cell lastv = smc->cell(kept_rows.size(), t);
              full.set_cell(last, j, lastv);
              for (int i : I_beta) full.set_cell(static_cast<std::size_t>(i), j, lastv);
            }
            for (std::size_t t = 0; t < C.size(); ++t) {
              std::size_t j = static_cast<std::size_t>(C[t]);
              Cell corev = t_core.at(t);
              Cell flipped = corev == Cell::Zero ? Cell::One : Cell::Zero;
              full.set_cell(last, j, corev);
              for (std::size_t i = 0; i < last; ++i) full.set_cell(i, j, flipped);
            }
            const auto& sysrows = system->rows;
            for (std::size_t t = 0; t < J.size(); ++t) {
              std::size_t j = static_cast<std::size_t>(J[t]);
              Cell lastv = sysrows.back().at(t);
              full.set_cell(last, j, lastv);
              for (std::size_t i = 0; i < last; ++i)
                if (!is_excess[i]) full.set_cell(i, j, lastv);
              for (std::size_t e = 0; e < I_beta.size(); ++e)
                full.set_cell(static_cast<std::size_t>(I_beta[e]), j, sysrows[e].at(t));
            }

            // Back to original row order.
            IncompleteMatrix original(n, l);
            for (std::size_t pi = 0; pi < n; ++pi)
              for (std::size_t j = 0; j < l; ++j)
                original.set_cell(static_cast<std::size_t>(order[pi]), j, full.cell(pi, j));
            CompleteMatrix T(std::move(original));
            if (!verify_instance(inst, T))
              throw std::logic_error("solve_alpha_plus1: reconstructed witness failed verification");
            found = SolveResult::make_yes(std::move(T), nodes);
            return true;
          };

          // J = required plus every extra subset of growing size.
          auto rec_extra = [&](auto&& self, std::size_t start, std::size_t want) -> bool {
            if (extra.size() == want) {
              std::vector<int> J = required;
              J.insert(J.end(), extra.begin(), extra.end());
              std::sort(J.begin(), J.end());
              return try_J(J);
            }
            for (std::size_t t = start; t < optional_cols.size(); ++t) {
              extra.push_back(optional_cols[t]);
              if (self(self, t + 1, want)) return true;
              extra.pop_back();
              if (out_of_budget) return false;
            }
            return false;
          };
          for (std::size_t want = 0; want <= max_extra && !out_of_budget; ++want)
            if (rec_extra(rec_extra, 0, want)) return found;
          return std::nullopt;
        };

        std::optional<SolveResult> hit;
        auto rec_rows = [&](auto&& self, std::size_t start, std::size_t want) -> bool {
          if (excess.size() == want) {
            hit = try_choice(excess);
            return hit.has_value();
          }
          for (std::size_t t = start; t < candidates.size(); ++t) {
            excess.push_back(candidates[t]);
            if (self(self, t + 1, want)) return true;
            excess.pop_back();
            if (out_of_budget) return false;
          }
          return false;
        };
        for (std::size_t want = 0; want <= std::min<std::size_t>(static_cast<std::size_t>(c), last) &&
                                   !out_of_budget;
             ++want)
          if (rec_rows(rec_rows, 0, want)) {
            hit->solver = "alpha_plus1";
            return *hit;
          }
      }

      // Next core subset.
      if (C.empty()) break;
      std::size_t t = C.size();
      while (t > 0 && C[t - 1] == static_cast<int>(l - (C.size() - (t - 1)))) --t;
      if (t == 0) more_cores = false;
      else {
        ++C[t - 1];
        for (std::size_t u = t; u < C.size(); ++u) C[u] = C[u - 1] + 1;
      }
    }
  }

  SolveResult r = out_of_budget ? SolveResult::make_inconclusive(nodes) : SolveResult::make_no(nodes);
  r.solver = "alpha_plus1";
  return r;
}

// k = 1: one 2-SAT variable per incomplete row (true = fill with 1).
inline SolveResult solve_k1(const DmcInstance& inst) {
  const IncompleteMatrix& S = inst.matrix();
  if (S.max_missing_per_row() > 1)
    throw std::invalid_argument("solve_k1: regime is at most one missing entry per row");
  detail::require_zero_offsets(inst, "solve_k1");
  const Dist alpha = inst.alpha();
  const Dist beta = inst.beta();
  const std::size_t n = S.n();

  std::vector<int> var(n, -1), col(n, -1);
  TwoSatFormula f;
  for (std::size_t i = 0; i < n; ++i) {
    auto missing = S.row(i).missing_positions();
    if (!missing.empty()) {
      var[i] = f.add_variable();
      col[i] = missing[0];
    }
  }

  auto no = [] {
    auto r = SolveResult::make_no();
    r.solver = "k1";
    return r;
  };

  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t ip = i + 1; ip < n; ++ip) {
      Dist d = hamming_distance(S.row(i), S.row(ip));
      if (d < alpha - 2 || d > beta) return no();
      bool mi = var[i] >= 0, mip = var[ip] >= 0;

      if (d == alpha - 2) {
        if (!mi || !mip || col[i] == col[ip]) return no();
        f.add_unit(lit_eq(var[i], S.cell(ip, col[i]) == Cell::Zero));
        f.add_unit(lit_eq(var[ip], S.cell(i, col[ip]) == Cell::Zero));
      }
      if (d == alpha - 1) {
        if (!mi && !mip) return no();
        if (mi && !mip) f.add_unit(lit_eq(var[i], S.cell(ip, col[i]) == Cell::Zero));
        if (!mi && mip) f.add_unit(lit_eq(var[ip], S.cell(i, col[ip]) == Cell::Zero));
        if (mi && mip && col[i] == col[ip]) {
          f.add_clause(pos(var[i]), pos(var[ip]));
          f.add_clause(neg(var[i]), neg(var[ip]));
        }
        if (mi && mip && col[i] != col[ip])
          f.add_clause(lit_eq(var[i], S.cell(ip, col[i]) == Cell::Zero),
                       lit_eq(var[ip], S.cell(i, col[ip]) == Cell::Zero));
      }
      if (d == beta) {
        if (mi && !mip) f.add_unit(lit_eq(var[i], S.cell(ip, col[i]) == Cell::One));
        if (!mi && mip) f.add_unit(lit_eq(var[ip], S.cell(i, col[ip]) == Cell::One));
        if (mi && mip && col[i] == col[ip]) {
          f.add_clause(pos(var[i]), neg(var[ip]));
          f.add_clause(neg(var[i]), pos(var[ip]));
        }
        if (mi && mip && col[i] != col[ip]) {
          f.add_unit(lit_eq(var[i], S.cell(ip, col[i]) == Cell::One));
          f.add_unit(lit_eq(var[ip], S.cell(i, col[ip]) == Cell::One));
        }
      }
      if (d == beta - 1 && mi && mip && col[i] != col[ip])
        f.add_clause(lit_eq(var[i], S.cell(ip, col[i]) == Cell::One),
                     lit_eq(var[ip], S.cell(i, col[ip]) == Cell::One));
    }

  auto assignment = solve_2sat(f);
  if (!assignment) return no();

  IncompleteMatrix work = S;
  for (std::size_t i = 0; i < n; ++i)
    if (var[i] >= 0)
      work.set_cell(i, static_cast<std::size_t>(col[i]),
                    (*assignment)[var[i]] ? Cell::One : Cell::Zero);
  auto r = SolveResult::make_yes(CompleteMatrix(std::move(work)));
  r.solver = "k1";
  return r;
}

// k = 2 with alpha = beta: enumerate the pivot row's completions, normalize
// it to the all-zero vector, deterministically fill every row whose distance
// pins its completion, and encode the remaining two-missing rows as 2-SAT
// variables whose pairwise fills must keep every distance exactly alpha.
inline SolveResult solve_k2eq(const DmcInstance& inst) {
  const IncompleteMatrix& S = inst.matrix();
  if (S.max_missing_per_row() > 2)
    throw std::invalid_argument("solve_k2eq: regime is at most two missing entries per row");
  if (inst.alpha() != inst.beta())
    throw std::invalid_argument("solve_k2eq: regime is alpha = beta");
  detail::require_zero_offsets(inst, "solve_k2eq");
  const Dist a = inst.alpha();
  const std::size_t n = S.n();
  const std::size_t l = S.l();
  const std::size_t pivot = n - 1;

  auto pivot_missing = S.row(pivot).missing_positions();

  for (std::uint64_t pcode = 0; pcode < (std::uint64_t{1} << pivot_missing.size()); ++pcode) {
    IncompleteMatrix work = S;
    for (std::size_t t = 0; t < pivot_missing.size(); ++t)
      work.set_cell(pivot, static_cast<std::size_t>(pivot_missing[t]),
                    (pcode >> (pivot_missing.size() - 1 - t)) & 1 ? Cell::One : Cell::Zero);

    // Normalize so the pivot reads all zeros.
    std::vector<bool> flipped(l, false);
    for (std::size_t j = 0; j < l; ++j)
      if (work.cell(pivot, j) == Cell::One) {
        work.complement_column(j);
        flipped[j] = true;
      }

    RowVector zero_row(l, Cell::Zero);
    bool feasible = true;
    std::vector<std::size_t> open;  // rows left for the 2-SAT stage

    for (std::size_t i = 0; i < pivot && feasible; ++i) {
      Dist d = hamming_distance(work.row(i), zero_row);
      auto missing = work.row(i).missing_positions();
      if (d < a - 2 || d > a) { feasible = false; break; }
      switch (missing.size()) {
        case 0:
          if (d != a) feasible = false;
          break;
        case 1:
          if (d == a - 1) work.set_cell(i, static_cast<std::size_t>(missing[0]), Cell::One);
          else if (d == a) work.set_cell(i, static_cast<std::size_t>(missing[0]), Cell::Zero);
          else feasible = false;  // d = a - 2 cannot gain two on one entry
          break;
        default:
          if (d == a - 2) {
            work.set_cell(i, static_cast<std::size_t>(missing[0]), Cell::One);
            work.set_cell(i, static_cast<std::size_t>(missing[1]), Cell::One);
          } else if (d == a) {
            work.set_cell(i, static_cast<std::size_t>(missing[0]), Cell::Zero);
            work.set_cell(i, static_cast<std::size_t>(missing[1]), Cell::Zero);
          } else {
            open.push_back(i);
          }
          break;
      }
    }
    if (!feasible) continue;

    // Complete rows must already sit pairwise at distance alpha.
    std::vector<std::size_t> closed;
    for (std::size_t i = 0; i < n; ++i)
      if (work.row(i).complete()) closed.push_back(i);
    for (std::size_t x = 0; x < closed.size() && feasible; ++x)
      for (std::size_t y = x + 1; y < closed.size() && feasible; ++y)
        if (hamming_distance(work.row(closed[x]), work.row(closed[y])) != a) feasible = false;
    if (!feasible) continue;

    // One variable per open row: true fills (1, 0) at its missing pair,
    // false fills (0, 1).
    TwoSatFormula f(static_cast<int>(open.size()));
    auto filled = [&](std::size_t i, bool x) {
      RowVector r = work.row(i);
      auto missing = r.missing_positions();
      r.set(static_cast<std::size_t>(missing[0]), x ? Cell::One : Cell::Zero);
      r.set(static_cast<std::size_t>(missing[1]), x ? Cell::Zero : Cell::One);
      return r;
    };

    for (std::size_t v = 0; v < open.size() && feasible; ++v) {
      for (std::size_t c : closed) {
        bool ok_true = hamming_distance(filled(open[v], true), work.row(c)) == a;
        bool ok_false = hamming_distance(filled(open[v], false), work.row(c)) == a;
        if (!ok_true && !ok_false) { feasible = false; break; }
        if (!ok_true) f.add_unit(neg(static_cast<int>(v)));
        if (!ok_false) f.add_unit(pos(static_cast<int>(v)));
      }
    }
    for (std::size_t v = 0; v < open.size() && feasible; ++v)
      for (std::size_t w = v + 1; w < open.size() && feasible; ++w) {
        int allowed = 0;
        for (bool xv : {false, true})
          for (bool xw : {false, true}) {
            if (hamming_distance(filled(open[v], xv), filled(open[w], xw)) == a) ++allowed;
            else f.add_clause(lit_eq(static_cast<int>(v), !xv), lit_eq(static_cast<int>(w), !xw));
          }
        if (allowed == 0) feasible = false;
      }
    if (!feasible) continue;

    auto assignment = solve_2sat(f);
    if (!assignment) continue;

    for (std::size_t v = 0; v < open.size(); ++v)
      work.set_row(open[v], filled(open[v], (*assignment)[v]));
    for (std::size_t j = 0; j < l; ++j)
      if (flipped[j]) work.complement_column(j);
    auto r = SolveResult::make_yes(CompleteMatrix(std::move(work)));
    r.solver = "k2eq";
    return r;
  }

  auto r = SolveResult::make_no();
  r.solver = "k2eq";
  return r;
}

// Dispatcher. Every Yes is re-verified against the instance before returning.
inline SolveResult solve(const DmcInstance& inst, SolverChoice choice = SolverChoice::Auto,
                         const SearchBudget& budget = {}) {
  auto finish = [&](SolveResult r) {
    if (r.yes() && !verify_instance(inst, *r.witness))
      throw std::logic_error(std::string("solver '") + r.solver + "' produced an invalid witness");
    return r;
  };

  switch (choice) {
    case SolverChoice::Oracle: return finish(solve_exhaustive(inst, budget));
    case SolverChoice::Backtrack: return finish(solve_backtracking(inst, budget));
    case SolverChoice::D0B1: return finish(solve_d0b1(inst));
    case SolverChoice::D0B2: return finish(solve_d0b2(inst, budget));
    case SolverChoice::D0B3: return finish(solve_d0b3(inst, budget));
    case SolverChoice::AlphaEqBeta: return finish(solve_alpha_eq_beta(inst, budget));
    case SolverChoice::AlphaPlus1: return finish(solve_alpha_plus1(inst, budget));
    case SolverChoice::K1: return finish(solve_k1(inst));
    case SolverChoice::K2Eq: return finish(solve_k2eq(inst));
    case SolverChoice::Auto: break;
  }

  const IncompleteMatrix& S = inst.matrix();
  const Dist a = inst.alpha(), b = inst.beta();
  const std::size_t k = S.max_missing_per_row();

  if (S.n() <= 2) return finish(solve_n2(inst));

  if (k == 0) {
    CompleteMatrix T(S);
    DiameterStats st = diameter_stats(T, inst.offsets());
    SolveResult r = (a <= st.gamma && st.delta <= b) ? SolveResult::make_yes(std::move(T))
                                                     : SolveResult::make_no();
    r.solver = "k0-direct";
    return finish(r);
  }

  if (!inst.offsets().all_zero()) return finish(solve_backtracking(inst, budget));

  if (a == 0 && b <= 3) {
    if (b == 1) return finish(solve_d0b1(inst));
    if (b == 2) return finish(solve_d0b2(inst, budget));
    if (b == 3) return finish(solve_d0b3(inst, budget));
    // (0, 0) falls through to alpha = beta.
  }

  if (a == b) {
    Dist half = a / 2;
    bool structural = a % 2 == 0 && static_cast<Dist>(S.n()) >= half * half + half + 3;
    if (a % 2 == 1 || structural) return finish(solve_alpha_eq_beta(inst, budget));
    if (k <= 1) return finish(solve_k1(inst));
    if (k <= 2) return finish(solve_k2eq(inst));
    return finish(solve_alpha_eq_beta(inst, budget));
  }

  if (b == a + 1) return finish(solve_alpha_plus1(inst, budget));
  if (k == 1) return finish(solve_k1(inst));
  return finish(solve_backtracking(inst, budget));
}

}  // namespace dmc
