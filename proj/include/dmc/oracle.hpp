#pragma once

// Exact reference solvers. solve_exhaustive enumerates every completion in
// lexicographic order and is the ground truth the rest of the repository is
// cross-validated against. solve_backtracking completes rows one at a time
// with distance-interval pruning; it must agree with solve_exhaustive on every
// instance both finish within budget.

#include <cstdint>
#include <utility>
#include <vector>

#include "dmc/matrix.hpp"

namespace dmc {

struct SearchBudget {
  std::uint64_t max_nodes = 10'000'000;
};

namespace detail {

struct MissingCell {
  std::size_t row, col;
};

inline std::vector<MissingCell> missing_cells_row_major(const IncompleteMatrix& S) {
  std::vector<MissingCell> cells;
  for (std::size_t i = 0; i < S.n(); ++i)
    for (std::size_t j = 0; j < S.l(); ++j)
      if (S.cell(i, j) == Cell::Missing) cells.push_back({i, j});
  return cells;
}

inline bool stats_within(const DmcInstance& inst, const IncompleteMatrix& grid) {
  for (std::size_t h = 0; h + 1 < grid.n(); ++h)
    for (std::size_t hp = h + 1; hp < grid.n(); ++hp) {
      Dist d = hamming_distance(grid.row(h), grid.row(hp)) + inst.offsets().delta(h, hp);
      if (d < inst.alpha() || d > inst.beta()) return false;
    }
  return true;
}

}  // namespace detail

// Enumerates all 2^M completions (missing entries ordered row-major, 0 before
// 1) and returns the lexicographically first satisfying one. Never returns a
// wrong verdict: running out of budget yields Inconclusive.
inline SolveResult solve_exhaustive(const DmcInstance& inst, const SearchBudget& budget = {}) {
  auto cells = detail::missing_cells_row_major(inst.matrix());
  IncompleteMatrix work = inst.matrix();
  std::vector<std::uint8_t> fill(cells.size(), 0);
  for (const auto& c : cells) work.set_cell(c.row, c.col, Cell::Zero);

  std::uint64_t nodes = 0;
  while (true) {
    if (nodes >= budget.max_nodes) return SolveResult::make_inconclusive(nodes);
    ++nodes;
    if (detail::stats_within(inst, work)) {
      auto r = SolveResult::make_yes(CompleteMatrix(work), nodes);
      r.solver = "oracle";
      return r;
    }
    // Odometer step: advance the last 0 to 1, resetting the tail.
    std::size_t t = cells.size();
    while (t > 0 && fill[t - 1] == 1) {
      --t;
      fill[t] = 0;
      work.set_cell(cells[t].row, cells[t].col, Cell::Zero);
    }
    if (t == 0) break;
    fill[t - 1] = 1;
    work.set_cell(cells[t - 1].row, cells[t - 1].col, Cell::One);
  }
  auto r = SolveResult::make_no(nodes);
  r.solver = "oracle";
  return r;
}

// Row-by-row search. Rows are completed in input order; a candidate row is
// rejected as soon as a completed pair leaves [alpha, beta] or a bound on a
// partially known pair (known disagreements vs known disagreements plus the
// remaining free positions) proves infeasibility. Identical incomplete rows
// are grouped: when offsets are all zero, a row's fill code never decreases
// along runs of identical rows, which cuts the symmetric part of the search.
inline SolveResult solve_backtracking(const DmcInstance& inst, const SearchBudget& budget = {}) {
  const IncompleteMatrix& S = inst.matrix();
  const std::size_t n = S.n();
  const Dist alpha = inst.alpha();
  const Dist beta = inst.beta();

  // Root bounds over all pairs of still-incomplete rows.
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Dist lower = hamming_distance(S.row(i), S.row(j)) + inst.offsets().delta(i, j);
      std::size_t slack = 0;
      for (std::size_t col = 0; col < S.l(); ++col)
        if (!S.row(i).known(col) || !S.row(j).known(col)) ++slack;
      if (lower > beta || lower + static_cast<Dist>(slack) < alpha)
        return SolveResult::make_no(0);
    }

  // Last earlier identical row, for symmetry breaking (zero offsets only).
  std::vector<int> pred(n, -1);
  if (inst.offsets().all_zero()) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (S.row(j) == S.row(i)) pred[i] = static_cast<int>(j);
  }

  std::vector<std::vector<int>> missing(n);
  for (std::size_t i = 0; i < n; ++i) missing[i] = S.row(i).missing_positions();

  std::vector<RowVector> placed(n);
  std::vector<std::uint64_t> code(n, 0);
  std::uint64_t nodes = 0;
  bool out_of_budget = false;

  // Returns true once a full assignment is found; placed[] then holds it.
  auto dfs = [&](auto&& self, std::size_t i) -> bool {
    if (i == n) return true;
    const std::size_t m = missing[i].size();
    if (m > 62) {
      out_of_budget = true;  // candidate space alone dwarfs any budget
      return false;
    }
    std::uint64_t first = (pred[i] >= 0) ? code[pred[i]] : 0;
    for (std::uint64_t c = first; c < (std::uint64_t{1} << m); ++c) {
      if (nodes >= budget.max_nodes) {
        out_of_budget = true;
        return false;
      }
      ++nodes;
      RowVector r = S.row(i);
      for (std::size_t t = 0; t < m; ++t) {
        bool one = (c >> (m - 1 - t)) & 1;
        r.set(static_cast<std::size_t>(missing[i][t]), one ? Cell::One : Cell::Zero);
      }
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) {
        Dist d = hamming_distance(r, placed[j]) + inst.offsets().delta(i, j);
        ok = alpha <= d && d <= beta;
      }
      for (std::size_t f = i + 1; f < n && ok; ++f) {
        Dist lower = hamming_distance(r, S.row(f)) + inst.offsets().delta(i, f);
        Dist upper = lower + static_cast<Dist>(missing[f].size());
        ok = lower <= beta && upper >= alpha;
      }
      if (!ok) continue;
      placed[i] = std::move(r);
      code[i] = c;
      if (self(self, i + 1)) return true;
      if (out_of_budget) return false;
    }
    return false;
  };

  if (dfs(dfs, 0)) {
    std::vector<RowVector> rows(placed.begin(), placed.end());
    auto r = SolveResult::make_yes(CompleteMatrix(IncompleteMatrix(std::move(rows))), nodes);
    r.solver = "backtrack";
    return r;
  }
  if (out_of_budget) return SolveResult::make_inconclusive(nodes);
  auto r = SolveResult::make_no(nodes);
  r.solver = "backtrack";
  return r;
}

}  // namespace dmc
