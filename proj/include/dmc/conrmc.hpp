#pragma once

// Constraint-radius matrix completion restricted to per-row radii in {0, 1}:
// find one complete center vector v with d(v, S[i]) <= r[i] for every row.
// Encoded as 2-SAT with one variable per column. A radius-0 row pins v to its
// known entries; a radius-1 row contributes, for every pair of its known
// positions, the clause "v matches here or v matches there". Positions where
// a row is missing impose nothing.

#include <optional>
#include <stdexcept>
#include <vector>

#include "dmc/matrix.hpp"
#include "dmc/twosat.hpp"

namespace dmc {

struct ConrmcInstance {
  IncompleteMatrix matrix;
  std::vector<int> radii;
};

inline std::optional<RowVector> solve_conrmc01(const ConrmcInstance& inst) {
  const IncompleteMatrix& S = inst.matrix;
  if (inst.radii.size() != S.n())
    throw std::invalid_argument("solve_conrmc01: one radius per row required");
  for (int r : inst.radii)
    if (r != 0 && r != 1) throw std::invalid_argument("solve_conrmc01: radii must be 0 or 1");

  const int l = static_cast<int>(S.l());
  TwoSatFormula f(l);
  std::vector<int> known;
  for (std::size_t i = 0; i < S.n(); ++i) {
    known.clear();
    for (int j = 0; j < l; ++j)
      if (S.row(i).known(static_cast<std::size_t>(j))) known.push_back(j);
    if (inst.radii[i] == 0) {
      for (int j : known) f.add_unit(lit_eq(j, S.cell(i, j) == Cell::One));
    } else {
      for (std::size_t a = 0; a < known.size(); ++a)
        for (std::size_t b = a + 1; b < known.size(); ++b)
          f.add_clause(lit_eq(known[a], S.cell(i, known[a]) == Cell::One),
                       lit_eq(known[b], S.cell(i, known[b]) == Cell::One));
    }
  }

  auto assignment = solve_2sat(f);
  if (!assignment) return std::nullopt;

  RowVector v(S.l());
  for (int j = 0; j < l; ++j) v.set(static_cast<std::size_t>(j), (*assignment)[j] ? Cell::One : Cell::Zero);

  for (std::size_t i = 0; i < S.n(); ++i)
    if (hamming_distance(v, S.row(i)) > inst.radii[i])
      throw std::logic_error("solve_conrmc01: returned center violates a radius");
  return v;
}

}  // namespace dmc
