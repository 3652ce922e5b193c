#pragma once

// Difference-set systems of a complete matrix relative to a reference row,
// sunflower (strong delta-system) detection, and the Deza-certificate check
// that guarantees a uniform weak delta-system is a sunflower once it is large
// enough.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "dmc/matrix.hpp"

namespace dmc {

using ColumnSet = std::vector<int>;  // sorted, unique column indices

inline ColumnSet set_intersection(const ColumnSet& a, const ColumnSet& b) {
  ColumnSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline ColumnSet set_difference(const ColumnSet& a, const ColumnSet& b) {
  ColumnSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// The system of distinct difference sets D(T[i], T[ref]) with its cardinality
// strata. Duplicate difference patterns collapse to one set.
struct DiffSystem {
  std::size_t reference_row = 0;
  std::vector<ColumnSet> sets;                     // distinct, sorted lexicographically
  std::map<std::size_t, std::vector<ColumnSet>> strata;  // x -> sets of cardinality x

  const std::vector<ColumnSet>& stratum(std::size_t x) const {
    static const std::vector<ColumnSet> empty;
    auto it = strata.find(x);
    return it == strata.end() ? empty : it->second;
  }
};

inline DiffSystem diff_system(const CompleteMatrix& T, std::size_t ref) {
  if (ref >= T.n()) throw std::out_of_range("diff_system: reference row out of range");
  std::set<ColumnSet> distinct;
  for (std::size_t i = 0; i < T.n(); ++i) {
    if (i == ref) continue;
    distinct.insert(disagreement_set(T.row(i), T.row(ref)));
  }
  DiffSystem out;
  out.reference_row = ref;
  out.sets.assign(distinct.begin(), distinct.end());
  for (const auto& s : out.sets) out.strata[s.size()].push_back(s);
  return out;
}

struct Sunflower {
  ColumnSet core;
  std::vector<ColumnSet> petals;  // aligned with the input family order
};

// Sunflower decomposition of a family of distinct sets: all pairwise
// intersections must equal one common core. A singleton family decomposes as
// core = the set itself with one empty petal.
inline std::optional<Sunflower> detect_sunflower(const std::vector<ColumnSet>& family) {
  if (family.empty()) throw std::invalid_argument("detect_sunflower: empty family");
  if (family.size() == 1) return Sunflower{family[0], {ColumnSet{}}};

  ColumnSet core = set_intersection(family[0], family[1]);
  for (std::size_t a = 0; a < family.size(); ++a)
    for (std::size_t b = a + 1; b < family.size(); ++b)
      if (set_intersection(family[a], family[b]) != core) return std::nullopt;

  Sunflower s;
  s.core = core;
  s.petals.reserve(family.size());
  for (const auto& member : family) s.petals.push_back(set_difference(member, core));
  return s;
}

// True iff the family is a uniform weak delta-system matching one of the
// hypotheses under which Deza's bounds force a sunflower:
//   2u-uniform,  intersection u,   |F| >= u^2 + u + 2
//   2u+1-uniform, intersection u+1, |F| >= u^2 + u + 3
//   2u+1-uniform, intersection u,   |F| >= (u+1)^2 + u + 3
inline bool deza_certified(const std::vector<ColumnSet>& family) {
  if (family.size() < 2) return false;
  std::size_t h = family[0].size();
  for (const auto& s : family)
    if (s.size() != h) return false;

  std::size_t lambda = set_intersection(family[0], family[1]).size();
  for (std::size_t a = 0; a < family.size(); ++a)
    for (std::size_t b = a + 1; b < family.size(); ++b)
      if (set_intersection(family[a], family[b]).size() != lambda) return false;

  std::size_t count = family.size();
  if (h % 2 == 0) {
    std::size_t mu = h / 2;
    return lambda == mu && count >= mu * mu + mu + 2;
  }
  std::size_t mu = (h - 1) / 2;
  if (lambda == mu + 1) return count >= mu * mu + mu + 3;
  if (lambda == mu) return count >= (mu + 1) * (mu + 1) + mu + 3;
  return false;
}

}  // namespace dmc
