#pragma once

// Binary matrices with missing entries, packed row vectors, Hamming-distance
// kernels, and the instance/verdict types shared by all solvers.
//
// A row vector stores two bit planes: a "known" plane (bit set iff the cell
// holds 0 or 1) and a "value" plane (bit set iff the cell holds 1). Distances
// are word-parallel popcounts over (value XOR value) AND known AND known, so
// positions with a missing entry on either side never count as disagreements.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dmc {

enum class Cell : std::uint8_t { Zero = 0, One = 1, Missing = 2 };

inline char cell_to_char(Cell c) {
  switch (c) {
    case Cell::Zero: return '0';
    case Cell::One: return '1';
    default: return '?';
  }
}

inline Cell cell_from_char(char ch) {
  switch (ch) {
    case '0': return Cell::Zero;
    case '1': return Cell::One;
    case '?': return Cell::Missing;
    default: throw std::invalid_argument(std::string("invalid cell character '") + ch + "'");
  }
}

// Distance value used everywhere distances and offsets mix. Gadget offsets
// reach ~1e9, so a 64-bit signed type keeps all sums exact.
using Dist = std::int64_t;

// Sentinel for gamma of a single-row matrix (min over an empty pair set).
inline constexpr Dist kInfiniteDistance = std::numeric_limits<Dist>::max();

class RowVector {
 public:
  RowVector() = default;

  explicit RowVector(std::size_t length, Cell fill = Cell::Missing)
      : len_(length), known_(words_needed(length), 0), value_(words_needed(length), 0) {
    if (fill != Cell::Missing) {
      for (std::size_t j = 0; j < length; ++j) set(j, fill);
    }
  }

  static RowVector from_string(std::string_view s) {
    RowVector r(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) r.set(j, cell_from_char(s[j]));
    return r;
  }

  std::size_t size() const { return len_; }

  Cell at(std::size_t j) const {
    check_index(j);
    if (!bit(known_, j)) return Cell::Missing;
    return bit(value_, j) ? Cell::One : Cell::Zero;
  }

  void set(std::size_t j, Cell c) {
    check_index(j);
    switch (c) {
      case Cell::Missing:
        clear_bit(known_, j);
        clear_bit(value_, j);
        break;
      case Cell::Zero:
        set_bit(known_, j);
        clear_bit(value_, j);
        break;
      case Cell::One:
        set_bit(known_, j);
        set_bit(value_, j);
        break;
    }
  }

  bool known(std::size_t j) const {
    check_index(j);
    return bit(known_, j);
  }

  bool complete() const {
    std::size_t full = len_ / 64;
    for (std::size_t w = 0; w < full; ++w)
      if (known_[w] != ~std::uint64_t{0}) return false;
    if (len_ % 64) {
      std::uint64_t tail = (std::uint64_t{1} << (len_ % 64)) - 1;
      if (known_[full] != tail) return false;
    }
    return true;
  }

  std::size_t missing_count() const {
    std::size_t known_bits = 0;
    for (std::uint64_t w : known_) known_bits += std::popcount(w);
    return len_ - known_bits;
  }

  std::vector<int> missing_positions() const {
    std::vector<int> out;
    for (std::size_t j = 0; j < len_; ++j)
      if (!bit(known_, j)) out.push_back(static_cast<int>(j));
    return out;
  }

  std::span<const std::uint64_t> known_words() const { return known_; }
  std::span<const std::uint64_t> value_words() const { return value_; }

  std::string to_string() const {
    std::string s(len_, '?');
    for (std::size_t j = 0; j < len_; ++j) s[j] = cell_to_char(at(j));
    return s;
  }

  friend bool operator==(const RowVector&, const RowVector&) = default;

 private:
  static std::size_t words_needed(std::size_t len) { return (len + 63) / 64; }

  void check_index(std::size_t j) const {
    if (j >= len_) throw std::out_of_range("row index out of range");
  }

  static bool bit(const std::vector<std::uint64_t>& v, std::size_t j) {
    return (v[j / 64] >> (j % 64)) & 1;
  }
  static void set_bit(std::vector<std::uint64_t>& v, std::size_t j) {
    v[j / 64] |= std::uint64_t{1} << (j % 64);
  }
  static void clear_bit(std::vector<std::uint64_t>& v, std::size_t j) {
    v[j / 64] &= ~(std::uint64_t{1} << (j % 64));
  }

  std::size_t len_ = 0;
  std::vector<std::uint64_t> known_;
  std::vector<std::uint64_t> value_;
};

// |D(u, w)|: disagreements over positions known in both rows.
inline Dist hamming_distance(const RowVector& u, const RowVector& w) {
  if (u.size() != w.size()) throw std::invalid_argument("hamming_distance: length mismatch");
  auto uk = u.known_words(), wk = w.known_words();
  auto uv = u.value_words(), wv = w.value_words();
  Dist d = 0;
  for (std::size_t i = 0; i < uk.size(); ++i)
    d += std::popcount((uv[i] ^ wv[i]) & uk[i] & wk[i]);
  return d;
}

// D(u, w): column indices (ascending) where both rows are known and differ.
inline std::vector<int> disagreement_set(const RowVector& u, const RowVector& w) {
  if (u.size() != w.size()) throw std::invalid_argument("disagreement_set: length mismatch");
  auto uk = u.known_words(), wk = w.known_words();
  auto uv = u.value_words(), wv = w.value_words();
  std::vector<int> out;
  for (std::size_t i = 0; i < uk.size(); ++i) {
    std::uint64_t m = (uv[i] ^ wv[i]) & uk[i] & wk[i];
    while (m) {
      out.push_back(static_cast<int>(i * 64 + std::countr_zero(m)));
      m &= m - 1;
    }
  }
  return out;
}

// d_J(u, w): Hamming distance counting only the columns in J.
inline Dist restricted_distance(const RowVector& u, const RowVector& w, std::span<const int> J) {
  if (u.size() != w.size()) throw std::invalid_argument("restricted_distance: length mismatch");
  Dist d = 0;
  for (int j : J) {
    if (j < 0 || static_cast<std::size_t>(j) >= u.size())
      throw std::out_of_range("restricted_distance: column index out of range");
    Cell a = u.at(static_cast<std::size_t>(j));
    Cell b = w.at(static_cast<std::size_t>(j));
    if (a != Cell::Missing && b != Cell::Missing && a != b) ++d;
  }
  return d;
}

// u + v: replace the missing entries of u with the corresponding entries of v.
inline RowVector apply_completion(const RowVector& u, const RowVector& v) {
  if (u.size() != v.size()) throw std::invalid_argument("apply_completion: length mismatch");
  if (!v.complete()) throw std::invalid_argument("apply_completion: filler vector has missing entries");
  RowVector out = u;
  for (std::size_t j = 0; j < u.size(); ++j)
    if (!u.known(j)) out.set(j, v.at(j));
  return out;
}

class IncompleteMatrix {
 public:
  IncompleteMatrix() = default;

  IncompleteMatrix(std::size_t n, std::size_t l, Cell fill = Cell::Missing) {
    if (n < 1 || l < 1) throw std::invalid_argument("matrix dimensions must be at least 1x1");
    rows_.assign(n, RowVector(l, fill));
  }

  explicit IncompleteMatrix(std::vector<RowVector> rows) : rows_(std::move(rows)) {
    if (rows_.empty()) throw std::invalid_argument("matrix needs at least one row");
    for (const auto& r : rows_)
      if (r.size() != rows_[0].size() || r.size() == 0)
        throw std::invalid_argument("matrix rows must share a positive length");
  }

  static IncompleteMatrix from_strings(const std::vector<std::string>& body) {
    std::vector<RowVector> rows;
    rows.reserve(body.size());
    for (const auto& s : body) rows.push_back(RowVector::from_string(s));
    return IncompleteMatrix(std::move(rows));
  }

  std::size_t n() const { return rows_.size(); }
  std::size_t l() const { return rows_[0].size(); }

  const RowVector& row(std::size_t i) const {
    check_row(i);
    return rows_[i];
  }

  Cell cell(std::size_t i, std::size_t j) const { return row(i).at(j); }

  void set_cell(std::size_t i, std::size_t j, Cell c) {
    check_row(i);
    rows_[i].set(j, c);
  }

  void set_row(std::size_t i, RowVector r) {
    check_row(i);
    if (r.size() != l()) throw std::invalid_argument("set_row: length mismatch");
    rows_[i] = std::move(r);
  }

  bool complete() const {
    return std::all_of(rows_.begin(), rows_.end(), [](const RowVector& r) { return r.complete(); });
  }

  std::size_t missing_count() const {
    std::size_t m = 0;
    for (const auto& r : rows_) m += r.missing_count();
    return m;
  }

  // Largest per-row missing count (the parameter k).
  std::size_t max_missing_per_row() const {
    std::size_t k = 0;
    for (const auto& r : rows_) k = std::max(k, r.missing_count());
    return k;
  }

  IncompleteMatrix with_columns(std::span<const int> cols) const {
    if (cols.empty()) throw std::invalid_argument("with_columns: empty column selection");
    std::vector<RowVector> out;
    out.reserve(n());
    for (const auto& r : rows_) {
      RowVector nr(cols.size());
      for (std::size_t t = 0; t < cols.size(); ++t) nr.set(t, r.at(static_cast<std::size_t>(cols[t])));
      out.push_back(std::move(nr));
    }
    return IncompleteMatrix(std::move(out));
  }

  IncompleteMatrix with_rows(std::span<const int> rows) const {
    if (rows.empty()) throw std::invalid_argument("with_rows: empty row selection");
    std::vector<RowVector> out;
    out.reserve(rows.size());
    for (int i : rows) out.push_back(row(static_cast<std::size_t>(i)));
    return IncompleteMatrix(std::move(out));
  }

  void append_row(RowVector r) {
    if (r.size() != l()) throw std::invalid_argument("append_row: length mismatch");
    rows_.push_back(std::move(r));
  }

  // Horizontal concatenation: [*this | other].
  IncompleteMatrix hstack(const IncompleteMatrix& other) const {
    if (other.n() != n()) throw std::invalid_argument("hstack: row count mismatch");
    std::vector<RowVector> out;
    out.reserve(n());
    for (std::size_t i = 0; i < n(); ++i) {
      RowVector r(l() + other.l());
      for (std::size_t j = 0; j < l(); ++j) r.set(j, cell(i, j));
      for (std::size_t j = 0; j < other.l(); ++j) r.set(l() + j, other.cell(i, j));
      out.push_back(std::move(r));
    }
    return IncompleteMatrix(std::move(out));
  }

  // Flip all known entries in column j; missing cells stay missing.
  void complement_column(std::size_t j) {
    for (auto& r : rows_) {
      Cell c = r.at(j);
      if (c == Cell::Zero) r.set(j, Cell::One);
      else if (c == Cell::One) r.set(j, Cell::Zero);
    }
  }

  friend bool operator==(const IncompleteMatrix&, const IncompleteMatrix&) = default;

 private:
  void check_row(std::size_t i) const {
    if (i >= rows_.size()) throw std::out_of_range("matrix row index out of range");
  }

  std::vector<RowVector> rows_;
};

class CompleteMatrix {
 public:
  explicit CompleteMatrix(IncompleteMatrix grid) : grid_(std::move(grid)) {
    if (!grid_.complete()) throw std::invalid_argument("CompleteMatrix: grid has missing entries");
  }

  static CompleteMatrix from_strings(const std::vector<std::string>& body) {
    return CompleteMatrix(IncompleteMatrix::from_strings(body));
  }

  std::size_t n() const { return grid_.n(); }
  std::size_t l() const { return grid_.l(); }
  const RowVector& row(std::size_t i) const { return grid_.row(i); }
  Cell cell(std::size_t i, std::size_t j) const { return grid_.cell(i, j); }
  const IncompleteMatrix& grid() const { return grid_; }

  friend bool operator==(const CompleteMatrix&, const CompleteMatrix&) = default;

 private:
  IncompleteMatrix grid_;
};

// True iff T fills exactly the missing entries of S (all known cells agree).
inline bool is_completion_of(const IncompleteMatrix& S, const CompleteMatrix& T) {
  if (S.n() != T.n() || S.l() != T.l()) return false;
  for (std::size_t i = 0; i < S.n(); ++i)
    for (std::size_t j = 0; j < S.l(); ++j) {
      Cell c = S.cell(i, j);
      if (c != Cell::Missing && c != T.cell(i, j)) return false;
    }
  return true;
}

// Symmetric per-pair additive distance shifts; the implicit representation of
// appended complete gadget columns.
class PairOffsets {
 public:
  PairOffsets() = default;

  explicit PairOffsets(std::size_t n) : n_(n), delta_((n >= 2) ? n * (n - 1) / 2 : 0, 0) {}

  std::size_t n() const { return n_; }

  Dist delta(std::size_t h, std::size_t hp) const {
    if (n_ == 0) return 0;
    return delta_[index(h, hp)];
  }

  void set_delta(std::size_t h, std::size_t hp, Dist value) {
    if (value < 0) throw std::invalid_argument("pair offset must be non-negative");
    delta_[index(h, hp)] = value;
    any_ = any_ || value != 0;
  }

  void add_delta(std::size_t h, std::size_t hp, Dist value) {
    if (value < 0) throw std::invalid_argument("pair offset must be non-negative");
    delta_[index(h, hp)] += value;
    any_ = any_ || value != 0;
  }

  bool all_zero() const { return !any_; }

  friend bool operator==(const PairOffsets& a, const PairOffsets& b) {
    return a.n_ == b.n_ && a.delta_ == b.delta_;
  }

 private:
  std::size_t index(std::size_t h, std::size_t hp) const {
    if (h == hp) throw std::invalid_argument("pair offsets have no diagonal entries");
    if (h > hp) std::swap(h, hp);
    if (hp >= n_) throw std::out_of_range("pair offset index out of range");
    // Upper-triangular, row-major: (h, hp) with h < hp.
    return h * (2 * n_ - h - 1) / 2 + (hp - h - 1);
  }

  std::size_t n_ = 0;
  bool any_ = false;
  std::vector<Dist> delta_;
};

struct DiameterStats {
  Dist gamma = kInfiniteDistance;  // min pair distance; infinite when n = 1
  Dist delta = 0;                  // max pair distance
};

inline DiameterStats diameter_stats(const CompleteMatrix& T, const PairOffsets& offsets = {}) {
  if (offsets.n() != 0 && offsets.n() != T.n())
    throw std::invalid_argument("diameter_stats: offsets sized for a different matrix");
  DiameterStats st;
  for (std::size_t h = 0; h + 1 < T.n(); ++h)
    for (std::size_t hp = h + 1; hp < T.n(); ++hp) {
      Dist d = hamming_distance(T.row(h), T.row(hp));
      if (offsets.n() != 0) d += offsets.delta(h, hp);
      st.gamma = std::min(st.gamma, d);
      st.delta = std::max(st.delta, d);
    }
  return st;
}

class DmcInstance {
 public:
  DmcInstance(IncompleteMatrix matrix, Dist alpha, Dist beta, PairOffsets offsets = {})
      : matrix_(std::move(matrix)), alpha_(alpha), beta_(beta), offsets_(std::move(offsets)) {
    if (alpha < 0 || beta < 0) throw std::invalid_argument("bounds must be non-negative");
    if (alpha > beta) throw std::invalid_argument("alpha must not exceed beta");
    if (offsets_.n() == 0) offsets_ = PairOffsets(matrix_.n());
    if (offsets_.n() != matrix_.n())
      throw std::invalid_argument("offsets sized for a different matrix");
  }

  const IncompleteMatrix& matrix() const { return matrix_; }
  Dist alpha() const { return alpha_; }
  Dist beta() const { return beta_; }
  const PairOffsets& offsets() const { return offsets_; }

 private:
  IncompleteMatrix matrix_;
  Dist alpha_ = 0;
  Dist beta_ = 0;
  PairOffsets offsets_;
};

// True iff T completes inst's matrix and alpha <= gamma <= delta <= beta under
// the instance's pair offsets.
inline bool verify_instance(const DmcInstance& inst, const CompleteMatrix& T) {
  if (inst.matrix().n() != T.n() || inst.matrix().l() != T.l())
    throw std::invalid_argument("verify_instance: dimension mismatch");
  if (!is_completion_of(inst.matrix(), T)) return false;
  DiameterStats st = diameter_stats(T, inst.offsets());
  return inst.alpha() <= st.gamma && st.delta <= inst.beta();
}

// Columns holding at least one 0 and at least one 1 (missing entries ignored).
inline std::vector<int> dirty_columns(const IncompleteMatrix& S) {
  std::vector<int> out;
  for (std::size_t j = 0; j < S.l(); ++j) {
    bool has0 = false, has1 = false;
    for (std::size_t i = 0; i < S.n(); ++i) {
      Cell c = S.cell(i, j);
      has0 = has0 || c == Cell::Zero;
      has1 = has1 || c == Cell::One;
    }
    if (has0 && has1) out.push_back(static_cast<int>(j));
  }
  return out;
}

enum class Outcome { Yes, No, Inconclusive };

inline const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Yes: return "YES";
    case Outcome::No: return "NO";
    default: return "INCONCLUSIVE";
  }
}

// Solver verdict. A Yes always carries a witness completion; Inconclusive is
// reserved for budget exhaustion and is never a wrong verdict.
struct SolveResult {
  Outcome outcome = Outcome::No;
  std::optional<CompleteMatrix> witness;
  std::uint64_t nodes = 0;
  std::string solver;

  bool yes() const { return outcome == Outcome::Yes; }
  bool no() const { return outcome == Outcome::No; }
  bool inconclusive() const { return outcome == Outcome::Inconclusive; }

  static SolveResult make_yes(CompleteMatrix w, std::uint64_t nodes = 0) {
    return SolveResult{Outcome::Yes, std::move(w), nodes, {}};
  }
  static SolveResult make_no(std::uint64_t nodes = 0) {
    return SolveResult{Outcome::No, std::nullopt, nodes, {}};
  }
  static SolveResult make_inconclusive(std::uint64_t nodes = 0) {
    return SolveResult{Outcome::Inconclusive, std::nullopt, nodes, {}};
  }
};

}  // namespace dmc
