#pragma once

// Line-oriented ASCII instance format:
//
//   DMC 1
//   <n> <l> <alpha> <beta>
//   <n body lines over {0,1,?}>
//   OFFSETS            (optional)
//   <n-1 lines; line h holds delta(h, h+1) ... delta(h, n), 1-based rows>
//
// Witness files carry the same body format with no header. Parsing is strict;
// errors report 1-based line and column.

#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmc/gadgets.hpp"
#include "dmc/matrix.hpp"

namespace dmc {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                           ": " + what),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

namespace detail {

struct LineReader {
  std::istream& in;
  int line_no = 0;

  bool next(std::string& out) {
    if (!std::getline(in, out)) return false;
    if (!out.empty() && out.back() == '\r') out.pop_back();
    ++line_no;
    return true;
  }
};

inline std::vector<long long> parse_int_fields(const std::string& line, int line_no,
                                               std::size_t expect) {
  std::vector<long long> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && line[pos] == ' ') ++pos;
    if (pos == line.size()) break;
    std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ') ++pos;
    long long value = 0;
    auto [ptr, ec] = std::from_chars(line.data() + start, line.data() + pos, value);
    if (ec != std::errc{} || ptr != line.data() + pos)
      throw ParseError(line_no, static_cast<int>(start) + 1, "expected an integer");
    out.push_back(value);
  }
  if (expect != 0 && out.size() != expect)
    throw ParseError(line_no, 1,
                     "expected " + std::to_string(expect) + " integers, got " +
                         std::to_string(out.size()));
  return out;
}

inline RowVector parse_body_line(const std::string& line, int line_no, std::size_t l) {
  if (line.size() != l)
    throw ParseError(line_no, static_cast<int>(std::min(line.size(), l)) + 1,
                     "body line must have exactly " + std::to_string(l) + " characters");
  RowVector r(l);
  for (std::size_t j = 0; j < l; ++j) {
    switch (line[j]) {
      case '0': r.set(j, Cell::Zero); break;
      case '1': r.set(j, Cell::One); break;
      case '?': r.set(j, Cell::Missing); break;
      default:
        throw ParseError(line_no, static_cast<int>(j) + 1,
                         std::string("invalid character '") + line[j] + "' in body");
    }
  }
  return r;
}

}  // namespace detail

inline DmcInstance parse_instance(std::istream& in) {
  detail::LineReader reader{in};
  std::string line;

  if (!reader.next(line)) throw ParseError(1, 1, "empty input");
  if (line != "DMC 1") throw ParseError(reader.line_no, 1, "expected header 'DMC 1'");

  if (!reader.next(line)) throw ParseError(reader.line_no + 1, 1, "missing dimension line");
  auto dims = detail::parse_int_fields(line, reader.line_no, 4);
  long long n = dims[0], l = dims[1], alpha = dims[2], beta = dims[3];
  if (n < 1 || l < 1) throw ParseError(reader.line_no, 1, "dimensions must be at least 1");
  if (alpha < 0 || beta < 0 || alpha > beta)
    throw ParseError(reader.line_no, 1, "need 0 <= alpha <= beta");

  std::vector<RowVector> rows;
  for (long long i = 0; i < n; ++i) {
    if (!reader.next(line)) throw ParseError(reader.line_no + 1, 1, "missing body line");
    rows.push_back(detail::parse_body_line(line, reader.line_no, static_cast<std::size_t>(l)));
  }

  PairOffsets offsets(static_cast<std::size_t>(n));
  if (reader.next(line)) {
    if (line != "OFFSETS") throw ParseError(reader.line_no, 1, "expected 'OFFSETS' or end of file");
    for (long long h = 0; h + 1 < n; ++h) {
      if (!reader.next(line)) throw ParseError(reader.line_no + 1, 1, "missing offsets line");
      auto vals = detail::parse_int_fields(line, reader.line_no, static_cast<std::size_t>(n - h - 1));
      for (long long t = 0; t < n - h - 1; ++t) {
        if (vals[t] < 0) throw ParseError(reader.line_no, 1, "offsets must be non-negative");
        offsets.set_delta(static_cast<std::size_t>(h), static_cast<std::size_t>(h + 1 + t), vals[t]);
      }
    }
    if (reader.next(line)) throw ParseError(reader.line_no, 1, "trailing content after offsets");
  }

  return DmcInstance(IncompleteMatrix(std::move(rows)), alpha, beta, std::move(offsets));
}

inline void write_instance(std::ostream& out, const DmcInstance& inst) {
  const IncompleteMatrix& S = inst.matrix();
  out << "DMC 1\n"
      << S.n() << ' ' << S.l() << ' ' << inst.alpha() << ' ' << inst.beta() << '\n';
  for (std::size_t i = 0; i < S.n(); ++i) out << S.row(i).to_string() << '\n';
  if (!inst.offsets().all_zero()) {
    out << "OFFSETS\n";
    for (std::size_t h = 0; h + 1 < S.n(); ++h) {
      for (std::size_t hp = h + 1; hp < S.n(); ++hp)
        out << inst.offsets().delta(h, hp) << (hp + 1 < S.n() ? ' ' : '\n');
    }
  }
}

// Witness body: n lines over {0,1}.
inline CompleteMatrix parse_completion(std::istream& in, std::size_t n, std::size_t l) {
  detail::LineReader reader{in};
  std::string line;
  std::vector<RowVector> rows;
  for (std::size_t i = 0; i < n; ++i) {
    if (!reader.next(line)) throw ParseError(reader.line_no + 1, 1, "missing completion line");
    RowVector r = detail::parse_body_line(line, reader.line_no, l);
    if (!r.complete())
      throw ParseError(reader.line_no, 1, "completion must not contain missing entries");
    rows.push_back(std::move(r));
  }
  if (reader.next(line)) throw ParseError(reader.line_no, 1, "trailing content after completion");
  return CompleteMatrix(IncompleteMatrix(std::move(rows)));
}

inline void write_completion(std::ostream& out, const CompleteMatrix& T) {
  for (std::size_t i = 0; i < T.n(); ++i) out << T.row(i).to_string() << '\n';
}

// DIMACS CNF restricted to three-literal clauses.
inline CnfFormula parse_dimacs(std::istream& in) {
  detail::LineReader reader{in};
  std::string line;
  CnfFormula f;
  long long expected_clauses = -1;
  bool header_seen = false;
  while (reader.next(line)) {
    if (line.empty() || line[0] == 'c') continue;
    if (line[0] == 'p') {
      std::istringstream hs(line);
      std::string p, cnf;
      long long vars = 0, clauses = 0;
      if (!(hs >> p >> cnf >> vars >> clauses) || cnf != "cnf" || vars < 1 || clauses < 0)
        throw ParseError(reader.line_no, 1, "malformed DIMACS header");
      f.num_vars = static_cast<int>(vars);
      expected_clauses = clauses;
      header_seen = true;
      continue;
    }
    if (!header_seen) throw ParseError(reader.line_no, 1, "clause before DIMACS header");
    auto vals = detail::parse_int_fields(line, reader.line_no, 0);
    if (vals.size() != 4 || vals[3] != 0)
      throw ParseError(reader.line_no, 1, "expected three literals terminated by 0");
    std::array<int, 3> clause;
    for (int t = 0; t < 3; ++t) {
      if (vals[t] == 0 || std::abs(vals[t]) > f.num_vars)
        throw ParseError(reader.line_no, 1, "literal out of range");
      clause[t] = static_cast<int>(vals[t]);
    }
    f.clauses.push_back(clause);
  }
  if (!header_seen) throw ParseError(reader.line_no + 1, 1, "missing DIMACS header");
  if (expected_clauses >= 0 && static_cast<long long>(f.clauses.size()) != expected_clauses)
    throw ParseError(reader.line_no, 1, "clause count does not match header");
  return f;
}

inline std::string to_dimacs(const CnfFormula& f) {
  std::ostringstream os;
  os << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
  for (const auto& cl : f.clauses) os << cl[0] << ' ' << cl[1] << ' ' << cl[2] << " 0\n";
  return os.str();
}

inline DmcInstance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return parse_instance(in);
}

inline CompleteMatrix load_completion_file(const std::string& path, std::size_t n, std::size_t l) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return parse_completion(in, n, l);
}

}  // namespace dmc
