#pragma once

// Complete 2-SAT engine: implication graph plus strongly connected components
// (iterative Tarjan), with satisfying-assignment extraction in reverse
// topological component order. Deterministic for a fixed clause order, and an
// unconstrained variable always comes out false.

#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dmc {

struct Literal {
  int var = 0;
  bool positive = true;
};

inline Literal pos(int var) { return {var, true}; }
inline Literal neg(int var) { return {var, false}; }

// Literal asserting x_var == value.
inline Literal lit_eq(int var, bool value) { return {var, value}; }

class TwoSatFormula {
 public:
  TwoSatFormula() = default;
  explicit TwoSatFormula(int num_vars) : num_vars_(num_vars) {
    if (num_vars < 0) throw std::invalid_argument("negative variable count");
  }

  int num_vars() const { return num_vars_; }
  int add_variable() { return num_vars_++; }

  void add_clause(Literal a, Literal b) {
    check(a);
    check(b);
    clauses_.emplace_back(a, b);
  }

  // Unit clauses are kept in the uniform two-literal shape (l v l).
  void add_unit(Literal a) { add_clause(a, a); }

  const std::vector<std::pair<Literal, Literal>>& clauses() const { return clauses_; }

  // Debug dump, 1-based variables, one clause per line, 0-terminated.
  std::string to_dimacs() const {
    std::ostringstream os;
    os << "p cnf " << num_vars_ << ' ' << clauses_.size() << '\n';
    for (const auto& [a, b] : clauses_) {
      os << (a.positive ? a.var + 1 : -(a.var + 1)) << ' '
         << (b.positive ? b.var + 1 : -(b.var + 1)) << " 0\n";
    }
    return os.str();
  }

 private:
  void check(Literal l) const {
    if (l.var < 0 || l.var >= num_vars_) throw std::invalid_argument("literal references unknown variable");
  }

  int num_vars_ = 0;
  std::vector<std::pair<Literal, Literal>> clauses_;
};

inline std::optional<std::vector<bool>> solve_2sat(const TwoSatFormula& f) {
  const int v = f.num_vars();
  const int nodes = 2 * v;
  // Vertex encoding: 2x = negative literal of x, 2x+1 = positive literal.
  auto vertex = [](Literal l) { return 2 * l.var + (l.positive ? 1 : 0); };
  auto negation = [](int node) { return node ^ 1; };

  // CSR adjacency. Clause (a v b) adds implications !a -> b and !b -> a.
  std::vector<int> head(nodes + 1, 0), to(2 * f.clauses().size());
  for (const auto& [a, b] : f.clauses()) {
    ++head[negation(vertex(a)) + 1];
    ++head[negation(vertex(b)) + 1];
  }
  for (int i = 0; i < nodes; ++i) head[i + 1] += head[i];
  {
    std::vector<int> cursor(head.begin(), head.end() - 1);
    for (const auto& [a, b] : f.clauses()) {
      to[cursor[negation(vertex(a))]++] = vertex(b);
      to[cursor[negation(vertex(b))]++] = vertex(a);
    }
  }

  // Iterative Tarjan. Components are numbered in completion order, so an edge
  // between components always goes from a higher number to a lower one.
  std::vector<int> comp(nodes, -1), low(nodes, 0), num(nodes, -1);
  std::vector<int> stk, frame_v, frame_e;
  stk.reserve(nodes);
  int counter = 0, ncomp = 0;
  for (int s = 0; s < nodes; ++s) {
    if (num[s] != -1) continue;
    frame_v.push_back(s);
    frame_e.push_back(head[s]);
    num[s] = low[s] = counter++;
    stk.push_back(s);
    while (!frame_v.empty()) {
      int u = frame_v.back();
      int& e = frame_e.back();
      if (e < head[u + 1]) {
        int w = to[e++];
        if (num[w] == -1) {
          num[w] = low[w] = counter++;
          stk.push_back(w);
          frame_v.push_back(w);
          frame_e.push_back(head[w]);
        } else if (comp[w] == -1) {
          if (num[w] < low[u]) low[u] = num[w];
        }
      } else {
        frame_v.pop_back();
        frame_e.pop_back();
        if (!frame_v.empty() && low[u] < low[frame_v.back()]) low[frame_v.back()] = low[u];
        if (low[u] == num[u]) {
          while (true) {
            int w = stk.back();
            stk.pop_back();
            comp[w] = ncomp;
            if (w == u) break;
          }
          ++ncomp;
        }
      }
    }
  }

  std::vector<bool> assignment(v, false);
  for (int x = 0; x < v; ++x) {
    if (comp[2 * x] == comp[2 * x + 1]) return std::nullopt;
    // Lower component number = later in topological order; take that literal.
    assignment[x] = comp[2 * x + 1] < comp[2 * x];
  }

  for (const auto& [a, b] : f.clauses()) {
    bool sa = assignment[a.var] == a.positive;
    bool sb = assignment[b.var] == b.positive;
    if (!sa && !sb) throw std::logic_error("2-SAT produced an assignment violating a clause");
  }
  return assignment;
}

}  // namespace dmc
