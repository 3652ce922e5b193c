#pragma once

// Degree-constrained bipartite subgraph solver and the sunflower matrix
// completion (SMC) solver built on it.
//
// The factor instance is solved as a max-flow with lower bounds: source ->
// left arcs carry [g, f] bounds, edge arcs carry capacity 1, right -> sink
// arcs carry [g, f] bounds. A feasible circulation (standard lower-bound
// transformation with a super source/sink) is augmented to a maximum flow and
// compared against the edge-count target. Shortest-augmenting-path phases and
// insertion-ordered adjacency keep witnesses deterministic.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dmc/matrix.hpp"

namespace dmc {

struct BipartiteDegreeGraph {
  int left = 0;
  int right = 0;
  std::vector<std::pair<int, int>> edges;  // (left index, right index)
  std::vector<int> g_left, f_left;
  std::vector<int> g_right, f_right;
  std::int64_t min_edges = 0;
};

namespace detail {

class Dinic {
 public:
  explicit Dinic(int nodes) : head_(nodes), level_(nodes), iter_(nodes) {}

  int add_arc(int from, int to, std::int64_t cap) {
    int id = static_cast<int>(arcs_.size());
    arcs_.push_back({to, cap, 0});
    head_[from].push_back(id);
    arcs_.push_back({from, 0, 0});
    head_[to].push_back(id + 1);
    return id;
  }

  std::int64_t residual(int arc_id) const { return arcs_[arc_id].cap - arcs_[arc_id].flow; }
  std::int64_t flow_on(int arc_id) const { return arcs_[arc_id].flow; }

  void disable(int arc_id) {
    arcs_[arc_id].cap = arcs_[arc_id].flow;
    arcs_[arc_id ^ 1].cap = arcs_[arc_id ^ 1].flow;
  }

  std::int64_t max_flow(int s, int t) {
    std::int64_t total = 0;
    while (bfs(s, t)) {
      std::fill(iter_.begin(), iter_.end(), 0);
      while (std::int64_t pushed = dfs(s, t, kInf)) total += pushed;
    }
    return total;
  }

 private:
  static constexpr std::int64_t kInf = std::int64_t{1} << 62;

  struct Arc {
    int to;
    std::int64_t cap, flow;
  };

  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    queue_.clear();
    queue_.push_back(s);
    level_[s] = 0;
    for (std::size_t q = 0; q < queue_.size(); ++q) {
      int u = queue_[q];
      for (int id : head_[u]) {
        const Arc& a = arcs_[id];
        if (a.cap - a.flow > 0 && level_[a.to] == -1) {
          level_[a.to] = level_[u] + 1;
          queue_.push_back(a.to);
        }
      }
    }
    return level_[t] != -1;
  }

  std::int64_t dfs(int u, int t, std::int64_t limit) {
    if (u == t) return limit;
    for (std::size_t& i = iter_[u]; i < head_[u].size(); ++i) {
      int id = head_[u][i];
      Arc& a = arcs_[id];
      if (a.cap - a.flow <= 0 || level_[a.to] != level_[u] + 1) continue;
      std::int64_t pushed = dfs(a.to, t, std::min(limit, a.cap - a.flow));
      if (pushed > 0) {
        a.flow += pushed;
        arcs_[id ^ 1].flow -= pushed;
        return pushed;
      }
    }
    return 0;
  }

  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> head_;
  std::vector<int> level_;
  std::vector<std::size_t> iter_;
  std::vector<int> queue_;
};

}  // namespace detail

// Returns indices into G.edges of a subgraph with g <= deg <= f at every
// vertex and at least G.min_edges edges, or nullopt if none exists.
inline std::optional<std::vector<int>> solve_bipartite_gf_factor(const BipartiteDegreeGraph& G) {
  if (static_cast<int>(G.g_left.size()) != G.left || static_cast<int>(G.f_left.size()) != G.left ||
      static_cast<int>(G.g_right.size()) != G.right || static_cast<int>(G.f_right.size()) != G.right)
    throw std::invalid_argument("gf-factor: degree bound vectors must match vertex counts");
  for (int i = 0; i < G.left; ++i)
    if (G.g_left[i] < 0 || G.g_left[i] > G.f_left[i])
      throw std::invalid_argument("gf-factor: need 0 <= g <= f on every left vertex");
  for (int j = 0; j < G.right; ++j)
    if (G.g_right[j] < 0 || G.g_right[j] > G.f_right[j])
      throw std::invalid_argument("gf-factor: need 0 <= g <= f on every right vertex");
  for (auto [u, v] : G.edges)
    if (u < 0 || u >= G.left || v < 0 || v >= G.right)
      throw std::invalid_argument("gf-factor: edge endpoint out of range");

  // Node layout: 0 = source, 1 = sink, 2 = super source, 3 = super sink,
  // then left vertices, then right vertices.
  const int s = 0, t = 1, ss = 2, tt = 3;
  auto left_node = [&](int i) { return 4 + i; };
  auto right_node = [&](int j) { return 4 + G.left + j; };
  detail::Dinic net(4 + G.left + G.right);

  std::vector<std::int64_t> excess(4 + G.left + G.right, 0);
  auto add_bounded = [&](int from, int to, std::int64_t lo, std::int64_t hi) {
    int id = net.add_arc(from, to, hi - lo);
    excess[to] += lo;
    excess[from] -= lo;
    return id;
  };

  for (int i = 0; i < G.left; ++i) add_bounded(s, left_node(i), G.g_left[i], G.f_left[i]);
  std::vector<int> edge_arc(G.edges.size());
  for (std::size_t e = 0; e < G.edges.size(); ++e)
    edge_arc[e] = net.add_arc(left_node(G.edges[e].first), right_node(G.edges[e].second), 1);
  for (int j = 0; j < G.right; ++j) add_bounded(right_node(j), t, G.g_right[j], G.f_right[j]);

  int closing_arc = net.add_arc(t, s, std::int64_t{1} << 61);

  std::int64_t need = 0;
  for (int x = 0; x < 4 + G.left + G.right; ++x) {
    if (excess[x] > 0) {
      net.add_arc(ss, x, excess[x]);
      need += excess[x];
    } else if (excess[x] < 0) {
      net.add_arc(x, tt, -excess[x]);
    }
  }

  if (net.max_flow(ss, tt) < need) return std::nullopt;

  std::int64_t total = net.flow_on(closing_arc);
  net.disable(closing_arc);
  total += net.max_flow(s, t);
  if (total < G.min_edges) return std::nullopt;

  std::vector<int> chosen;
  for (std::size_t e = 0; e < G.edges.size(); ++e)
    if (net.flow_on(edge_arc[e]) == 1) chosen.push_back(static_cast<int>(e));
  return chosen;
}

// ---------------------------------------------------------------------------
// Sunflower matrix completion: complete S so the difference sets of rows
// 1..n-1 against the last row are pairwise disjoint, each of size at most s,
// with total size at least m.

struct SmcInstance {
  IncompleteMatrix matrix;
  int max_petal = 0;          // s
  std::int64_t min_total = 0; // m
};

struct SmcGraphResult {
  bool early_no = false;
  BipartiteDegreeGraph graph;
  IncompleteMatrix normalized;      // column-complemented so zeros dominate
  std::vector<bool> complemented;   // per column
};

// Builds the factor graph. Occurrence counts a0/a1 per column decide the edge
// rule; a column is complemented first when ones outnumber zeros. Early No
// when a column forces two difference sets to intersect.
inline SmcGraphResult build_smc_graph(const SmcInstance& inst) {
  SmcGraphResult out;
  out.normalized = inst.matrix;
  const std::size_t n = out.normalized.n();
  const std::size_t l = out.normalized.l();
  out.complemented.assign(l, false);

  BipartiteDegreeGraph& G = out.graph;
  G.left = static_cast<int>(n) - 1;
  G.right = static_cast<int>(l);
  G.g_left.assign(G.left, 0);
  G.f_left.assign(G.left, inst.max_petal);
  G.g_right.assign(G.right, 0);
  G.f_right.assign(G.right, 1);
  G.min_edges = inst.min_total;

  for (std::size_t j = 0; j < l; ++j) {
    int a0 = 0, a1 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      Cell c = out.normalized.cell(i, j);
      a0 += c == Cell::Zero;
      a1 += c == Cell::One;
    }
    if (a1 > a0) {
      out.normalized.complement_column(j);
      out.complemented[j] = true;
      std::swap(a0, a1);
    }
    if (a1 >= 2 || (a0 >= 2 && out.normalized.cell(n - 1, j) == Cell::One)) {
      out.early_no = true;
      return out;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      Cell c = out.normalized.cell(i, j);
      bool edge;
      if (a0 <= 1 && a1 == 0) edge = true;
      else if (a0 == 1 && a1 == 1) edge = c != Cell::Missing;
      else if (a1 == 0) edge = c == Cell::Missing;
      else edge = c == Cell::One;
      if (edge) G.edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
    G.g_right[j] = a1;
  }
  return out;
}

inline bool smc_solution_valid(const SmcInstance& inst, const CompleteMatrix& T) {
  if (!is_completion_of(inst.matrix, T)) return false;
  const std::size_t n = T.n();
  std::vector<bool> used(T.l(), false);
  std::int64_t total = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    auto D = disagreement_set(T.row(i), T.row(n - 1));
    if (D.size() > static_cast<std::size_t>(inst.max_petal)) return false;
    for (int j : D) {
      if (used[j]) return false;
      used[j] = true;
    }
    total += static_cast<std::int64_t>(D.size());
  }
  return total >= inst.min_total;
}

inline std::optional<CompleteMatrix> solve_smc(const SmcInstance& inst) {
  if (inst.max_petal < 0 || inst.min_total < 0)
    throw std::invalid_argument("solve_smc: petal and mass bounds must be non-negative");
  SmcGraphResult built = build_smc_graph(inst);
  if (built.early_no) return std::nullopt;

  auto chosen = solve_bipartite_gf_factor(built.graph);
  if (!chosen) return std::nullopt;

  const std::size_t n = built.normalized.n();
  const std::size_t l = built.normalized.l();
  IncompleteMatrix work = built.normalized;

  std::vector<int> petal_owner(l, -1);
  for (int e : *chosen) petal_owner[built.graph.edges[e].second] = built.graph.edges[e].first;

  for (std::size_t j = 0; j < l; ++j) {
    if (petal_owner[j] < 0) {
      // Unmatched column: zero lower bound, complete missing entries with 0.
      for (std::size_t i = 0; i < n; ++i)
        if (work.cell(i, j) == Cell::Missing) work.set_cell(i, j, Cell::Zero);
      continue;
    }
    // Chosen edge: complete the column so petal_owner differs from all others.
    std::size_t owner = static_cast<std::size_t>(petal_owner[j]);
    Cell own = work.cell(owner, j) == Cell::Zero ? Cell::Zero : Cell::One;
    Cell rest = own == Cell::Zero ? Cell::One : Cell::Zero;
    for (std::size_t i = 0; i < n; ++i) {
      Cell want = i == owner ? own : rest;
      Cell have = work.cell(i, j);
      if (have != Cell::Missing && have != want)
        throw std::logic_error("solve_smc: factor edge contradicts a known entry");
      work.set_cell(i, j, want);
    }
  }

  for (std::size_t j = 0; j < l; ++j)
    if (built.complemented[j]) work.complement_column(j);

  CompleteMatrix T(std::move(work));
  if (!smc_solution_valid(inst, T))
    throw std::logic_error("solve_smc: reconstructed completion fails the petal conditions");
  return T;
}

}  // namespace dmc
