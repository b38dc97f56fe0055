#pragma once

// Test helpers: small graph builders and naive reference implementations.
// The oracles here deliberately use different algorithms from the library
// (plain DFS, permutation expansion, edge-subset enumeration).

#include "hamlab/count.hpp"
#include "hamlab/factor.hpp"
#include "hamlab/graph.hpp"
#include "hamlab/rng.hpp"
#include "hamlab/structure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <vector>

namespace testing {

using namespace hamlab;

inline Graph random_graph(int n, double p, Rng& rng) {
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.uniform() < p) g.add_edge(u, v);
  return g;
}

inline OrientedGraph random_digraph(int n, double p, Rng& rng) {
  OrientedGraph d(n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v && rng.uniform() < p) d.add_arc(u, v);
  return d;
}

inline OrientedGraph complete_digraph(int n) {
  OrientedGraph d(n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v) d.add_arc(u, v);
  return d;
}

inline OrientedGraph directed_cycle(int n) {
  OrientedGraph d(n);
  for (int i = 0; i < n; ++i) d.add_arc(i, (i + 1) % n);
  return d;
}

inline Graph petersen() {
  Graph g(10);
  for (int i = 0; i < 5; ++i) {
    g.add_edge(i, (i + 1) % 5);
    g.add_edge(i, i + 5);
    g.add_edge(5 + i, 5 + (i + 2) % 5);
  }
  return g;
}

inline Graph star(int leaves) {
  Graph g(leaves + 1);
  for (int i = 1; i <= leaves; ++i) g.add_edge(0, i);
  return g;
}

// Graph number `code` on n vertices: bit k of code selects the k-th pair in
// lexicographic order.
inline Graph graph_from_code(int n, std::uint64_t code) {
  Graph g(n);
  int k = 0;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v, ++k)
      if ((code >> k) & 1u) g.add_edge(u, v);
  return g;
}

// A random almost 2-factor F together with a supergraph of its edges.
inline std::pair<Graph, Factor> random_factor_graph(int n, double extra, Rng& rng) {
  std::vector<Vertex> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
  const int isolated = static_cast<int>(rng.below(static_cast<std::uint64_t>(isolated_budget(n)) + 1));
  VertexSet iso(perm.begin(), perm.begin() + isolated);
  std::sort(iso.begin(), iso.end());
  std::vector<std::vector<Vertex>> cycles;
  std::size_t pos = static_cast<std::size_t>(isolated);
  while (pos < perm.size()) {
    std::size_t left = perm.size() - pos;
    std::size_t len = left < 6 ? left : 3 + rng.below(left - 2);
    if (left - len > 0 && left - len < 3) len = left;
    cycles.emplace_back(perm.begin() + static_cast<long>(pos), perm.begin() + static_cast<long>(pos + len));
    pos += len;
  }
  Factor f(n, cycles, iso);
  Graph g = testing::random_graph(n, extra, rng);
  for (const Edge& e : f.edges()) g.add_edge(e.u, e.v);
  return {g, f};
}

// ---------------------------------------------------------------------------
// Counting oracles

// Directed Hamilton cycles through 0 by DFS, halved.
inline std::uint64_t hamilton_dfs(const Graph& g) {
  const int n = g.n();
  if (n < 3) return 0;
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::uint64_t directed = 0;
  std::function<void(int, int)> go = [&](int v, int depth) {
    if (depth == n) {
      directed += g.has_edge(v, 0);
      return;
    }
    for (int w = 1; w < n; ++w)
      if (!used[w] && g.has_edge(v, w)) {
        used[w] = 1;
        go(w, depth + 1);
        used[w] = 0;
      }
  };
  used[0] = 1;
  go(0, 1);
  return directed / 2;
}

inline BigCount naive_permanent(const Matrix& a) {
  std::vector<int> perm(static_cast<std::size_t>(a.n));
  std::iota(perm.begin(), perm.end(), 0);
  BigCount total;
  do {
    BigCount term(std::uint64_t{1});
    for (int i = 0; i < a.n && !term.is_zero(); ++i) term *= BigCount(static_cast<std::uint64_t>(a.at(i, perm[i])));
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

// Cycle covers of d keyed by cycle count, via all permutations.
inline std::map<int, std::uint64_t> one_factor_census(const OrientedGraph& d) {
  const int n = d.n();
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::map<int, std::uint64_t> out;
  do {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) ok = perm[i] != i && d.has_arc(i, perm[i]);
    if (!ok) continue;
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    int cycles = 0;
    for (int i = 0; i < n; ++i) {
      if (seen[i]) continue;
      ++cycles;
      for (int j = i; !seen[j]; j = perm[j]) seen[j] = 1;
    }
    ++out[cycles];
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// Connected components of a subgraph in which every vertex has degree 0 or 2.
inline int cycle_components(int n, const std::vector<Edge>& edges) {
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  for (const Edge& e : edges) {
    ++deg[e.u];
    ++deg[e.v];
    parent[find(e.u)] = find(e.v);
  }
  std::set<int> roots;
  for (int v = 0; v < n; ++v)
    if (deg[v] > 0) roots.insert(find(v));
  return static_cast<int>(roots.size());
}

// Almost 2-factors by edge-subset enumeration (use on graphs with <= ~22 edges).
inline std::map<int, std::uint64_t> two_factor_census(const Graph& g, int allow_isolated) {
  const auto edges = g.edges();
  const int n = g.n();
  std::map<int, std::uint64_t> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << edges.size()); ++mask) {
    std::vector<int> deg(static_cast<std::size_t>(n), 0);
    std::vector<Edge> chosen;
    for (std::size_t k = 0; k < edges.size(); ++k)
      if ((mask >> k) & 1u) {
        ++deg[edges[k].u];
        ++deg[edges[k].v];
        chosen.push_back(edges[k]);
      }
    int isolated = 0;
    bool ok = true;
    for (int d : deg) {
      if (d == 0) ++isolated;
      else if (d != 2) ok = false;
    }
    if (!ok || isolated > allow_isolated) continue;
    ++out[cycle_components(n, chosen)];
  }
  return out;
}

inline std::uint64_t perfect_matchings_naive(const Graph& g) {
  const int n = g.n();
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::function<std::uint64_t()> go = [&]() -> std::uint64_t {
    int v = 0;
    while (v < n && used[v]) ++v;
    if (v == n) return 1;
    used[v] = 1;
    std::uint64_t total = 0;
    for (int w = v + 1; w < n; ++w)
      if (!used[w] && g.has_edge(v, w)) {
        used[w] = 1;
        total += go();
        used[w] = 0;
      }
    used[v] = 0;
    return total;
  };
  return go();
}

// ---------------------------------------------------------------------------
// Structure oracles

// The three expander properties, evaluated by direct quantification.
inline bool expander_bruteforce(const Graph& g, double p, const ConstantsProfile& c) {
  const int n = g.n();
  const double np = n * p;
  std::vector<int> dset;
  for (int v = 0; v < n; ++v)
    if (g.degree(v) < np / c.low_degree_divisor) dset.push_back(v);
  if (static_cast<double>(dset.size()) > std::pow(double(n), c.expander_size_exponent)) return false;

  int limit = n - 1;
  const double lnln = n >= 3 ? std::log(std::log(double(n))) : 0.0;
  if (lnln > 0) limit = static_cast<int>(std::floor(c.short_path_factor * std::log(double(n)) / lnln));
  std::vector<char> in_d(static_cast<std::size_t>(n), 0);
  for (int v : dset) in_d[v] = 1;
  // Any simple path (or cycle back to its start) of length 1..limit joining D vertices.
  bool bad = false;
  std::vector<char> on(static_cast<std::size_t>(n), 0);
  std::function<void(int, int, int)> walk = [&](int start, int v, int len) {
    if (bad || len == limit) return;
    for (int w : g.neighbors(v)) {
      if (w == start && len + 1 >= 3) bad = true;
      if (on[w]) continue;
      if (in_d[w]) bad = true;
      on[w] = 1;
      walk(start, w, len + 1);
      on[w] = 0;
    }
  };
  for (int s : dset) {
    on[s] = 1;
    walk(s, s, 0);
    on[s] = 0;
  }
  if (bad) return false;

  const int max_size = static_cast<int>(std::floor(1.0 / p + 1e-12));
  for (std::uint64_t s = 1; s < (std::uint64_t{1} << n); ++s) {
    const int size = __builtin_popcountll(s);
    if (size > max_size) continue;
    bool touches_d = false;
    for (int v : dset) touches_d |= ((s >> v) & 1u) != 0;
    if (touches_d) continue;
    int nb = 0;
    for (int v = 0; v < n; ++v) {
      if ((s >> v) & 1u) continue;
      bool adj = false;
      for (int u = 0; u < n && !adj; ++u) adj = ((s >> u) & 1u) && g.has_edge(u, v);
      nb += adj;
    }
    if (nb < np / c.expansion_divisor * size) return false;
  }
  return true;
}

// d|Y'| <= sum_x min(d, e(x, Y')) for every Y'.
inline bool ore_ryser_bruteforce(const BipartiteGraph& b, int d) {
  const int n = b.left;
  for (std::uint64_t y = 0; y < (std::uint64_t{1} << n); ++y) {
    long long rhs = 0;
    for (int x = 0; x < n; ++x) {
      int e = 0;
      for (int j = 0; j < n; ++j) e += ((y >> j) & 1u) && b.graph.has_edge(b.x(x), b.y(j));
      rhs += std::min(d, e);
    }
    if (static_cast<long long>(d) * __builtin_popcountll(y) > rhs) return false;
  }
  return true;
}

inline std::uint64_t edge_distribution_bruteforce(const OrientedGraph& d, double r, const ConstantsProfile& c) {
  const int n = d.n();
  const int cap = static_cast<int>(std::floor(c.set_size_cap * n + 1e-9));
  std::uint64_t bad = 0;
  for (std::uint64_t a = 1; a < (std::uint64_t{1} << n); ++a) {
    if (__builtin_popcountll(a) > cap) continue;
    for (std::uint64_t b = 1; b < (std::uint64_t{1} << n); ++b) {
      if (__builtin_popcountll(b) > cap) continue;
      int arcs = 0;
      for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) arcs += ((a >> u) & 1u) && ((b >> v) & 1u) && d.has_arc(u, v);
      if (arcs > c.edge_density_coeff * r * std::sqrt(double(__builtin_popcountll(a)) * __builtin_popcountll(b))) ++bad;
    }
  }
  return bad;
}

}  // namespace testing
