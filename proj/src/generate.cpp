#include "hamlab/generate.hpp"

#include "hamlab/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace hamlab {

std::uint64_t pair_count(int n) {
  const auto nn = static_cast<std::uint64_t>(std::max(n, 0));
  return nn * (nn > 0 ? nn - 1 : 0) / 2;
}

Edge pair_from_index(int n, std::uint64_t k) {
  if (k >= pair_count(n)) throw PreconditionError("pair_from_index: index out of range");
  Vertex u = 0;
  std::uint64_t row = static_cast<std::uint64_t>(n - 1);
  while (k >= row) {
    k -= row;
    --row;
    ++u;
  }
  return {u, static_cast<Vertex>(u + 1 + static_cast<Vertex>(k))};
}

namespace {

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("probability must lie in [0, 1]");
}

// Walks pair indices in increasing order without recomputing the row.
class PairCursor {
 public:
  explicit PairCursor(int n) : n_(n) {}
  Edge advance_to(std::uint64_t k) {
    while (k >= row_start_ + row_len()) {
      row_start_ += row_len();
      ++u_;
    }
    return {u_, static_cast<Vertex>(u_ + 1 + static_cast<Vertex>(k - row_start_))};
  }

 private:
  std::uint64_t row_len() const { return static_cast<std::uint64_t>(n_ - 1 - u_); }
  int n_;
  Vertex u_ = 0;
  std::uint64_t row_start_ = 0;
};

}  // namespace

Graph sample_gnp(int n, double p, Seed seed, GnpMode mode) {
  if (n < 1) throw PreconditionError("sample_gnp: n must be >= 1");
  check_probability(p);
  Graph g(n);
  const std::uint64_t total = pair_count(n);
  if (p == 0.0 || total == 0) return g;
  Rng rng(seed);
  if (mode == GnpMode::automatic) mode = p < kGnpSkipThreshold ? GnpMode::skip : GnpMode::dense;
  PairCursor cursor(n);
  if (mode == GnpMode::dense || p == 1.0) {
    for (std::uint64_t k = 0; k < total; ++k) {
      const bool keep = rng.bernoulli(p);
      if (keep) {
        const Edge e = cursor.advance_to(k);
        g.add_edge(e.u, e.v);
      }
    }
    return g;
  }
  // Gaps between kept pairs are geometric with success probability p.
  const double log_q = std::log1p(-p);
  std::uint64_t k = 0;
  while (true) {
    const double u = 1.0 - rng.uniform();  // (0, 1]
    const double gap = std::floor(std::log(u) / log_q);
    if (gap >= static_cast<double>(total - k)) break;
    k += static_cast<std::uint64_t>(gap);
    const Edge e = cursor.advance_to(k);
    g.add_edge(e.u, e.v);
    if (++k >= total) break;
  }
  return g;
}

Graph sample_gnm(int n, std::uint64_t m, Seed seed) {
  if (n < 1) throw PreconditionError("sample_gnm: n must be >= 1");
  const std::uint64_t total = pair_count(n);
  if (m > total)
    throw PreconditionError("sample_gnm: m=" + std::to_string(m) + " exceeds C(n,2)=" + std::to_string(total));
  Rng rng(seed);
  // Floyd's subset sampling.
  std::set<std::uint64_t> chosen;
  for (std::uint64_t j = total - m; j < total; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  Graph g(n);
  PairCursor cursor(n);
  for (auto k : chosen) {
    const Edge e = cursor.advance_to(k);
    g.add_edge(e.u, e.v);
  }
  return g;
}

Graph ProcessTrace::graph_at(std::size_t t) const {
  if (t > order.size()) throw PreconditionError("graph_at: prefix longer than the process");
  return Graph::from_edges(n, std::span<const Edge>(order.data(), t));
}

std::size_t ProcessTrace::tau(HittingSelector which) const {
  switch (which) {
    case HittingSelector::min_degree_1: return tau_min_degree_1;
    case HittingSelector::min_degree_2: return tau_min_degree_2;
    case HittingSelector::connected: return tau_connected;
  }
  return 0;
}

ProcessTrace random_process(int n, Seed seed) {
  if (n < 3) throw PreconditionError("random_process: n must be >= 3");
  if (n > kProcessMaxN) throw CapacityError("random_process: n exceeds " + std::to_string(kProcessMaxN));
  ProcessTrace trace;
  trace.n = n;
  const std::uint64_t total = pair_count(n);
  trace.order.reserve(total);
  for (std::uint64_t k = 0; k < total; ++k) trace.order.push_back(pair_from_index(n, k));
  Rng rng(seed);
  shuffle(trace.order, rng);

  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  int below1 = n, below2 = n, components = n;
  for (std::size_t t = 1; t <= trace.order.size(); ++t) {
    const Edge e = trace.order[t - 1];
    for (Vertex v : {e.u, e.v}) {
      ++deg[v];
      if (deg[v] == 1) --below1;
      if (deg[v] == 2) --below2;
    }
    const int a = find(e.u), b = find(e.v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
    if (!trace.tau_min_degree_1 && below1 == 0) trace.tau_min_degree_1 = t;
    if (!trace.tau_min_degree_2 && below2 == 0) trace.tau_min_degree_2 = t;
    if (!trace.tau_connected && components == 1) trace.tau_connected = t;
  }
  return trace;
}

Graph process_hitting_graph(const ProcessTrace& trace, HittingSelector which) {
  return trace.graph_at(trace.tau(which));
}

OrientedGraph orient_randomly(const Graph& g, Seed seed) {
  Rng rng(seed);
  OrientedGraph d(g.n());
  for (const Edge& e : g.edges()) {
    if (rng.next() >> 63)
      d.add_arc(e.v, e.u);
    else
      d.add_arc(e.u, e.v);
  }
  return d;
}

Graph ExposureStream::combined(std::size_t count) const {
  if (count > boosters.size()) throw PreconditionError("combined: more boosters requested than available");
  Graph g = base;
  for (std::size_t i = 0; i < count; ++i) g.add_edge(boosters[i].u, boosters[i].v);
  return g;
}

ExposureStream expose_boosters(Graph base, std::size_t booster_count, VertexSet forbidden, Seed seed) {
  std::sort(forbidden.begin(), forbidden.end());
  forbidden.erase(std::unique(forbidden.begin(), forbidden.end()), forbidden.end());
  std::vector<char> banned(static_cast<std::size_t>(base.n()), 0);
  for (Vertex v : forbidden) {
    if (v < 0 || v >= base.n()) throw PreconditionError("expose_boosters: forbidden vertex out of range");
    banned[v] = 1;
  }
  std::vector<Edge> candidates;
  for (Vertex u = 0; u < base.n(); ++u) {
    if (banned[u]) continue;
    for (Vertex v = u + 1; v < base.n(); ++v)
      if (!banned[v] && !base.has_edge(u, v)) candidates.push_back({u, v});
  }
  if (candidates.size() < booster_count)
    throw PreconditionError("expose_boosters: need " + std::to_string(booster_count) + " non-edges avoiding the forbidden set, only " +
                            std::to_string(candidates.size()) + " available (short by " +
                            std::to_string(booster_count - candidates.size()) + ")");
  Rng rng(seed);
  // Partial Fisher-Yates: the first booster_count slots are a uniform ordered sample.
  for (std::size_t i = 0; i < booster_count; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(candidates.size() - i));
    std::swap(candidates[i], candidates[j]);
  }
  candidates.resize(booster_count);
  return ExposureStream{std::move(base), std::move(candidates), std::move(forbidden)};
}

ExposureStream two_round_exposure(int n, double p1, std::size_t booster_count, VertexSet forbidden, Seed seed) {
  Graph base = sample_gnp(n, p1, derive_seed(seed, 0));
  return expose_boosters(std::move(base), booster_count, std::move(forbidden), derive_seed(seed, 1));
}

std::string trace_to_json(const ProcessTrace& trace) {
  nlohmann::ordered_json j;
  j["n"] = trace.n;
  auto order = nlohmann::ordered_json::array();
  for (const auto& e : trace.order) order.push_back({e.u, e.v});
  j["order"] = std::move(order);
  j["tau1"] = trace.tau_min_degree_1;
  j["tau2"] = trace.tau_min_degree_2;
  j["tau_conn"] = trace.tau_connected;
  return j.dump();
}

}  // namespace hamlab
