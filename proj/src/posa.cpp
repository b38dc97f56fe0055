#include "hamlab/posa.hpp"

#include "hamlab/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>
#include <tuple>

namespace hamlab {

RotationBudget RotationBudget::for_graph(int n, double p) {
  RotationBudget b;
  const double np = n * p;
  if (n >= 2 && np > 1.0) {
    const double r = std::ceil(3.0 * std::log(static_cast<double>(n)) / std::log(np));
    b.max_rotations_per_merge = std::max(1, static_cast<int>(r));
  }
  b.target_endpoint_count = std::max(1, static_cast<int>(std::ceil(n / 3000.0)));
  b.exhaustive_fallback = n / 3000.0 < 1.0;
  return b;
}

std::string to_string(ClosureExit e) {
  switch (e) {
    case ClosureExit::extension_found: return "extension-found";
    case ClosureExit::closure_complete: return "closure-complete";
    case ClosureExit::budget_exhausted: return "budget-exhausted";
  }
  return "unknown";
}

std::string to_string(SearchRoute r) {
  switch (r) {
    case SearchRoute::rotation: return "rotation";
    case SearchRoute::exhaustive: return "exhaustive";
    case SearchRoute::none: return "none";
  }
  return "unknown";
}

namespace {

bool has_outside_neighbor(const Graph& g, Vertex v, const std::vector<char>& on_path) {
  for (Vertex w : g.neighbors(v))
    if (!on_path[w]) return true;
  return false;
}

}  // namespace

EndpointClosure endpoint_closure(const Graph& g, const RotationPath& p0, const RotationBudget& budget) {
  EndpointClosure out;
  std::vector<char> on_path(static_cast<std::size_t>(g.n()), 0);
  for (Vertex v : p0.vertices()) on_path[v] = 1;
  std::vector<char> avoid(static_cast<std::size_t>(g.n()), 0);
  for (Vertex v : budget.avoid_set)
    if (v >= 0 && v < g.n()) avoid[v] = 1;

  auto discover = [&](Vertex e, RotationPath path, std::vector<std::size_t> witness) {
    out.endpoints.push_back(e);
    out.paths.emplace(e, std::move(path));
    out.witness.emplace(e, std::move(witness));
    if (!out.extending_endpoint && has_outside_neighbor(g, e, on_path)) out.extending_endpoint = e;
  };

  discover(p0.endpoint(), p0, {});
  std::vector<Vertex> layer{p0.endpoint()};
  int depth = 0;
  while (!out.extending_endpoint && !layer.empty()) {
    if (depth >= budget.max_rotations_per_merge) {
      if (!budget.exhaustive_fallback) {
        out.exit = ClosureExit::budget_exhausted;
        break;
      }
      out.used_fallback = true;
    }
    std::vector<Vertex> next;
    for (Vertex e : layer) {
      const RotationPath& cur = out.paths.at(e);
      const auto& vs = cur.vertices();
      const std::size_t q = vs.size();
      for (std::size_t i = 1; i + 2 <= q; ++i) {
        const Vertex pivot = vs[i - 1];
        if (!g.has_edge(vs[q - 1], pivot)) continue;
        if (!budget.avoid_set.empty() &&
            (avoid[pivot] || avoid[vs[i]] || (i >= 2 && avoid[vs[i - 2]])))
          continue;
        const Vertex fresh = vs[i];
        if (out.paths.count(fresh)) continue;
        auto w = out.witness.at(e);
        w.push_back(i);
        discover(fresh, rotate(cur, g, i), std::move(w));
        next.push_back(fresh);
        if (out.extending_endpoint) break;
      }
      if (out.extending_endpoint) break;
    }
    if (!next.empty()) ++depth;
    layer = std::move(next);
  }
  if (out.extending_endpoint) out.exit = ClosureExit::extension_found;
  out.depth_reached = depth;
  std::sort(out.endpoints.begin(), out.endpoints.end());
  out.target_reached = static_cast<int>(out.endpoints.size()) >= budget.target_endpoint_count;
  return out;
}

RotationPath extend_path(const Graph& g, const RotationPath& p) {
  if (p.size() == 0) return p;
  for (Vertex w : g.neighbors(p.endpoint()))
    if (!p.contains(w)) {
      RotationPath out = p;
      out.append(w);
      return out;
    }
  return p;
}

namespace {

std::string set_text(const std::vector<Vertex>& vs) {
  std::string s = "{";
  for (std::size_t i = 0; i < vs.size(); ++i) s += (i ? "," : "") + std::to_string(vs[i]);
  return s + "}";
}

// The merging engine shared by factor conversion and the Hamiltonicity
// prober. Components are cycles (size >= 3) or single vertices. The working
// graph gains only boosters that complete a round, so a booster is in the
// final cycle only through its round's closing_edge.
class Engine {
 public:
  Engine(const Graph& g, std::vector<std::vector<Vertex>> comps, const std::vector<Edge>* boosters,
         const VertexSet* forbidden, const RotationBudget& budget)
      : g_(g), comps_(std::move(comps)), boosters_(boosters), budget_(budget) {
    const auto un = static_cast<std::size_t>(g.n());
    comp_of_.assign(un, -1);
    in_cur_.assign(un, 0);
    forbidden_.assign(un, 0);
    if (forbidden)
      for (Vertex v : *forbidden) forbidden_[v] = 1;
    std::sort(comps_.begin(), comps_.end(),
              [](const auto& a, const auto& b) { return *std::min_element(a.begin(), a.end()) < *std::min_element(b.begin(), b.end()); });
    for (std::size_t c = 0; c < comps_.size(); ++c)
      for (Vertex v : comps_[c]) comp_of_[v] = static_cast<int>(c);
  }

  ConversionReport run() {
    report_.initial_components = static_cast<int>(comps_.size());
    remaining_ = static_cast<int>(comps_.size());
    if (comps_.empty() || g_.n() < 3) {
      report_.diagnostics = "graph has fewer than 3 vertices";
      return report_;
    }
    cur_ = comps_[0];
    closed_ = cur_.size() >= 3;
    for (Vertex v : cur_) {
      in_cur_[v] = 1;
      comp_of_[v] = -1;
    }
    if (closed_) rotate_to_front_min();
    while (!done_ && !failed_) {
      if (closed_) {
        if (static_cast<int>(cur_.size()) == g_.n()) {
          finish();
          break;
        }
        open_closed(std::nullopt);
      } else {
        step_path();
      }
    }
    return report_;
  }

 private:
  void rotate_to_front_min() { std::rotate(cur_.begin(), std::min_element(cur_.begin(), cur_.end()), cur_.end()); }

  void finish() {
    report_.hamilton = canonical_cycle(cur_);
    done_ = true;
  }

  void fail(const std::string& why) {
    failed_ = true;
    std::ostringstream os;
    os << why;
    // Name the graph component holding the current block and the first one
    // it cannot reach.
    std::vector<int> label(static_cast<std::size_t>(g_.n()), -1);
    std::vector<std::vector<Vertex>> parts;
    for (Vertex s = 0; s < g_.n(); ++s) {
      if (label[s] != -1) continue;
      const int id = static_cast<int>(parts.size());
      parts.emplace_back();
      std::vector<Vertex> stack{s};
      label[s] = id;
      while (!stack.empty()) {
        const Vertex v = stack.back();
        stack.pop_back();
        parts[id].push_back(v);
        for (Vertex w : g_.neighbors(v))
          if (label[w] == -1) {
            label[w] = id;
            stack.push_back(w);
          }
      }
    }
    if (parts.size() > 1) {
      const int mine = label[cur_.front()];
      for (auto& part : parts) std::sort(part.begin(), part.end());
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (static_cast<int>(i) == mine) continue;
        if (parts[i].size() == 1)
          os << "; vertex " << parts[i][0] << " is unreachable (no edges)";
        else
          os << "; disconnected components " << set_text(parts[mine]) << " and " << set_text(parts[i]);
        break;
      }
    }
    report_.diagnostics = os.str();
  }

  // Appends the component containing y, walking its cycle forward from y.
  void absorb(Vertex y) {
    const int c = comp_of_[y];
    const auto& cyc = comps_[static_cast<std::size_t>(c)];
    const auto j = static_cast<std::size_t>(std::find(cyc.begin(), cyc.end(), y) - cyc.begin());
    for (std::size_t t = 0; t < cyc.size(); ++t) {
      const Vertex x = cyc[(j + t) % cyc.size()];
      cur_.push_back(x);
      in_cur_[x] = 1;
      comp_of_[x] = -1;
    }
    --remaining_;
  }

  std::optional<Vertex> smallest_outside(Vertex v) const {
    for (Vertex w : g_.neighbors(v))
      if (!in_cur_[w]) return w;
    return std::nullopt;
  }

  void record(int rotations, std::optional<Edge> closing, bool booster, std::string action, int before) {
    report_.rounds.push_back({before, rotations, closing, booster, std::move(action)});
  }

  // Opening the closed block at v: the path runs succ(v) .. v.
  void open_at(Vertex v) {
    const auto it = std::find(cur_.begin(), cur_.end(), v);
    std::rotate(cur_.begin(), it + 1, cur_.end());
    closed_ = false;
  }

  struct PendingClose {
    int rotations = 0;
    Edge edge{};
    bool booster = false;
  };

  // Closed, non-spanning block: open at the smallest vertex with an outside
  // neighbour and absorb that neighbour's component.
  void open_closed(std::optional<PendingClose> pending) {
    const int before = remaining_;
    for (Vertex v : sorted_block()) {
      if (auto y = smallest_outside(v)) {
        open_at(v);
        absorb(*y);
        if (pending)
          record(pending->rotations, pending->edge, pending->booster, "close-open", before);
        else
          record(0, std::nullopt, false, "extend", before);
        return;
      }
    }
    // Only reachable for a starting cycle: a booster has to connect it.
    while (next_booster_ < booster_count()) {
      const Edge e = (*boosters_)[next_booster_++];
      ++report_.boosters_used;
      if (forbidden_[e.u] || forbidden_[e.v] || in_cur_[e.u] == in_cur_[e.v]) continue;
      g_.add_edge(e.u, e.v);
      const Vertex inside = in_cur_[e.u] ? e.u : e.v;
      open_at(inside);
      absorb(e.u + e.v - inside);
      record(0, e, true, "extend", before);
      return;
    }
    fail("no edge leaves the current cycle " + set_text(sorted_block()) + " and boosters are exhausted");
  }

  std::vector<Vertex> sorted_block() const {
    std::vector<Vertex> s = cur_;
    std::sort(s.begin(), s.end());
    return s;
  }

  std::size_t booster_count() const { return boosters_ ? boosters_->size() : 0; }

  void step_path() {
    const int before = remaining_;
    // Direct extension at either end.
    if (auto y = smallest_outside(cur_.back())) {
      absorb(*y);
      record(0, std::nullopt, false, "extend", before);
      return;
    }
    if (auto y = smallest_outside(cur_.front())) {
      std::reverse(cur_.begin(), cur_.end());
      absorb(*y);
      record(0, std::nullopt, false, "extend", before);
      return;
    }
    const bool spanning = static_cast<int>(cur_.size()) == g_.n();
    RotationPath p0(g_, cur_);
    const auto front = endpoint_closure(g_, p0, budget_);
    if (front.extending_endpoint) {
      extend_via(front.paths.at(*front.extending_endpoint), before);
      return;
    }
    // ends[v] = some rotated path ending at v; E' pairs with their paths.
    std::map<Vertex, std::pair<std::vector<Vertex>, int>> ends;
    std::vector<std::pair<Edge, std::pair<std::vector<Vertex>, int>>> eprime;
    {
      std::vector<Vertex> rev(cur_.rbegin(), cur_.rend());
      ends.emplace(cur_.front(), std::make_pair(rev, 0));
    }
    for (Vertex z : front.endpoints) {
      const auto& pz = front.paths.at(z);
      const int rz = pz.rotations_done();
      ends.emplace(z, std::make_pair(pz.vertices(), rz));
      std::vector<Vertex> rev(pz.vertices().rbegin(), pz.vertices().rend());
      const auto back = endpoint_closure(g_, RotationPath(g_, rev), budget_);
      if (back.extending_endpoint) {
        extend_via(back.paths.at(*back.extending_endpoint), before, rz);
        return;
      }
      for (Vertex w : back.endpoints) {
        const auto& pw = back.paths.at(w);
        ends.emplace(w, std::make_pair(pw.vertices(), rz + pw.rotations_done()));
        if (cur_.size() >= 3 && !forbidden_[z] && !forbidden_[w])
          eprime.push_back({Edge::make(z, w), {pw.vertices(), rz + pw.rotations_done()}});
      }
    }
    // Fewest rotations first, then smallest pair.
    std::sort(eprime.begin(), eprime.end(), [](const auto& a, const auto& b) {
      return std::tie(a.second.second, a.first) < std::tie(b.second.second, b.first);
    });
    const auto real_close = std::find_if(eprime.begin(), eprime.end(),
                                         [&](const auto& x) { return g_.has_edge(x.first.u, x.first.v); });
    bool block_exit = false;
    for (Vertex v : cur_)
      if (smallest_outside(v)) block_exit = true;

    if (real_close != eprime.end() && (spanning || block_exit)) {
      close_with(real_close->second.first, real_close->second.second, real_close->first, false, before);
      return;
    }
    auto in_eprime = [&](const Edge& e) {
      return std::find_if(eprime.begin(), eprime.end(), [&](const auto& x) { return x.first == e; });
    };
    while (next_booster_ < booster_count()) {
      const Edge e = (*boosters_)[next_booster_++];
      ++report_.boosters_used;
      if (forbidden_[e.u] || forbidden_[e.v] || g_.has_edge(e.u, e.v)) continue;
      if (spanning || block_exit) {
        if (auto it = in_eprime(e); it != eprime.end()) {
          g_.add_edge(e.u, e.v);
          close_with(it->second.first, it->second.second, e, true, before);
          return;
        }
      }
      if (spanning || in_cur_[e.u] == in_cur_[e.v]) continue;
      const Vertex inside = in_cur_[e.u] ? e.u : e.v;
      const Vertex outside = e.u + e.v - inside;
      if (auto it = ends.find(inside); it != ends.end()) {
        g_.add_edge(e.u, e.v);
        cur_ = it->second.first;
        absorb(outside);
        record(it->second.second, e, true, "extend", before);
        return;
      }
      if (real_close != eprime.end()) {
        // Close on the real edge, then open at the booster.
        g_.add_edge(e.u, e.v);
        cur_ = real_close->second.first;
        open_at(inside);
        absorb(outside);
        record(real_close->second.second, e, true, "close-open", before);
        return;
      }
    }
    if (spanning)
      fail("Hamilton path " + set_text(cur_) + " cannot be closed and boosters are exhausted");
    else
      fail("path on " + std::to_string(cur_.size()) + " vertices is stuck and boosters are exhausted");
  }

  void extend_via(const RotationPath& path, int before, int extra_rotations = 0) {
    cur_ = path.vertices();
    const Vertex y = *smallest_outside(cur_.back());
    absorb(y);
    record(extra_rotations + path.rotations_done(), std::nullopt, false, "extend", before);
  }

  void close_with(std::vector<Vertex> path, int rotations, Edge edge, bool booster, int before) {
    cur_ = std::move(path);
    closed_ = true;
    if (static_cast<int>(cur_.size()) == g_.n()) {
      record(rotations, edge, booster, "close-hamilton", before);
      finish();
      return;
    }
    open_closed(PendingClose{rotations, edge, booster});
  }

  Graph g_;
  std::vector<std::vector<Vertex>> comps_;
  const std::vector<Edge>* boosters_;
  RotationBudget budget_;
  std::vector<int> comp_of_;
  std::vector<char> in_cur_;
  std::vector<char> forbidden_;
  std::vector<Vertex> cur_;
  bool closed_ = false;
  bool done_ = false;
  bool failed_ = false;
  int remaining_ = 0;
  std::size_t next_booster_ = 0;
  ConversionReport report_;
};

}  // namespace

ConversionReport convert_factor_to_hamilton(const Graph& g, const Factor& f, const ExposureStream& boosters,
                                            const RotationBudget& budget) {
  if (f.n() != g.n()) throw PreconditionError("convert: factor and graph sizes differ");
  if (!f.is_almost_two_factor_of(g))
    throw PreconditionError("convert: factor is not an almost 2-factor of the graph (" + std::to_string(f.isolated().size()) +
                            " isolated, budget " + std::to_string(isolated_budget(g.n())) + ")");
  if (boosters.base.n() != g.n() || boosters.base.edges() != g.edges())
    throw PreconditionError("convert: booster stream base differs from the graph");
  if (budget.max_rotations_per_merge < 1 || budget.target_endpoint_count < 1)
    throw PreconditionError("convert: budgets must be positive");

  std::vector<std::vector<Vertex>> comps = f.cycles();
  for (Vertex v : f.isolated()) comps.push_back({v});
  Engine engine(g, std::move(comps), &boosters.boosters, &boosters.forbidden, budget);
  ConversionReport rep = engine.run();
  if (rep.hamilton) {
    rep.hamming = hamming_distance(f.edges(), cycle_edges(*rep.hamilton));
    const std::size_t bound = 2 * (4 + 12 * static_cast<std::size_t>(budget.max_rotations_per_merge)) *
                              (static_cast<std::size_t>(rep.initial_components) + f.isolated().size());
    if (rep.hamming > bound) {
      std::ostringstream state;
      state << "n=" << g.n() << " hamming=" << rep.hamming << " bound=" << bound
            << " components=" << rep.initial_components << " isolated=" << f.isolated().size();
      throw AssertionFailure("conversion exceeded the per-merge Hamming accounting", state.str());
    }
  }
  return rep;
}

std::optional<std::vector<Vertex>> find_hamilton_cycle_exact(const Graph& g) {
  const int n = g.n();
  if (n < 3) return std::nullopt;
  if (n > kExactSearchMaxN)
    throw CapacityError("find_hamilton_cycle_exact: n <= " + std::to_string(kExactSearchMaxN));
  // Paths start at vertex 0 and cover `mask` of vertices 1..n-1 (bit i-1);
  // reach[mask] holds the possible last vertices in the same encoding.
  const int m = n - 1;
  const std::uint32_t full = (std::uint32_t{1} << m) - 1;
  std::vector<std::uint32_t> adj(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) adj[i] = static_cast<std::uint32_t>(g.row_mask(i + 1) >> 1);
  const auto zero_nb = static_cast<std::uint32_t>(g.row_mask(0) >> 1);
  std::vector<std::uint32_t> reach(std::size_t{1} << m, 0);
  for (int i = 0; i < m; ++i)
    if ((zero_nb >> i) & 1u) reach[std::size_t{1} << i] = std::uint32_t{1} << i;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    if (std::popcount(mask) < 2) continue;
    std::uint32_t r = 0;
    for (std::uint32_t rest = mask; rest; rest &= rest - 1) {
      const int v = std::countr_zero(rest);
      if (reach[mask ^ (std::uint32_t{1} << v)] & adj[v]) r |= std::uint32_t{1} << v;
    }
    reach[mask] = r;
  }
  const std::uint32_t last = reach[full] & zero_nb;
  if (!last) return std::nullopt;
  std::vector<Vertex> cycle{0};
  std::vector<Vertex> tail;
  std::uint32_t mask = full;
  int v = std::countr_zero(last);
  while (true) {
    tail.push_back(v + 1);
    const std::uint32_t prev = mask ^ (std::uint32_t{1} << v);
    if (!prev) break;
    v = std::countr_zero(reach[prev] & adj[v]);
    mask = prev;
  }
  cycle.insert(cycle.end(), tail.rbegin(), tail.rend());
  return canonical_cycle(cycle);
}

HamiltonSearch find_hamilton_rotation(const Graph& g, const RotationBudget& budget, Seed seed, bool exact_fallback) {
  HamiltonSearch out;
  const int n = g.n();
  if (n < 3) {
    out.proven_absent = true;
    return out;
  }
  if (degrees(g).min_degree < 2 || !is_connected(g)) {
    out.proven_absent = true;
    return out;
  }
  for (int attempt = 0; attempt < kRotationAttempts; ++attempt) {
    std::vector<Vertex> label(static_cast<std::size_t>(n));
    std::iota(label.begin(), label.end(), 0);
    if (attempt > 0) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
      shuffle(label, rng);
    }
    Graph h(n);
    for (const Edge& e : g.edges()) h.add_edge(label[e.u], label[e.v]);
    std::vector<std::vector<Vertex>> singles;
    for (Vertex v = 0; v < n; ++v) singles.push_back({v});
    Engine engine(h, std::move(singles), nullptr, nullptr, budget);
    const auto rep = engine.run();
    if (!rep.hamilton) continue;
    std::vector<Vertex> back(static_cast<std::size_t>(n));
    for (Vertex v = 0; v < n; ++v) back[label[v]] = v;
    std::vector<Vertex> cycle;
    for (Vertex v : *rep.hamilton) cycle.push_back(back[v]);
    out.cycle = canonical_cycle(cycle);
    out.route = SearchRoute::rotation;
    return out;
  }
  if (exact_fallback && n <= kExactSearchMaxN) {
    out.cycle = find_hamilton_cycle_exact(g);
    out.route = out.cycle ? SearchRoute::exhaustive : SearchRoute::none;
    out.proven_absent = !out.cycle;
  }
  return out;
}

}  // namespace hamlab
