#include "hamlab/structure.hpp"

#include "hamlab/error.hpp"
#include "hamlab/kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <fstream>
#include <istream>
#include <limits>
#include <queue>
#include <sstream>

namespace hamlab {

ConstantsProfile ConstantsProfile::parse(std::istream& in) {
  ConstantsProfile c;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("constants line " + std::to_string(line_no) + ": expected key=value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string text = trim(line.substr(eq + 1));
    double value = 0.0;
    std::istringstream vs(text);
    std::string rest;
    if (!(vs >> value) || (vs >> rest) || !(value > 0.0))
      throw ParseError("constants line " + std::to_string(line_no) + ": " + key + " needs a positive number");
    if (key == "low_degree_divisor") c.low_degree_divisor = value;
    else if (key == "expander_size_exponent") c.expander_size_exponent = value;
    else if (key == "short_path_factor") c.short_path_factor = value;
    else if (key == "expansion_divisor") c.expansion_divisor = value;
    else if (key == "edge_density_coeff") c.edge_density_coeff = value;
    else if (key == "set_size_cap") c.set_size_cap = value;
    else if (key == "rotation_divisor") c.rotation_divisor = value;
    else if (key == "endpoint_fraction") c.endpoint_fraction = value;
    else throw ParseError("constants line " + std::to_string(line_no) + ": unknown key " + key);
  }
  return c;
}

ConstantsProfile ConstantsProfile::from_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path);
  return parse(f);
}

std::string to_string(ExpanderProperty p) {
  switch (p) {
    case ExpanderProperty::small_low_degree_set: return "small_low_degree_set";
    case ExpanderProperty::no_short_d_paths: return "no_short_d_paths";
    case ExpanderProperty::small_set_expansion: return "small_set_expansion";
  }
  return "unknown";
}

std::string to_string(CheckMode m) { return m == CheckMode::exact ? "exact" : "sampled"; }

VertexSet low_degree_set(const Graph& g, double threshold) {
  VertexSet d;
  for (Vertex v = 0; v < g.n(); ++v)
    if (g.degree(v) < threshold) d.push_back(v);
  return d;
}

int short_path_bound(int n, const ConstantsProfile& consts) {
  if (n < 3) return std::max(0, n - 1);
  const double ln_n = std::log(static_cast<double>(n));
  const double lnln_n = std::log(ln_n);
  if (lnln_n <= 0.0) return n - 1;
  return static_cast<int>(std::floor(consts.short_path_factor * ln_n / lnln_n));
}

namespace {

int max_small_set(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("expander certification needs p in (0, 1]");
  return static_cast<int>(std::floor(1.0 / p + 1e-12));
}

// Short D-paths: BFS from each D vertex up to depth `limit`. Reports paths to
// other D vertices (each unordered pair once) and the shortest cycle through
// the source when it is short enough.
void find_short_d_paths(const Graph& g, const VertexSet& d_set, int limit, int max_witnesses,
                        std::vector<ExpanderViolation>& out) {
  if (limit < 1) return;
  std::vector<char> in_d(static_cast<std::size_t>(g.n()), 0);
  for (Vertex v : d_set) in_d[v] = 1;
  int recorded = 0;
  const auto un = static_cast<std::size_t>(g.n());
  std::vector<int> dist(un), parent(un), branch(un);
  for (Vertex src : d_set) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[src] = 0;
    parent[src] = -1;
    branch[src] = -1;
    std::vector<Vertex> order{src};
    for (std::size_t head = 0; head < order.size(); ++head) {
      const Vertex v = order[head];
      if (dist[v] >= limit) continue;
      for (Vertex w : g.neighbors(v)) {
        if (dist[w] != -1) continue;
        dist[w] = dist[v] + 1;
        parent[w] = v;
        branch[w] = v == src ? w : branch[v];
        order.push_back(w);
      }
    }
    auto trace = [&](Vertex v) {
      std::vector<Vertex> p;
      for (Vertex x = v; x != -1; x = parent[x]) p.push_back(x);
      std::reverse(p.begin(), p.end());
      return p;
    };
    for (Vertex v : order)
      if (v > src && in_d[v]) {
        if (recorded++ >= max_witnesses) return;
        out.push_back({ExpanderProperty::no_short_d_paths, trace(v)});
      }
    // Shortest cycle through src: a non-tree edge joining two different
    // branches of the BFS tree.
    int best = std::numeric_limits<int>::max();
    Vertex bx = -1, by = -1;
    for (Vertex x : order) {
      if (x == src) continue;
      for (Vertex y : g.neighbors(x)) {
        if (y == src || dist[y] == -1 || x > y || branch[x] == branch[y]) continue;
        const int len = dist[x] + dist[y] + 1;
        if (len < best) {
          best = len;
          bx = x;
          by = y;
        }
      }
    }
    if (bx != -1 && best <= limit) {
      if (recorded++ >= max_witnesses) return;
      auto a = trace(bx);
      auto b = trace(by);
      std::reverse(b.begin(), b.end());
      a.insert(a.end(), b.begin(), b.end());  // src ... bx by ... src
      out.push_back({ExpanderProperty::no_short_d_paths, std::move(a)});
    }
  }
}

bool expansion_fails(const Graph& g, const VertexSet& s, double np, double divisor) {
  return static_cast<double>(external_neighborhood(g, s).size()) < np / divisor * static_cast<double>(s.size());
}

VertexSet mask_to_set(std::uint64_t mask) {
  VertexSet out;
  while (mask) {
    out.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return out;
}

std::uint64_t next_combination(std::uint64_t x) {
  const std::uint64_t c = x & (0 - x);
  const std::uint64_t r = x + c;
  return (((r ^ x) >> 2) / c) | r;
}

}  // namespace

ExpanderCertificate certify_p_expander(const Graph& g, double p, const ConstantsProfile& consts, CheckMode mode,
                                       Seed seed, int max_witnesses) {
  const int n = g.n();
  if (mode == CheckMode::exact && n > kExpanderExactMaxN)
    throw CapacityError("certify_p_expander: exact mode supports n <= " + std::to_string(kExpanderExactMaxN));
  const int max_size = max_small_set(p);
  ExpanderCertificate cert;
  cert.mode = mode;
  const double np = n * p;
  cert.d_set = low_degree_set(g, np / consts.low_degree_divisor);
  cert.max_path_length = short_path_bound(n, consts);
  cert.max_set_size = max_size;

  if (static_cast<double>(cert.d_set.size()) > std::pow(static_cast<double>(n), consts.expander_size_exponent))
    cert.violations.push_back({ExpanderProperty::small_low_degree_set, cert.d_set});

  find_short_d_paths(g, cert.d_set, cert.max_path_length, max_witnesses, cert.violations);

  std::vector<char> in_d(static_cast<std::size_t>(n), 0);
  for (Vertex v : cert.d_set) in_d[v] = 1;
  VertexSet outside;
  for (Vertex v = 0; v < n; ++v)
    if (!in_d[v]) outside.push_back(v);
  const int top = std::min<int>(max_size, static_cast<int>(outside.size()));
  const double need = np / consts.expansion_divisor;
  int recorded = 0;

  if (mode == CheckMode::exact) {
    const std::uint64_t all = n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    const auto m = static_cast<int>(outside.size());
    // Subsets of `outside` by size, as index combinations mapped to vertices.
    for (int size = 1; size <= top && recorded < max_witnesses; ++size) {
      const std::uint64_t limit = std::uint64_t{1} << m;
      for (std::uint64_t comb = (std::uint64_t{1} << size) - 1; comb < limit; comb = next_combination(comb)) {
        std::uint64_t s = 0, nb = 0;
        for (std::uint64_t c = comb; c; c &= c - 1) {
          const Vertex v = outside[std::countr_zero(c)];
          s |= std::uint64_t{1} << v;
          nb |= g.row_mask(v);
        }
        nb &= all & ~s;
        if (static_cast<double>(std::popcount(nb)) < need * size) {
          cert.violations.push_back({ExpanderProperty::small_set_expansion, mask_to_set(s)});
          if (++recorded >= max_witnesses) break;
        }
        if (size == m) break;
      }
    }
  } else {
    Rng rng(seed);
    std::vector<Vertex> pool = outside;
    for (int size = 1; size <= top && recorded < max_witnesses; ++size) {
      for (int draw = 0; draw < kSampledSetsPerSize; ++draw) {
        for (int i = 0; i < size; ++i) {
          const auto j = static_cast<std::size_t>(i) + static_cast<std::size_t>(rng.below(pool.size() - static_cast<std::size_t>(i)));
          std::swap(pool[i], pool[j]);
        }
        VertexSet s(pool.begin(), pool.begin() + size);
        std::sort(s.begin(), s.end());
        if (expansion_fails(g, s, np, consts.expansion_divisor)) {
          cert.violations.push_back({ExpanderProperty::small_set_expansion, std::move(s)});
          if (++recorded >= max_witnesses) break;
        }
      }
    }
  }
  cert.is_expander = cert.violations.empty();
  return cert;
}

bool violation_replays(const Graph& g, double p, const ConstantsProfile& consts, const VertexSet& d_set,
                       const ExpanderViolation& v) {
  const int n = g.n();
  const double np = n * p;
  std::vector<char> in_d(static_cast<std::size_t>(n), 0);
  for (Vertex x : d_set) in_d[x] = 1;
  const auto& w = v.witness;
  switch (v.property) {
    case ExpanderProperty::small_low_degree_set:
      return w == low_degree_set(g, np / consts.low_degree_divisor) &&
             static_cast<double>(w.size()) > std::pow(static_cast<double>(n), consts.expander_size_exponent);
    case ExpanderProperty::no_short_d_paths: {
      if (w.size() < 2) return false;
      const int length = static_cast<int>(w.size()) - 1;
      if (length > short_path_bound(n, consts)) return false;
      if (!in_d[w.front()] || !in_d[w.back()]) return false;
      const bool closed = w.front() == w.back();
      if (closed && length < 3) return false;
      std::vector<char> seen(static_cast<std::size_t>(n), 0);
      for (std::size_t i = 0; i + (closed ? 1 : 0) < w.size(); ++i) {
        if (w[i] < 0 || w[i] >= n || seen[w[i]]) return false;
        seen[w[i]] = 1;
      }
      for (std::size_t i = 0; i + 1 < w.size(); ++i)
        if (!g.has_edge(w[i], w[i + 1])) return false;
      return true;
    }
    case ExpanderProperty::small_set_expansion: {
      if (w.empty() || static_cast<int>(w.size()) > max_small_set(p)) return false;
      for (Vertex x : w)
        if (x < 0 || x >= n || in_d[x]) return false;
      return expansion_fails(g, w, np, consts.expansion_divisor);
    }
  }
  return false;
}

EdgeDistributionReport edge_distribution_check(const OrientedGraph& d, double r, const ConstantsProfile& consts,
                                               CheckMode mode, Seed seed, std::size_t max_recorded) {
  const int n = d.n();
  EdgeDistributionReport rep;
  rep.mode = mode;
  const int cap = static_cast<int>(std::floor(consts.set_size_cap * n + 1e-9));
  if (cap < 1) return rep;
  std::vector<double> limit(static_cast<std::size_t>((cap + 1) * (cap + 1)));
  for (int a = 0; a <= cap; ++a)
    for (int b = 0; b <= cap; ++b)
      limit[static_cast<std::size_t>(a * (cap + 1) + b)] = consts.edge_density_coeff * r * std::sqrt(double(a) * b);
  auto record = [&](std::uint64_t amask, std::uint64_t bmask, std::size_t arcs, double lim) {
    ++rep.total_violations;
    if (rep.violations.size() < max_recorded) rep.violations.push_back({mask_to_set(amask), mask_to_set(bmask), arcs, lim});
  };

  if (mode == CheckMode::exact) {
    if (n > kEdgeDistributionExactMaxN)
      throw CapacityError("edge_distribution_check: exact mode supports n <= " +
                          std::to_string(kEdgeDistributionExactMaxN));
    const auto& k = kernels::active();
    std::vector<std::uint64_t> in_rows(static_cast<std::size_t>(n));
    for (Vertex v = 0; v < n; ++v) in_rows[v] = d.in_mask(v);
    std::vector<std::uint32_t> from_a(static_cast<std::size_t>(n));
    const std::uint64_t subsets = std::uint64_t{1} << n;
    for (std::uint64_t amask = 1; amask < subsets; ++amask) {
      const int asize = std::popcount(amask);
      if (asize > cap) continue;
      // from_a[v] = arcs from A into v; e(A,B) is their sum over B.
      k.popcount_and(in_rows.data(), amask, from_a.data(), static_cast<std::size_t>(n));
      std::uint64_t bmask = 0;
      std::size_t arcs = 0;
      int bsize = 0;
      for (std::uint64_t step = 1; step < subsets; ++step) {
        const int v = std::countr_zero(step);
        bmask ^= std::uint64_t{1} << v;
        if ((bmask >> v) & 1u) {
          arcs += from_a[v];
          ++bsize;
        } else {
          arcs -= from_a[v];
          --bsize;
        }
        if (bsize > cap) continue;
        ++rep.pairs_checked;
        const double lim = limit[static_cast<std::size_t>(asize * (cap + 1) + bsize)];
        if (static_cast<double>(arcs) > lim) record(amask, bmask, arcs, lim);
      }
    }
    return rep;
  }

  Rng rng(seed);
  std::vector<Vertex> pool(static_cast<std::size_t>(n));
  for (Vertex v = 0; v < n; ++v) pool[v] = v;
  auto draw = [&](int size) {
    for (int i = 0; i < size; ++i) {
      const auto j = static_cast<std::size_t>(i) + static_cast<std::size_t>(rng.below(pool.size() - static_cast<std::size_t>(i)));
      std::swap(pool[i], pool[j]);
    }
    VertexSet s(pool.begin(), pool.begin() + size);
    std::sort(s.begin(), s.end());
    return s;
  };
  for (int t = 0; t < kSampledSetsPerSize; ++t) {
    const int asize = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(cap)));
    const int bsize = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(cap)));
    VertexSet a = draw(asize);
    VertexSet b = draw(bsize);
    std::vector<char> in_b(static_cast<std::size_t>(n), 0);
    for (Vertex v : b) in_b[v] = 1;
    std::size_t arcs = 0;
    for (Vertex u : a)
      for (Vertex v : d.out_neighbors(u)) arcs += in_b[v];
    ++rep.pairs_checked;
    const double lim = limit[static_cast<std::size_t>(asize * (cap + 1) + bsize)];
    if (static_cast<double>(arcs) > lim) {
      ++rep.total_violations;
      if (rep.violations.size() < max_recorded) rep.violations.push_back({std::move(a), std::move(b), arcs, lim});
    }
  }
  return rep;
}

VertexSet degree_window_core(const OrientedGraph& d, double low, double high) {
  if (!(low < high)) throw PreconditionError("degree_window_core: need low < high");
  const int n = d.n();
  std::vector<char> alive(static_cast<std::size_t>(n), 1);
  std::vector<int> indeg(static_cast<std::size_t>(n)), outdeg(static_cast<std::size_t>(n));
  for (Vertex v = 0; v < n; ++v) {
    indeg[v] = d.in_degree(v);
    outdeg[v] = d.out_degree(v);
  }
  auto outside = [&](Vertex v) {
    return indeg[v] < low || indeg[v] >= high || outdeg[v] < low || outdeg[v] >= high;
  };
  std::deque<Vertex> queue;
  std::vector<char> queued(static_cast<std::size_t>(n), 0);
  for (Vertex v = 0; v < n; ++v)
    if (outside(v)) {
      queue.push_back(v);
      queued[v] = 1;
    }
  while (!queue.empty()) {
    const Vertex v = queue.front();
    queue.pop_front();
    alive[v] = 0;
    for (Vertex w : d.out_neighbors(v))
      if (alive[w]) --indeg[w];
    for (Vertex u = 0; u < n; ++u)
      if (alive[u] && d.has_arc(u, v)) --outdeg[u];
    for (Vertex u = 0; u < n; ++u)
      if (alive[u] && !queued[u] && outside(u)) {
        queue.push_back(u);
        queued[u] = 1;
      }
  }
  VertexSet core;
  for (Vertex v = 0; v < n; ++v)
    if (alive[v]) core.push_back(v);
  return core;
}

BipartiteGraph bipartite_double_cover(const OrientedGraph& d) {
  const int n = d.n();
  BipartiteGraph b{n, n, Graph(2 * n)};
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v : d.out_neighbors(u)) b.graph.add_edge(b.x(u), b.y(v));
  return b;
}

namespace {

// Dinic max-flow. Arcs are scanned in insertion order, which callers make
// increasing by vertex id, so the resulting flow is a function of the input.
class Dinic {
 public:
  explicit Dinic(int n) : head_(static_cast<std::size_t>(n)), level_(static_cast<std::size_t>(n)), it_(static_cast<std::size_t>(n)) {}

  int add(int from, int to, int cap) {
    arcs_.push_back({to, cap});
    head_[from].push_back(static_cast<int>(arcs_.size()) - 1);
    arcs_.push_back({from, 0});
    head_[to].push_back(static_cast<int>(arcs_.size()) - 1);
    return static_cast<int>(arcs_.size()) - 2;
  }

  long long run(int s, int t) {
    long long flow = 0;
    while (bfs(s, t)) {
      std::fill(it_.begin(), it_.end(), 0);
      while (int pushed = dfs(s, t, std::numeric_limits<int>::max())) flow += pushed;
    }
    return flow;
  }

  int flow_on(int arc) const { return arcs_[static_cast<std::size_t>(arc) ^ 1].cap; }
  /// Vertices reachable from s in the residual graph (after run()).
  std::vector<char> source_side(int s) const {
    std::vector<char> seen(head_.size(), 0);
    std::vector<int> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int a : head_[v])
        if (arcs_[a].cap > 0 && !seen[arcs_[a].to]) {
          seen[arcs_[a].to] = 1;
          stack.push_back(arcs_[a].to);
        }
    }
    return seen;
  }

 private:
  struct Arc {
    int to;
    int cap;
  };

  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int a : head_[v])
        if (arcs_[a].cap > 0 && level_[arcs_[a].to] < 0) {
          level_[arcs_[a].to] = level_[v] + 1;
          q.push(arcs_[a].to);
        }
    }
    return level_[t] >= 0;
  }

  int dfs(int v, int t, int limit) {
    if (v == t) return limit;
    for (auto& i = it_[v]; i < head_[v].size(); ++i) {
      Arc& a = arcs_[head_[v][i]];
      if (a.cap <= 0 || level_[a.to] != level_[v] + 1) continue;
      if (int got = dfs(a.to, t, std::min(limit, a.cap))) {
        a.cap -= got;
        arcs_[static_cast<std::size_t>(head_[v][i]) ^ 1].cap += got;
        return got;
      }
    }
    return 0;
  }

  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> head_;
  std::vector<int> level_;
  std::vector<std::size_t> it_;
};

struct RegularFlow {
  Dinic net;
  std::vector<std::pair<Edge, int>> edge_arcs;  // (x, y) graph edge -> arc id
  long long value = 0;
  int source = 0;
};

RegularFlow regular_flow(const BipartiteGraph& b, int d_reg) {
  const int l = b.left, rgt = b.right;
  RegularFlow f{Dinic(l + rgt + 2), {}, 0, l + rgt};
  const int s = l + rgt, t = l + rgt + 1;
  for (int x = 0; x < l; ++x) f.net.add(s, x, d_reg);
  for (int x = 0; x < l; ++x)
    for (Vertex w : b.graph.neighbors(b.x(x)))
      if (w >= l) f.edge_arcs.push_back({Edge{x, w}, f.net.add(x, w, 1)});
  for (int y = 0; y < rgt; ++y) f.net.add(l + y, t, d_reg);
  f.value = f.net.run(s, t);
  return f;
}

void check_balanced(const BipartiteGraph& b, int d_reg) {
  if (b.left != b.right)
    throw PreconditionError("ore_ryser_check: part sizes differ (" + std::to_string(b.left) + " vs " +
                            std::to_string(b.right) + ")");
  if (b.graph.n() != b.left + b.right) throw PreconditionError("ore_ryser_check: graph size mismatch");
  if (d_reg < 0) throw PreconditionError("ore_ryser_check: negative degree");
}

}  // namespace

OreRyserResult ore_ryser_check(const BipartiteGraph& b, int d_reg, OreRyserMethod method) {
  check_balanced(b, d_reg);
  const int n = b.left;
  OreRyserResult res;
  if (method == OreRyserMethod::subsets) {
    if (n > kOreRyserSubsetMaxPart)
      throw CapacityError("ore_ryser_check: subset mode supports parts up to " + std::to_string(kOreRyserSubsetMaxPart));
    std::vector<std::uint64_t> xrows(static_cast<std::size_t>(n), 0);
    for (int x = 0; x < n; ++x)
      for (Vertex w : b.graph.neighbors(x))
        if (w >= n) xrows[x] |= std::uint64_t{1} << (w - n);
    const auto& k = kernels::active();
    // Report the Y' with the largest deficit (first in mask order on ties),
    // which is what the min-cut witness of the flow method also yields.
    std::vector<std::uint32_t> hits(static_cast<std::size_t>(n));
    long long worst = 0;
    std::uint64_t worst_mask = 0;
    for (std::uint64_t ymask = 1; ymask < (std::uint64_t{1} << n); ++ymask) {
      k.popcount_and(xrows.data(), ymask, hits.data(), static_cast<std::size_t>(n));
      long long rhs = 0;
      for (auto h : hits) rhs += std::min<long long>(d_reg, h);
      const long long deficit = static_cast<long long>(d_reg) * std::popcount(ymask) - rhs;
      if (deficit > worst) {
        worst = deficit;
        worst_mask = ymask;
      }
    }
    res.holds = worst == 0;
    for (int j = 0; j < n; ++j)
      if ((worst_mask >> j) & 1u) res.violating_y.push_back(j);
    return res;
  }
  auto f = regular_flow(b, d_reg);
  if (f.value == static_cast<long long>(d_reg) * n) {
    res.holds = true;
    return res;
  }
  // Y' = Y vertices on the sink side of the minimum cut.
  const auto side = f.net.source_side(f.source);
  for (int j = 0; j < n; ++j)
    if (!side[n + j]) res.violating_y.push_back(j);
  return res;
}

BipartiteGraph extract_regular_subgraph(const BipartiteGraph& b, int d_reg) {
  check_balanced(b, d_reg);
  auto f = regular_flow(b, d_reg);
  if (f.value != static_cast<long long>(d_reg) * b.left) {
    const auto witness = ore_ryser_check(b, d_reg, OreRyserMethod::flow).violating_y;
    std::string w;
    for (int j : witness) w += (w.empty() ? "" : ",") + std::to_string(j);
    throw PreconditionError("extract_regular_subgraph: no spanning " + std::to_string(d_reg) +
                            "-regular subgraph; violating Y' = {" + w + "}");
  }
  BipartiteGraph out{b.left, b.right, Graph(b.graph.n())};
  for (const auto& [e, arc] : f.edge_arcs)
    if (f.net.flow_on(arc) > 0) out.graph.add_edge(e.u, e.v);
  return out;
}

}  // namespace hamlab
