#include "hamlab/graph.hpp"

#include "hamlab/error.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace hamlab {

BitRows::BitRows(std::size_t rows, std::size_t bits)
    : words_(std::max<std::size_t>(1, (bits + 63) / 64)), data_(rows * words_, 0) {}

std::size_t BitRows::count(std::size_t r) const {
  std::size_t c = 0;
  for (auto w : row(r)) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

namespace {

void check_vertex(int n, Vertex v) {
  if (v < 0 || v >= n) throw PreconditionError("vertex " + std::to_string(v) + " out of range for n=" + std::to_string(n));
}

VertexSet bits_to_set(std::span<const std::uint64_t> row, int n) {
  VertexSet out;
  for (std::size_t w = 0; w < row.size(); ++w) {
    std::uint64_t bits = row[w];
    while (bits) {
      const auto v = static_cast<Vertex>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
      if (v < n) out.push_back(v);
      bits &= bits - 1;
    }
  }
  return out;
}

}  // namespace

Graph::Graph(int n) : n_(n), rows_(static_cast<std::size_t>(std::max(n, 0)), static_cast<std::size_t>(std::max(n, 0))) {
  if (n < 0) throw PreconditionError("Graph: negative vertex count");
}

Graph Graph::from_edges(int n, std::span<const Edge> edges) {
  Graph g(n);
  for (const auto& e : edges) g.add_edge(e.u, e.v);
  return g;
}

Graph Graph::complete(int n) {
  Graph g(n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

Graph Graph::cycle(int n) {
  Graph g(n);
  if (n >= 3)
    for (Vertex v = 0; v < n; ++v) g.add_edge(v, (v + 1) % n);
  return g;
}

Graph Graph::path(int n) {
  Graph g(n);
  for (Vertex v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
  return g;
}

bool Graph::add_edge(Vertex a, Vertex b) {
  check_vertex(n_, a);
  check_vertex(n_, b);
  if (a == b) throw PreconditionError("Graph: self-loop at " + std::to_string(a));
  if (rows_.test(a, b)) return false;
  rows_.set(a, b);
  rows_.set(b, a);
  ++m_;
  return true;
}

bool Graph::remove_edge(Vertex a, Vertex b) {
  check_vertex(n_, a);
  check_vertex(n_, b);
  if (a == b || !rows_.test(a, b)) return false;
  rows_.reset(a, b);
  rows_.reset(b, a);
  --m_;
  return true;
}

VertexSet Graph::neighbors(Vertex v) const { return bits_to_set(rows_.row(v), n_); }

EdgeSet Graph::edges() const {
  EdgeSet out;
  out.reserve(m_);
  for (Vertex u = 0; u < n_; ++u)
    for (Vertex v : neighbors(u))
      if (u < v) out.push_back({u, v});
  return out;
}

Graph Graph::induced(const VertexSet& keep) const {
  std::vector<int> index(static_cast<std::size_t>(n_), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) index[keep[i]] = static_cast<int>(i);
  Graph h(static_cast<int>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (Vertex w : neighbors(keep[i]))
      if (index[w] > static_cast<int>(i)) h.add_edge(static_cast<Vertex>(i), index[w]);
  return h;
}

OrientedGraph::OrientedGraph(int n)
    : n_(n),
      out_(static_cast<std::size_t>(std::max(n, 0)), static_cast<std::size_t>(std::max(n, 0))),
      in_(static_cast<std::size_t>(std::max(n, 0)), static_cast<std::size_t>(std::max(n, 0))) {
  if (n < 0) throw PreconditionError("OrientedGraph: negative vertex count");
}

bool OrientedGraph::add_arc(Vertex from, Vertex to) {
  check_vertex(n_, from);
  check_vertex(n_, to);
  if (from == to) throw PreconditionError("OrientedGraph: loop at " + std::to_string(from));
  if (out_.test(from, to)) return false;
  out_.set(from, to);
  in_.set(to, from);
  ++m_;
  return true;
}

bool OrientedGraph::remove_arc(Vertex from, Vertex to) {
  check_vertex(n_, from);
  check_vertex(n_, to);
  if (from == to || !out_.test(from, to)) return false;
  out_.reset(from, to);
  in_.reset(to, from);
  --m_;
  return true;
}

VertexSet OrientedGraph::out_neighbors(Vertex v) const { return bits_to_set(out_.row(v), n_); }

bool OrientedGraph::is_orientation() const {
  for (Vertex u = 0; u < n_; ++u)
    for (Vertex v : out_neighbors(u))
      if (has_arc(v, u)) return false;
  return true;
}

OrientedGraph OrientedGraph::induced(const VertexSet& keep) const {
  std::vector<int> index(static_cast<std::size_t>(n_), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) index[keep[i]] = static_cast<int>(i);
  OrientedGraph h(static_cast<int>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (Vertex w : out_neighbors(keep[i]))
      if (index[w] >= 0) h.add_arc(static_cast<Vertex>(i), index[w]);
  return h;
}

std::vector<std::int64_t> OrientedGraph::adjacency() const {
  const auto n = static_cast<std::size_t>(n_);
  std::vector<std::int64_t> a(n * n, 0);
  for (Vertex u = 0; u < n_; ++u)
    for (Vertex v : out_neighbors(u)) a[static_cast<std::size_t>(u) * n + v] = 1;
  return a;
}

DegreeSummary degrees(const Graph& g) {
  DegreeSummary s;
  s.per_vertex.resize(static_cast<std::size_t>(g.n()));
  for (Vertex v = 0; v < g.n(); ++v) s.per_vertex[v] = g.degree(v);
  if (!s.per_vertex.empty()) {
    auto [lo, hi] = std::minmax_element(s.per_vertex.begin(), s.per_vertex.end());
    s.min_degree = *lo;
    s.max_degree = *hi;
  }
  return s;
}

VertexSet external_neighborhood(const Graph& g, const VertexSet& s) {
  std::vector<char> in_s(static_cast<std::size_t>(g.n()), 0), hit(static_cast<std::size_t>(g.n()), 0);
  for (Vertex v : s) {
    check_vertex(g.n(), v);
    in_s[v] = 1;
  }
  for (Vertex v : s)
    for (Vertex w : g.neighbors(v)) hit[w] = 1;
  VertexSet out;
  for (Vertex v = 0; v < g.n(); ++v)
    if (hit[v] && !in_s[v]) out.push_back(v);
  return out;
}

std::size_t hamming_distance(const EdgeSet& a, const EdgeSet& b) {
  EdgeSet diff;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
  return diff.size();
}

bool is_hamilton_cycle(const Graph& g, std::span<const Vertex> cycle) {
  const int n = g.n();
  if (n < 3 || static_cast<int>(cycle.size()) != n) return false;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (Vertex v : cycle) {
    if (v < 0 || v >= n || seen[v]) return false;
    seen[v] = 1;
  }
  for (std::size_t i = 0; i < cycle.size(); ++i)
    if (!g.has_edge(cycle[i], cycle[(i + 1) % cycle.size()])) return false;
  return true;
}

std::vector<Vertex> canonical_cycle(std::span<const Vertex> cycle) {
  std::vector<Vertex> c(cycle.begin(), cycle.end());
  if (c.size() < 3) return c;
  std::rotate(c.begin(), std::min_element(c.begin(), c.end()), c.end());
  if (c.back() < c[1]) std::reverse(c.begin() + 1, c.end());
  return c;
}

EdgeSet cycle_edges(std::span<const Vertex> cycle) {
  EdgeSet out;
  if (cycle.size() < 3) return out;
  for (std::size_t i = 0; i < cycle.size(); ++i) out.push_back(Edge::make(cycle[i], cycle[(i + 1) % cycle.size()]));
  std::sort(out.begin(), out.end());
  return out;
}

Graph underlying(const OrientedGraph& d) {
  Graph g(d.n());
  for (Vertex u = 0; u < d.n(); ++u)
    for (Vertex v : d.out_neighbors(u)) g.add_edge(u, v);
  return g;
}

bool is_connected(const Graph& g) {
  if (g.n() <= 1) return true;
  std::vector<char> seen(static_cast<std::size_t>(g.n()), 0);
  std::vector<Vertex> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (Vertex w : g.neighbors(v))
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
  }
  return reached == g.n();
}

namespace {

std::vector<Edge> parse_edges(std::istream& in, int& n_out, bool require_sorted_pairs) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  };
  auto fail = [&](const std::string& msg) -> ParseError {
    return ParseError("edge list line " + std::to_string(line_no) + ": " + msg);
  };
  if (!next_line()) throw ParseError("edge list: missing header");
  long long n = -1, m = -1;
  {
    std::istringstream hs(line);
    std::string extra;
    if (!(hs >> n >> m) || (hs >> extra)) throw fail("expected header \"n m\"");
  }
  if (n < 0 || m < 0) throw fail("negative header value");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  std::vector<Edge> seen;
  for (long long i = 0; i < m; ++i) {
    if (!next_line()) throw ParseError("edge list: expected " + std::to_string(m) + " edges, got " + std::to_string(i));
    std::istringstream ls(line);
    long long u = 0, v = 0;
    std::string extra;
    if (!(ls >> u >> v) || (ls >> extra)) throw fail("expected \"u v\"");
    if (u < 0 || v < 0 || u >= n || v >= n) throw fail("vertex id out of range");
    if (u == v) throw fail("self-loop");
    if (require_sorted_pairs && u > v) throw fail("expected u < v");
    edges.push_back(Edge::make(static_cast<Vertex>(u), static_cast<Vertex>(v)));
  }
  if (next_line()) throw fail("trailing content after " + std::to_string(m) + " edges");
  seen = edges;
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) throw ParseError("edge list: duplicate edge");
  n_out = static_cast<int>(n);
  return edges;
}

}  // namespace

Graph read_edge_list(std::istream& in) {
  int n = 0;
  auto edges = parse_edges(in, n, true);
  return Graph::from_edges(n, edges);
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path);
  return read_edge_list(f);
}

std::vector<Edge> read_edge_sequence(std::istream& in, int& n_out) { return parse_edges(in, n_out, true); }

void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.n() << ' ' << g.edge_count() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

void write_edge_list_file(const std::string& path, const Graph& g) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  write_edge_list(f, g);
  if (!f) throw IoError("write failed: " + path);
}

}  // namespace hamlab
