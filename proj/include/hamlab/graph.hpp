#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace hamlab {

using Vertex = int;
/// Sorted, duplicate-free list of vertex ids.
using VertexSet = std::vector<Vertex>;

/// Undirected edge stored canonically with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  static Edge make(Vertex a, Vertex b) { return a < b ? Edge{a, b} : Edge{b, a}; }
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Sorted, duplicate-free list of canonical edges.
using EdgeSet = std::vector<Edge>;

/// Fixed-width bit-set rows, one per vertex. Shared storage for Graph and
/// OrientedGraph.
class BitRows {
 public:
  BitRows() = default;
  BitRows(std::size_t rows, std::size_t bits);

  std::size_t words() const { return words_; }
  bool test(std::size_t r, std::size_t b) const {
    return (data_[r * words_ + b / 64] >> (b % 64)) & 1u;
  }
  void set(std::size_t r, std::size_t b) { data_[r * words_ + b / 64] |= std::uint64_t{1} << (b % 64); }
  void reset(std::size_t r, std::size_t b) { data_[r * words_ + b / 64] &= ~(std::uint64_t{1} << (b % 64)); }
  std::span<const std::uint64_t> row(std::size_t r) const { return {data_.data() + r * words_, words_}; }
  std::size_t count(std::size_t r) const;
  friend bool operator==(const BitRows&, const BitRows&) = default;

 private:
  std::size_t words_ = 0;
  std::vector<std::uint64_t> data_;
};

/// Simple undirected graph on vertices 0..n-1.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);
  static Graph from_edges(int n, std::span<const Edge> edges);
  static Graph complete(int n);
  static Graph cycle(int n);
  static Graph path(int n);

  int n() const { return n_; }
  std::size_t edge_count() const { return m_; }
  bool has_edge(Vertex a, Vertex b) const { return rows_.test(a, b); }
  /// Adds {a,b}; returns false if it was already present. Throws on loops.
  bool add_edge(Vertex a, Vertex b);
  bool remove_edge(Vertex a, Vertex b);
  int degree(Vertex v) const { return static_cast<int>(rows_.count(v)); }
  std::span<const std::uint64_t> row(Vertex v) const { return rows_.row(v); }
  /// First adjacency word; the whole row when n <= 64.
  std::uint64_t row_mask(Vertex v) const { return rows_.row(v)[0]; }
  VertexSet neighbors(Vertex v) const;
  EdgeSet edges() const;
  Graph induced(const VertexSet& keep) const;  // relabels to 0..|keep|-1

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  int n_ = 0;
  std::size_t m_ = 0;
  BitRows rows_;
};

/// Simple digraph without loops. An orientation of a simple graph never holds
/// both u->v and v->u; `is_orientation()` reports whether that holds.
class OrientedGraph {
 public:
  OrientedGraph() = default;
  explicit OrientedGraph(int n);

  int n() const { return n_; }
  std::size_t arc_count() const { return m_; }
  bool has_arc(Vertex from, Vertex to) const { return out_.test(from, to); }
  bool add_arc(Vertex from, Vertex to);
  bool remove_arc(Vertex from, Vertex to);
  int out_degree(Vertex v) const { return static_cast<int>(out_.count(v)); }
  int in_degree(Vertex v) const { return static_cast<int>(in_.count(v)); }
  std::uint64_t out_mask(Vertex v) const { return out_.row(v)[0]; }
  std::uint64_t in_mask(Vertex v) const { return in_.row(v)[0]; }
  VertexSet out_neighbors(Vertex v) const;
  bool is_orientation() const;
  OrientedGraph induced(const VertexSet& keep) const;
  /// 0/1 adjacency matrix, row-major.
  std::vector<std::int64_t> adjacency() const;

  friend bool operator==(const OrientedGraph&, const OrientedGraph&) = default;

 private:
  int n_ = 0;
  std::size_t m_ = 0;
  BitRows out_;
  BitRows in_;
};

/// Bipartite graph with parts X = 0..left-1 and Y = left..left+right-1 inside
/// one Graph.
struct BipartiteGraph {
  int left = 0;
  int right = 0;
  Graph graph;

  Vertex x(int i) const { return i; }
  Vertex y(int j) const { return left + j; }
};

struct DegreeSummary {
  int min_degree = 0;
  int max_degree = 0;
  std::vector<int> per_vertex;
};

DegreeSummary degrees(const Graph& g);

/// N(S): vertices outside S with a neighbour in S.
VertexSet external_neighborhood(const Graph& g, const VertexSet& s);

/// |a symmetric-difference b| for sorted canonical edge sets.
std::size_t hamming_distance(const EdgeSet& a, const EdgeSet& b);

bool is_hamilton_cycle(const Graph& g, std::span<const Vertex> cycle);

/// Rotate to start at the smallest vertex, then pick the direction whose
/// second vertex is smaller.
std::vector<Vertex> canonical_cycle(std::span<const Vertex> cycle);
EdgeSet cycle_edges(std::span<const Vertex> cycle);

Graph underlying(const OrientedGraph& d);

bool is_connected(const Graph& g);

// Edge-list text format: "n m" then m lines "u v" with 0 <= u < v < n.
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const Graph& g);
void write_edge_list_file(const std::string& path, const Graph& g);
/// Reads the same format but keeps line order (booster streams).
std::vector<Edge> read_edge_sequence(std::istream& in, int& n_out);

}  // namespace hamlab
