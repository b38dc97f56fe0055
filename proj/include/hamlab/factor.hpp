#pragma once

#include "hamlab/graph.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hamlab {

/// ceil(n / ln^2 n) for n >= 3, 0 for n <= 2.
int isolated_budget(int n);

/// Vertex-disjoint cycles (each of length >= 3) plus isolated vertices.
class Factor {
 public:
  Factor() = default;
  /// Validates structure only (disjointness, lengths, full coverage); throws
  /// PreconditionError. Cycles are stored canonically and sorted.
  Factor(int n, std::vector<std::vector<Vertex>> cycles, VertexSet isolated);

  int n() const { return n_; }
  int s() const { return static_cast<int>(cycles_.size()); }
  const std::vector<std::vector<Vertex>>& cycles() const { return cycles_; }
  const VertexSet& isolated() const { return isolated_; }
  const EdgeSet& edges() const { return edges_; }

  /// All cycle edges present in g.
  bool is_subgraph_of(const Graph& g) const;
  bool is_two_factor_of(const Graph& g) const { return isolated_.empty() && is_subgraph_of(g); }
  /// At most `budget` isolated vertices and contained in g.
  bool is_almost_two_factor_of(const Graph& g, int budget) const;
  bool is_almost_two_factor_of(const Graph& g) const { return is_almost_two_factor_of(g, isolated_budget(n_)); }

  friend bool operator==(const Factor&, const Factor&) = default;

 private:
  int n_ = 0;
  std::vector<std::vector<Vertex>> cycles_;
  VertexSet isolated_;
  EdgeSet edges_;
};

/// Directed cycle cover: successor permutation on the covered vertices.
class CycleCover {
 public:
  CycleCover() = default;
  /// `successor[v]` is -1 for uncovered vertices. Throws unless it is a
  /// bijection on the covered set without fixed points.
  CycleCover(int n, std::vector<Vertex> successor);

  int n() const { return n_; }
  int s() const { return s_; }
  const std::vector<Vertex>& successor() const { return successor_; }
  VertexSet covered() const;
  bool is_subgraph_of(const OrientedGraph& d) const;
  bool is_almost_one_factor_of(const OrientedGraph& d) const;

 private:
  int n_ = 0;
  int s_ = 0;
  std::vector<Vertex> successor_;
};

// Factor file: one cycle per line as space-separated ids; isolated vertices on
// a line starting with "i".
Factor read_factor(std::istream& in, int n);
Factor read_factor_file(const std::string& path, int n);
void write_factor(std::ostream& out, const Factor& f);

}  // namespace hamlab
