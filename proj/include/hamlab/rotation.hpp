#pragma once

#include "hamlab/graph.hpp"

#include <vector>

namespace hamlab {

/// A path v_1..v_q with Pósa rotation bookkeeping. v_1 stays fixed.
class RotationPath {
 public:
  RotationPath() = default;
  /// Throws PreconditionError unless `vertices` is a simple path in g.
  RotationPath(const Graph& g, std::vector<Vertex> vertices);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  Vertex fixed_endpoint() const { return vertices_.front(); }
  Vertex endpoint() const { return vertices_.back(); }
  const EdgeSet& broken() const { return broken_; }
  int rotations_done() const { return rotations_; }
  bool contains(Vertex v) const;
  /// 1-based index of v, or 0.
  std::size_t index_of(Vertex v) const;

  // Used by extension; keeps bookkeeping.
  void append(Vertex v) { vertices_.push_back(v); }

 private:
  friend RotationPath rotate(const RotationPath&, const Graph&, std::size_t);
  std::vector<Vertex> vertices_;
  EdgeSet broken_;
  int rotations_ = 0;
};

/// Rotation with pivot v_i (1-based, 1 <= i <= q-2) and edge (v_q, v_i):
/// returns (v_1..v_i, v_q, v_{q-1}..v_{i+1}); the broken edge is (v_i, v_{i+1}).
RotationPath rotate(const RotationPath& p, const Graph& g, std::size_t pivot_index);

}  // namespace hamlab
