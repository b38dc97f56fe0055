#include "hamlab/rotation.hpp"

#include "hamlab/error.hpp"

#include <algorithm>

namespace hamlab {

RotationPath::RotationPath(const Graph& g, std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw PreconditionError("RotationPath: empty path");
  std::vector<char> seen(static_cast<std::size_t>(g.n()), 0);
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Vertex v = vertices_[i];
    if (v < 0 || v >= g.n()) throw PreconditionError("RotationPath: vertex out of range");
    if (seen[v]) throw PreconditionError("RotationPath: repeated vertex " + std::to_string(v));
    seen[v] = 1;
    if (i > 0 && !g.has_edge(vertices_[i - 1], v))
      throw PreconditionError("RotationPath: missing edge " + std::to_string(vertices_[i - 1]) + "-" + std::to_string(v));
  }
}

bool RotationPath::contains(Vertex v) const { return index_of(v) != 0; }

std::size_t RotationPath::index_of(Vertex v) const {
  auto it = std::find(vertices_.begin(), vertices_.end(), v);
  return it == vertices_.end() ? 0 : static_cast<std::size_t>(it - vertices_.begin()) + 1;
}

RotationPath rotate(const RotationPath& p, const Graph& g, std::size_t pivot_index) {
  const std::size_t q = p.vertices_.size();
  if (q < 3 || pivot_index < 1 || pivot_index > q - 2)
    throw PreconditionError("rotate: pivot index " + std::to_string(pivot_index) + " outside [1, q-2] for q=" +
                            std::to_string(q));
  const Vertex pivot = p.vertices_[pivot_index - 1];
  if (!g.has_edge(p.vertices_.back(), pivot))
    throw PreconditionError("rotate: no edge between endpoint and pivot " + std::to_string(pivot));
  RotationPath out = p;
  std::reverse(out.vertices_.begin() + static_cast<std::ptrdiff_t>(pivot_index), out.vertices_.end());
  const Edge broken = Edge::make(pivot, p.vertices_[pivot_index]);
  auto it = std::lower_bound(out.broken_.begin(), out.broken_.end(), broken);
  if (it == out.broken_.end() || *it != broken) out.broken_.insert(it, broken);
  ++out.rotations_;
  return out;
}

}  // namespace hamlab
