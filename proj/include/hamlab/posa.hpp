#pragma once

#include "hamlab/factor.hpp"
#include "hamlab/generate.hpp"
#include "hamlab/graph.hpp"
#include "hamlab/rng.hpp"
#include "hamlab/rotation.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hamlab {

struct RotationBudget {
  int max_rotations_per_merge = 1;
  int target_endpoint_count = 1;
  /// Pivots v_i with v_{i-1}, v_i or v_{i+1} in this set are skipped.
  VertexSet avoid_set;
  /// Keep rotating past the depth budget until no new endpoint appears.
  bool exhaustive_fallback = true;

  /// max_rotations = max(1, ceil(3 ln n / ln(np))), target = ceil(n/3000);
  /// the fallback is on whenever n/3000 < 1.
  static RotationBudget for_graph(int n, double p);
};

enum class ClosureExit { extension_found, closure_complete, budget_exhausted };

struct EndpointClosure {
  /// B(v_1): every reached non-fixed endpoint, including the initial one.
  VertexSet endpoints;
  /// Pivot indices (1-based, as passed to rotate) that reproduce the path
  /// ending at each endpoint, starting from p0.
  std::map<Vertex, std::vector<std::size_t>> witness;
  std::map<Vertex, RotationPath> paths;
  ClosureExit exit = ClosureExit::closure_complete;
  /// Set when exit == extension_found.
  std::optional<Vertex> extending_endpoint;
  int depth_reached = 0;
  bool used_fallback = false;
  bool target_reached = false;
};

/// Breadth-first search over rotation endpoints with v_1 fixed. States are
/// deduplicated by endpoint; each BFS layer is one more rotation.
EndpointClosure endpoint_closure(const Graph& g, const RotationPath& p0, const RotationBudget& budget);

/// Appends the smallest-id neighbour of the free endpoint that is not on the
/// path; returns p unchanged when there is none.
RotationPath extend_path(const Graph& g, const RotationPath& p);

struct ConversionRound {
  int components_before = 0;
  int rotations_used = 0;
  std::optional<Edge> closing_edge;
  bool was_booster = false;
  std::string action;  // "extend", "close-open", "close-hamilton"
};

struct ConversionReport {
  std::optional<std::vector<Vertex>> hamilton;
  std::size_t hamming = 0;
  std::size_t boosters_used = 0;
  int initial_components = 0;
  std::vector<ConversionRound> rounds;
  std::string diagnostics;
};

/// Turns an almost 2-factor of g into a Hamilton cycle by splicing components
/// along edges, rotating when stuck, and adding boosters from the stream in
/// order until one closes the current path. Ties are broken by smallest id.
ConversionReport convert_factor_to_hamilton(const Graph& g, const Factor& f, const ExposureStream& boosters,
                                            const RotationBudget& budget);

enum class SearchRoute { rotation, exhaustive, none };

struct HamiltonSearch {
  std::optional<std::vector<Vertex>> cycle;
  SearchRoute route = SearchRoute::none;
  /// True when absence is certain (degree obstruction or exhaustive search).
  bool proven_absent = false;
};

inline constexpr int kRotationAttempts = 4;
inline constexpr int kExactSearchMaxN = 25;

/// Rotation-extension search over a few seeded relabelings, then an exact
/// bitset DP when n <= kExactSearchMaxN.
HamiltonSearch find_hamilton_rotation(const Graph& g, const RotationBudget& budget, Seed seed,
                                      bool exact_fallback = true);

/// Exact search: subset DP over endpoint bit-sets with path reconstruction.
std::optional<std::vector<Vertex>> find_hamilton_cycle_exact(const Graph& g);

std::string to_string(ClosureExit e);
std::string to_string(SearchRoute r);

}  // namespace hamlab
