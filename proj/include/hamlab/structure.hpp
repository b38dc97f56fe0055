#pragma once

#include "hamlab/graph.hpp"
#include "hamlab/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hamlab {

/// Constants of the p-expander properties, the orientation edge bound and the
/// rotation closure. Defaults are the asymptotic values.
struct ConstantsProfile {
  double low_degree_divisor = 100.0;     // D = {v : d(v) < np / this}
  double expander_size_exponent = 0.09;  // |D| <= n^this
  double short_path_factor = 2.0 / 3.0;  // paths of length <= this * ln n / ln ln n
  double expansion_divisor = 1000.0;     // |N(S)| >= (np / this) |S|
  double edge_density_coeff = 0.8;       // e(A,B) <= this * r * sqrt(|A||B|)
  double set_size_cap = 0.6;             // |A|, |B| <= this * n
  double rotation_divisor = 3000.0;
  double endpoint_fraction = 1.0 / 3000.0;

  /// Flat key=value text; unknown keys and non-positive values are errors.
  static ConstantsProfile parse(std::istream& in);
  static ConstantsProfile from_file(const std::string& path);
};

enum class CheckMode { exact, sampled };

inline constexpr int kExpanderExactMaxN = 20;
inline constexpr int kEdgeDistributionExactMaxN = 14;
inline constexpr int kSampledSetsPerSize = 10000;

enum class ExpanderProperty { small_low_degree_set = 1, no_short_d_paths = 2, small_set_expansion = 3 };

struct ExpanderViolation {
  ExpanderProperty property;
  /// (i): the set D. (ii): the path, first == last for a cycle. (iii): S.
  std::vector<Vertex> witness;
};

struct ExpanderCertificate {
  bool is_expander = false;
  VertexSet d_set;
  std::vector<ExpanderViolation> violations;
  CheckMode mode = CheckMode::exact;
  int max_path_length = 0;  // length bound used for property (ii)
  int max_set_size = 0;     // floor(1/p) used for property (iii)
};

VertexSet low_degree_set(const Graph& g, double threshold);

/// floor(short_path_factor * ln n / ln ln n); n - 1 when ln ln n <= 0.
int short_path_bound(int n, const ConstantsProfile& consts);

/// Checks the three expander properties. At most `max_witnesses` violations
/// per property are recorded.
ExpanderCertificate certify_p_expander(const Graph& g, double p, const ConstantsProfile& consts, CheckMode mode,
                                       Seed seed, int max_witnesses = 8);

/// Re-evaluates one recorded violation against g; true if it still violates.
bool violation_replays(const Graph& g, double p, const ConstantsProfile& consts, const VertexSet& d_set,
                       const ExpanderViolation& v);

struct EdgeDistributionViolation {
  VertexSet a;
  VertexSet b;
  std::size_t arcs = 0;
  double limit = 0.0;
};

struct EdgeDistributionReport {
  std::vector<EdgeDistributionViolation> violations;  // first `max_recorded`
  std::uint64_t total_violations = 0;
  std::uint64_t pairs_checked = 0;
  CheckMode mode = CheckMode::exact;
};

/// Pairs (A,B) of nonempty sets with |A|,|B| <= set_size_cap * n and more than
/// edge_density_coeff * r * sqrt(|A||B|) arcs from A to B.
EdgeDistributionReport edge_distribution_check(const OrientedGraph& d, double r, const ConstantsProfile& consts,
                                               CheckMode mode, Seed seed, std::size_t max_recorded = 64);

/// Peels vertices whose in- or out-degree inside the current set leaves
/// [low, high) until nothing changes.
VertexSet degree_window_core(const OrientedGraph& d, double low, double high);

/// X = out-copies, Y = in-copies; u_X ~ v_Y iff u -> v.
BipartiteGraph bipartite_double_cover(const OrientedGraph& d);

enum class OreRyserMethod { subsets, flow };
inline constexpr int kOreRyserSubsetMaxPart = 16;

struct OreRyserResult {
  bool holds = false;
  /// Y' (as indices 0..|Y|-1) with d|Y'| > sum_x min(d, e(x, Y')) when !holds.
  std::vector<int> violating_y;
};

/// Decides whether b has a spanning d_reg-regular subgraph.
OreRyserResult ore_ryser_check(const BipartiteGraph& b, int d_reg, OreRyserMethod method = OreRyserMethod::flow);

/// Spanning d_reg-regular subgraph via integral max-flow (Dinic, arcs scanned
/// in increasing vertex order). Throws PreconditionError if none exists.
BipartiteGraph extract_regular_subgraph(const BipartiteGraph& b, int d_reg);

std::string to_string(ExpanderProperty p);
std::string to_string(CheckMode m);

}  // namespace hamlab
