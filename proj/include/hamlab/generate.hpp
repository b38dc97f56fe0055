#pragma once

#include "hamlab/graph.hpp"
#include "hamlab/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hamlab {

/// G(n,p) sampling strategy. `automatic` uses geometric skipping below
/// kGnpSkipThreshold and a dense Bernoulli sweep otherwise. The two modes
/// draw different random streams, so the mode is part of the seed contract.
enum class GnpMode { automatic, skip, dense };
inline constexpr double kGnpSkipThreshold = 0.2;

Graph sample_gnp(int n, double p, Seed seed, GnpMode mode = GnpMode::automatic);
Graph sample_gnm(int n, std::uint64_t m, Seed seed);

/// Pairs (u,v), u < v, in lexicographic order; index k <-> pair.
Edge pair_from_index(int n, std::uint64_t k);
std::uint64_t pair_count(int n);

enum class HittingSelector { min_degree_1, min_degree_2, connected };

/// One run of the random graph process. Hitting times are prefix lengths:
/// graph_at(tau) is the first prefix with the property.
struct ProcessTrace {
  int n = 0;
  std::vector<Edge> order;
  std::size_t tau_min_degree_1 = 0;
  std::size_t tau_min_degree_2 = 0;
  std::size_t tau_connected = 0;

  Graph graph_at(std::size_t t) const;
  std::size_t tau(HittingSelector which) const;
};

inline constexpr int kProcessMaxN = 64;

ProcessTrace random_process(int n, Seed seed);
Graph process_hitting_graph(const ProcessTrace& trace, HittingSelector which);

OrientedGraph orient_randomly(const Graph& g, Seed seed);

/// Base graph plus an ordered stream of distinct non-edges of it that avoid
/// `forbidden`.
struct ExposureStream {
  Graph base;
  std::vector<Edge> boosters;
  VertexSet forbidden;

  /// base plus the first `count` boosters.
  Graph combined(std::size_t count) const;
  Graph combined() const { return combined(boosters.size()); }
};

/// Uniform random ordering of `booster_count` distinct non-edges of `base`
/// avoiding `forbidden`.
ExposureStream expose_boosters(Graph base, std::size_t booster_count, VertexSet forbidden, Seed seed);

/// base ~ G(n, p1) then `booster_count` random non-edges.
ExposureStream two_round_exposure(int n, double p1, std::size_t booster_count, VertexSet forbidden,
                                  Seed seed);

std::string trace_to_json(const ProcessTrace& trace);

}  // namespace hamlab
