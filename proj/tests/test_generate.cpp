#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hamlab/error.hpp"
#include "hamlab/generate.hpp"
#include "support.hpp"

#include <json.hpp>

#include <cmath>
#include <map>
#include <set>

using namespace hamlab;

TEST_CASE("rng primitives") {
  // SplitMix64 reference values for the finaliser applied to 0 and 1.
  CHECK(mix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(mix64(1) == 0x910a2dec89025cc1ULL);
  // xoshiro256** stream for seed 12345, from an independent implementation.
  Rng golden(Seed{12345});
  CHECK(golden.next() == 0xbe6a36374160d49bULL);
  CHECK(golden.next() == 0x214aaa0637a688c6ULL);
  CHECK(golden.next() == 0xf69d16de9954d388ULL);
  Rng a(Seed{42}), b(Seed{42});
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng r(Seed{1});
  for (int i = 0; i < 1000; ++i) {
    CHECK(r.below(7) < 7);
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(derive_seed(Seed{3}, 0).value != derive_seed(Seed{3}, 1).value);
}

TEST_CASE("G(n,p) boundary cases") {
  CHECK(sample_gnp(4, 1.0, Seed{9}) == Graph::complete(4));
  CHECK(sample_gnp(5, 0.0, Seed{9}) == Graph(5));
  for (auto mode : {GnpMode::skip, GnpMode::dense}) {
    CHECK(sample_gnp(6, 1.0, Seed{1}, mode) == Graph::complete(6));
    CHECK(sample_gnp(6, 0.0, Seed{1}, mode).edge_count() == 0);
  }
  CHECK_THROWS_AS(sample_gnp(4, 1.5, Seed{1}), PreconditionError);
}

TEST_CASE("G(n,p) determinism and mean") {
  CHECK(sample_gnp(30, 0.1, Seed{77}) == sample_gnp(30, 0.1, Seed{77}));
  CHECK(sample_gnp(30, 0.5, Seed{77}) == sample_gnp(30, 0.5, Seed{77}));
  // Binomial(45, 1/2): mean 22.5, variance 11.25.
  for (auto mode : {GnpMode::automatic, GnpMode::skip}) {
    const int trials = 10000;
    double sum = 0.0;
    for (int t = 0; t < trials; ++t) sum += static_cast<double>(sample_gnp(10, 0.5, Seed{static_cast<std::uint64_t>(t)}, mode).edge_count());
    const double se = std::sqrt(11.25 / trials);
    CHECK(std::abs(sum / trials - 22.5) < 5 * se);
  }
  // Sparse branch: Binomial(190, 0.05).
  {
    const int trials = 10000;
    double sum = 0.0;
    for (int t = 0; t < trials; ++t) sum += static_cast<double>(sample_gnp(20, 0.05, Seed{static_cast<std::uint64_t>(t)}).edge_count());
    const double se = std::sqrt(190 * 0.05 * 0.95 / trials);
    CHECK(std::abs(sum / trials - 9.5) < 5 * se);
  }
}

TEST_CASE("G(n,M)") {
  CHECK(sample_gnm(4, 6, Seed{1}) == Graph::complete(4));
  CHECK(sample_gnm(7, 0, Seed{1}) == Graph(7));
  CHECK_THROWS_AS(sample_gnm(4, 7, Seed{1}), PreconditionError);
  std::map<EdgeSet, int> freq;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    const Graph g = sample_gnm(3, 2, Seed{static_cast<std::uint64_t>(t)});
    CHECK(g.edge_count() == 2);
    ++freq[g.edges()];
  }
  CHECK(freq.size() == 3);
  const double se = std::sqrt((1.0 / 3) * (2.0 / 3) / trials);
  for (const auto& [edges, count] : freq) CHECK(std::abs(double(count) / trials - 1.0 / 3) < 5 * se);
}

TEST_CASE("pair indexing") {
  for (int n : {2, 3, 7}) {
    std::uint64_t k = 0;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v, ++k) CHECK(pair_from_index(n, k) == Edge{u, v});
    CHECK(pair_count(n) == k);
  }
}

TEST_CASE("random process hitting times") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto t = random_process(3, Seed{s});
    CHECK(t.tau_min_degree_2 == 3);
    CHECK(t.tau_min_degree_1 == 2);
    CHECK(process_hitting_graph(t, HittingSelector::min_degree_2) == Graph::complete(3));
  }
  CHECK_THROWS_AS(random_process(2, Seed{1}), PreconditionError);

  for (std::uint64_t s = 0; s < 10000; ++s) {
    const auto t = random_process(6, Seed{s});
    REQUIRE(t.order.size() == 15);
    CHECK(t.tau_min_degree_1 <= t.tau_min_degree_2);
    CHECK(t.tau_min_degree_1 <= t.tau_connected);
    CHECK(std::set<Edge>(t.order.begin(), t.order.end()).size() == 15);
  }

  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto t = random_process(8, Seed{s});
    const Graph at = process_hitting_graph(t, HittingSelector::min_degree_2);
    const Graph before = t.graph_at(t.tau_min_degree_2 - 1);
    CHECK(degrees(at).min_degree >= 2);
    CHECK(degrees(before).min_degree <= 1);
    const Edge last = t.order[t.tau_min_degree_2 - 1];
    CHECK((at.degree(last.u) == 2 || at.degree(last.v) == 2));
    CHECK(is_connected(t.graph_at(t.tau_connected)));
    CHECK_FALSE(is_connected(t.graph_at(t.tau_connected - 1)));
    CHECK(degrees(t.graph_at(t.tau_min_degree_1)).min_degree >= 1);
    CHECK(degrees(t.graph_at(t.tau_min_degree_1 - 1)).min_degree == 0);
    // Prefix monotonicity.
    for (std::size_t i = 0; i + 1 < t.order.size(); i += 5) {
      const auto a = t.graph_at(i).edges(), b = t.graph_at(i + 1).edges();
      CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
    }
  }
}

TEST_CASE("trace JSON") {
  const auto t = random_process(4, Seed{3});
  const auto j = nlohmann::json::parse(trace_to_json(t));
  CHECK(j["n"] == 4);
  CHECK(j["order"].size() == 6);
  CHECK(j["tau2"] == t.tau_min_degree_2);
  CHECK(j["tau_conn"] == t.tau_connected);
}

TEST_CASE("random orientation") {
  CHECK(orient_randomly(Graph(4), Seed{1}).arc_count() == 0);
  Rng rng(Seed{8});
  for (int t = 0; t < 50; ++t) {
    const Graph g = testing::random_graph(9, 0.4, rng);
    const auto d = orient_randomly(g, Seed{static_cast<std::uint64_t>(t)});
    CHECK(underlying(d) == g);
    CHECK(d.is_orientation());
  }
  Graph single(2);
  single.add_edge(0, 1);
  int forward = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) forward += orient_randomly(single, Seed{static_cast<std::uint64_t>(t)}).has_arc(0, 1);
  CHECK(std::abs(double(forward) / trials - 0.5) < 5 * std::sqrt(0.25 / trials));
}

TEST_CASE("two-round exposure") {
  CHECK_THROWS_AS(two_round_exposure(4, 1.0, 1, {}, Seed{1}), PreconditionError);
  try {
    two_round_exposure(4, 1.0, 2, {}, Seed{1});
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("short by 2") != std::string::npos);
  }

  const auto s = two_round_exposure(5, 0.0, 3, {}, Seed{2});
  CHECK(s.base.edge_count() == 0);
  CHECK(s.boosters.size() == 3);
  CHECK(std::set<Edge>(s.boosters.begin(), s.boosters.end()).size() == 3);

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto f = two_round_exposure(6, 0.0, 5, {0}, Seed{seed});
    for (const Edge& e : f.boosters) CHECK((e.u != 0 && e.v != 0));
  }

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto x = two_round_exposure(10, 0.4, 8, {3}, Seed{seed});
    for (const Edge& e : x.boosters) CHECK_FALSE(x.base.has_edge(e.u, e.v));
    CHECK(x.combined().edge_count() == x.base.edge_count() + x.boosters.size());
    CHECK(x.combined(0) == x.base);
  }
}
