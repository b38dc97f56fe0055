#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hamlab/count.hpp"
#include "hamlab/error.hpp"
#include "hamlab/posa.hpp"
#include "support.hpp"

#include <deque>
#include <set>

using namespace hamlab;

namespace {

RotationBudget generous() {
  RotationBudget b;
  b.max_rotations_per_merge = 100;
  b.target_endpoint_count = 1000;
  return b;
}

// Every endpoint reachable by some sequence of rotations, searching over full
// vertex orders rather than endpoints.
std::set<Vertex> reachable_endpoints(const Graph& g, const std::vector<Vertex>& start) {
  std::set<std::vector<Vertex>> seen{start};
  std::deque<std::vector<Vertex>> queue{start};
  std::set<Vertex> ends;
  while (!queue.empty()) {
    const auto vs = queue.front();
    queue.pop_front();
    ends.insert(vs.back());
    const std::size_t q = vs.size();
    for (std::size_t i = 0; i + 2 < q; ++i) {
      if (!g.has_edge(vs.back(), vs[i])) continue;
      std::vector<Vertex> next(vs.begin(), vs.begin() + static_cast<long>(i) + 1);
      next.insert(next.end(), vs.rbegin(), vs.rend() - static_cast<long>(i) - 1);
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  return ends;
}

}  // namespace

TEST_CASE("endpoint closure") {
  SUBCASE("chordless path") {
    const Graph g = Graph::path(7);
    const auto cl = endpoint_closure(g, RotationPath(g, {0, 1, 2, 3, 4, 5, 6}), generous());
    CHECK(cl.endpoints == VertexSet{6});
    CHECK(cl.exit == ClosureExit::closure_complete);
    CHECK(cl.depth_reached == 0);
  }
  SUBCASE("cycle graph") {
    // The closing edge (6,0) is a legal pivot at v_1, which exposes v_2.
    const Graph c = Graph::cycle(7);
    const auto cl = endpoint_closure(c, RotationPath(c, {0, 1, 2, 3, 4, 5, 6}), generous());
    CHECK(cl.endpoints == VertexSet{1, 6});
    CHECK(cl.exit == ClosureExit::closure_complete);
  }
  SUBCASE("complete graph") {
    const Graph k5 = Graph::complete(5);
    const std::vector<Vertex> start{2, 0, 4, 1, 3};
    const auto cl = endpoint_closure(k5, RotationPath(k5, start), generous());
    const auto expected = reachable_endpoints(k5, start);
    CHECK(expected == std::set<Vertex>{0, 1, 3, 4});
    CHECK(std::set<Vertex>(cl.endpoints.begin(), cl.endpoints.end()) == expected);
  }
  SUBCASE("immediate extension") {
    const Graph g = Graph::path(5);
    const auto cl = endpoint_closure(g, RotationPath(g, {0, 1, 2}), generous());
    CHECK(cl.exit == ClosureExit::extension_found);
    CHECK(cl.extending_endpoint == 2);
    CHECK(cl.depth_reached == 0);
    CHECK(cl.endpoints == VertexSet{2});
  }
  SUBCASE("budget exhaustion without fallback") {
    const Graph k6 = Graph::complete(6);
    RotationBudget b;
    b.max_rotations_per_merge = 1;
    b.target_endpoint_count = 100;
    b.exhaustive_fallback = false;
    const auto cl = endpoint_closure(k6, RotationPath(k6, {0, 1, 2, 3, 4, 5}), b);
    CHECK(cl.exit == ClosureExit::budget_exhausted);
    CHECK(cl.depth_reached == 1);
    CHECK_FALSE(cl.target_reached);
  }
  SUBCASE("avoid set blocks pivots") {
    const Graph k5 = Graph::complete(5);
    RotationBudget b = generous();
    b.avoid_set = {0, 1, 2, 3, 4};
    const auto cl = endpoint_closure(k5, RotationPath(k5, {0, 1, 2, 3, 4}), b);
    CHECK(cl.endpoints == VertexSet{4});
  }
}

TEST_CASE("closure witnesses replay") {
  Rng rng(Seed{31});
  for (int t = 0; t < 200; ++t) {
    const int n = 5 + static_cast<int>(rng.below(5));
    Graph g = testing::random_graph(n, 0.5, rng);
    const int len = 3 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 2)));
    for (int v = 0; v + 1 < len; ++v) g.add_edge(v, v + 1);
    std::vector<Vertex> start(static_cast<std::size_t>(len));
    std::iota(start.begin(), start.end(), 0);
    const RotationPath p0(g, start);
    const auto cl = endpoint_closure(g, p0, generous());
    const auto all = reachable_endpoints(g, start);
    for (Vertex e : cl.endpoints) {
      CHECK(all.count(e) == 1);
      RotationPath cur = p0;
      for (std::size_t i : cl.witness.at(e)) cur = rotate(cur, g, i);
      CHECK(cur.endpoint() == e);
      CHECK(cur.fixed_endpoint() == 0);
      CHECK(cur.vertices() == cl.paths.at(e).vertices());
    }
    if (cl.exit == ClosureExit::extension_found) {
      REQUIRE(cl.extending_endpoint.has_value());
      bool outside = false;
      for (Vertex w : g.neighbors(*cl.extending_endpoint)) outside |= w >= len;
      CHECK(outside);
    } else {
      for (Vertex e : cl.endpoints)
        for (Vertex w : g.neighbors(e)) CHECK(w < len);
    }
  }
}

TEST_CASE("extend path") {
  const Graph p3 = Graph::path(3);
  CHECK(extend_path(p3, RotationPath(p3, {0, 1})).vertices() == std::vector<Vertex>{0, 1, 2});
  CHECK(extend_path(p3, RotationPath(p3, {0, 1, 2})).vertices() == std::vector<Vertex>{0, 1, 2});
  Graph g(8);
  g.add_edge(0, 1);
  g.add_edge(1, 7);
  g.add_edge(1, 4);
  CHECK(extend_path(g, RotationPath(g, {0, 1})).vertices() == std::vector<Vertex>{0, 1, 4});
}

TEST_CASE("conversion examples") {
  const Graph k5 = Graph::complete(5);
  SUBCASE("already Hamiltonian") {
    const Factor f(5, {{0, 1, 2, 3, 4}}, {});
    const auto rep = convert_factor_to_hamilton(k5, f, ExposureStream{k5, {}, {}}, RotationBudget::for_graph(5, 1.0));
    REQUIRE(rep.hamilton.has_value());
    CHECK(cycle_edges(*rep.hamilton) == f.edges());
    CHECK(rep.hamming == 0);
    CHECK(rep.boosters_used == 0);
  }
  SUBCASE("triangle plus two isolated vertices") {
    const Factor f(5, {{0, 1, 2}}, {3, 4});
    const auto rep = convert_factor_to_hamilton(k5, f, ExposureStream{k5, {}, {}}, RotationBudget::for_graph(5, 1.0));
    REQUIRE(rep.hamilton.has_value());
    CHECK(is_hamilton_cycle(k5, *rep.hamilton));
    CHECK(rep.boosters_used == 0);
    CHECK(rep.initial_components == 3);
    REQUIRE(rep.rounds.size() == 3);
    CHECK(rep.rounds[0].components_before == 3);
    CHECK(rep.rounds[1].components_before == 2);
    CHECK(rep.rounds[2].components_before == 1);
    CHECK(rep.rounds[2].action == "close-hamilton");
    CHECK(rep.hamming == hamming_distance(f.edges(), cycle_edges(*rep.hamilton)));
  }
  SUBCASE("disconnected graph") {
    Graph g(9);
    for (int i = 0; i < 6; ++i) g.add_edge(i, (i + 1) % 6);
    g.add_edge(6, 7);
    g.add_edge(7, 8);
    g.add_edge(6, 8);
    const Factor f(9, {{0, 1, 2, 3, 4, 5}, {6, 7, 8}}, {});
    const auto rep = convert_factor_to_hamilton(g, f, ExposureStream{g, {}, {}}, RotationBudget::for_graph(9, 0.25));
    CHECK_FALSE(rep.hamilton.has_value());
    CHECK(rep.diagnostics.find("{0,1,2,3,4,5}") != std::string::npos);
    CHECK(rep.diagnostics.find("{6,7,8}") != std::string::npos);
  }
  SUBCASE("boosters join the two parts") {
    Graph g(6);
    for (int i = 0; i < 3; ++i) {
      g.add_edge(i, (i + 1) % 3);
      g.add_edge(3 + i, 3 + (i + 1) % 3);
    }
    const Factor f(6, {{0, 1, 2}, {3, 4, 5}}, {});
    const ExposureStream s{g, {Edge{0, 3}, Edge{1, 4}, Edge{2, 5}}, {}};
    const auto rep = convert_factor_to_hamilton(g, f, s, RotationBudget::for_graph(6, 0.4));
    REQUIRE(rep.hamilton.has_value());
    CHECK(rep.boosters_used >= 2);
    Graph with = s.combined();
    CHECK(is_hamilton_cycle(with, *rep.hamilton));
  }
  SUBCASE("invalid factor") {
    const Graph c5 = Graph::cycle(5);
    const Factor f(5, {{0, 2, 4, 1, 3}}, {});
    CHECK_THROWS_AS(convert_factor_to_hamilton(c5, f, ExposureStream{c5, {}, {}}, RotationBudget{}), PreconditionError);
  }
}

TEST_CASE("conversion invariants on random inputs") {
  Rng rng(Seed{41});
  int converted = 0;
  for (int t = 0; t < 300; ++t) {
    const int n = 6 + static_cast<int>(rng.below(9));
    const double extra = 0.05 + 0.4 * rng.uniform();
    auto [g, f] = testing::random_factor_graph(n, extra, rng);
    const std::size_t room = pair_count(n) - g.edge_count();
    const std::size_t want = std::min<std::size_t>(room, rng.below(6));
    const auto stream = expose_boosters(g, want, {}, Seed{static_cast<std::uint64_t>(t)});
    const auto budget = RotationBudget::for_graph(n, extra);
    const auto rep = convert_factor_to_hamilton(g, f, stream, budget);
    const auto again = convert_factor_to_hamilton(g, f, stream, budget);
    CHECK(again.hamilton == rep.hamilton);
    CHECK(again.boosters_used == rep.boosters_used);
    CHECK(again.rounds.size() == rep.rounds.size());
    CHECK(rep.boosters_used <= stream.boosters.size());
    CHECK(rep.initial_components == f.s() + static_cast<int>(f.isolated().size()));
    for (std::size_t i = 1; i < rep.rounds.size(); ++i)
      CHECK(rep.rounds[i].components_before < rep.rounds[i - 1].components_before);
    if (!rep.hamilton) {
      CHECK_FALSE(rep.diagnostics.empty());
      continue;
    }
    ++converted;
    const auto cyc = cycle_edges(*rep.hamilton);
    CHECK(rep.hamming == hamming_distance(f.edges(), cyc));
    // Edges outside g are exactly the booster-closed rounds' edges in the cycle.
    std::set<Edge> outside, flagged;
    for (const Edge& e : cyc)
      if (!g.has_edge(e.u, e.v)) outside.insert(e);
    for (const auto& r : rep.rounds)
      if (r.was_booster && r.closing_edge && std::binary_search(cyc.begin(), cyc.end(), *r.closing_edge))
        flagged.insert(*r.closing_edge);
    CHECK(outside == flagged);
    Graph used = g;
    for (const Edge& e : flagged) used.add_edge(e.u, e.v);
    CHECK(is_hamilton_cycle(used, *rep.hamilton));
  }
  CHECK(converted > 100);
}

TEST_CASE("Hamiltonicity prober") {
  const Graph k6 = Graph::complete(6);
  const auto k = find_hamilton_rotation(k6, RotationBudget::for_graph(6, 1.0), Seed{1});
  REQUIRE(k.cycle.has_value());
  CHECK(is_hamilton_cycle(k6, *k.cycle));
  CHECK(k.route == SearchRoute::rotation);

  const Graph tree = testing::star(6);
  const auto t = find_hamilton_rotation(tree, RotationBudget::for_graph(7, 0.3), Seed{1});
  CHECK_FALSE(t.cycle.has_value());
  CHECK(t.proven_absent);

  CHECK_FALSE(find_hamilton_rotation(testing::petersen(), RotationBudget::for_graph(10, 0.33), Seed{2}).cycle);

  Rng rng(Seed{51});
  int present = 0, by_rotation = 0;
  for (std::uint64_t s = 0; s < 500; ++s) {
    const Graph g = testing::random_graph(12, 0.5, rng);
    const bool hamiltonian = !count_hamilton_cycles(g).is_zero();
    const auto r = find_hamilton_rotation(g, RotationBudget::for_graph(12, 0.5), Seed{s});
    CHECK(r.cycle.has_value() == hamiltonian);
    if (r.cycle) CHECK(is_hamilton_cycle(g, *r.cycle));
    if (!hamiltonian) CHECK(r.proven_absent);
    present += hamiltonian;
    by_rotation += r.route == SearchRoute::rotation;
  }
  CHECK(present > 100);
  MESSAGE("rotation route found " << by_rotation << " of " << present << " Hamiltonian samples");

  // Without the exact fallback a miss is possible but never a wrong answer.
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Graph g = testing::random_graph(10, 0.35, rng);
    const auto r = find_hamilton_rotation(g, RotationBudget::for_graph(10, 0.35), Seed{s}, false);
    if (r.cycle) CHECK(is_hamilton_cycle(g, *r.cycle));
    if (r.proven_absent) CHECK(count_hamilton_cycles(g).is_zero());
  }
}

TEST_CASE("exact Hamilton search") {
  CHECK_FALSE(find_hamilton_cycle_exact(testing::petersen()).has_value());
  CHECK_FALSE(find_hamilton_cycle_exact(Graph::path(4)).has_value());
  CHECK_FALSE(find_hamilton_cycle_exact(Graph::complete(2)).has_value());
  Rng rng(Seed{61});
  for (int t = 0; t < 300; ++t) {
    const int n = 3 + static_cast<int>(rng.below(9));
    const Graph g = testing::random_graph(n, 0.45, rng);
    const auto c = find_hamilton_cycle_exact(g);
    CHECK(c.has_value() == (testing::hamilton_dfs(g) > 0));
    if (c) CHECK(is_hamilton_cycle(g, *c));
  }
}
