#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cycledec/engine.hpp"
#include "cycledec/generators.hpp"
#include "cycledec/graph.hpp"
#include "cycledec/oracle.hpp"

using namespace cycledec;

namespace {

Graph random_graph(int n, double p, uint64_t seed) {
  Rng rng(seed);
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.chance(p)) g.add_edge(u, v);
  return g;
}

EngineConfig config_for(int k, uint64_t seed) {
  EngineConfig cfg = EngineConfig::defaults(k);
  cfg.seed = seed;
  return cfg;
}

// every committed cycle must be a valid L-cycle of the host: re-verify the
// ledger against a scratch copy
void check_ledger(const Graph& host, const EngineRun& run) {
  Graph spent(host.order());
  for (const auto& cyc : run.ledger.cycles()) {
    REQUIRE(static_cast<int>(cyc.size()) == run.L);
    for (size_t i = 0; i < cyc.size(); ++i) {
      int u = cyc[i], v = cyc[(i + 1) % cyc.size()];
      REQUIRE(host.has_edge(u, v));
      REQUIRE_FALSE(spent.has_edge(u, v));
      spent.add_edge(u, v);
    }
  }
  // residual + spent = host
  CHECK(spent.union_with(run.residual) == host);
  CHECK(spent.edge_count() + run.residual.edge_count() == host.edge_count());
}

}  // namespace

TEST_CASE("clique partition classes") {
  auto classes = clique_partition_classes(9, 3);
  CHECK(classes.size() == 12);
  Graph covered(9);
  for (const auto& cls : classes) {
    REQUIRE(cls.size() == 3);
    for (size_t i = 0; i < cls.size(); ++i)
      for (size_t j = i + 1; j < cls.size(); ++j) {
        REQUIRE_FALSE(covered.has_edge(cls[i], cls[j]));
        covered.add_edge(cls[i], cls[j]);
      }
  }
  CHECK(covered.edge_count() == 36);  // every K_9 edge in exactly one class

  auto small = clique_partition_classes(4, 2);
  CHECK(small.size() == 6);  // K_2-decomposition of K_4 = its edges
}

TEST_CASE("ledger rejects invalid commits") {
  Graph g = make_complete(6);
  CoverLedger ledger(g, 4);
  ledger.commit({0, 1, 2, 3});
  CHECK(ledger.cycles_committed() == 1);
  CHECK_THROWS_AS(ledger.commit({0, 1, 2, 3}), std::logic_error);   // reuse
  CHECK_THROWS_AS(ledger.commit({0, 1, 2}), std::logic_error);      // length
  CHECK_THROWS_AS(ledger.commit({0, 0, 2, 3}), std::logic_error);   // repeat
  Graph sparse(6);
  sparse.add_edge(0, 1);
  CoverLedger lone(sparse, 4);
  CHECK_THROWS_AS(lone.commit({0, 1, 2, 3}), std::logic_error);     // non-edge
}

TEST_CASE("greedy approximation") {
  SUBCASE("a single 4-cycle empties itself") {
    EngineRun run(make_cycle(4), 2, config_for(2, 1));
    greedy_approx(run, 0.0);
    CHECK(run.residual.edge_count() == 0);
    check_ledger(run.original, run);
  }
  SUBCASE("K_9 leaves few edges and all removed cycles verify") {
    EngineRun run(make_complete(9), 2, config_for(2, 1));
    greedy_approx(run, 0.0);
    CHECK(run.residual.edge_count() < 36);
    check_ledger(run.original, run);
  }
  SUBCASE("dense random graph reaches the eta target") {
    Graph g = random_graph(200, 0.7, 7);
    EngineRun run(g, 2, config_for(2, 7));
    greedy_approx(run, 0.05);
    CHECK(run.residual.edge_count() <= 0.05 * 200 * 200);
    check_ledger(g, run);
  }
  SUBCASE("respects an edge domain") {
    Graph g = make_complete(12);
    VertexSet left = VertexSet::of(12, {0, 1, 2, 3, 4, 5});
    EngineRun run(g, 2, config_for(2, 3));
    Graph domain(12);
    g.for_each_edge([&](int u, int v) {
      if (left.contains(u) && left.contains(v)) domain.add_edge(u, v);
    });
    greedy_approx(run, 0.0, &domain);
    // nothing outside the domain was touched
    run.ledger.used().for_each_edge(
        [&](int u, int v) { CHECK(domain.has_edge(u, v)); });
    check_ledger(g, run);
  }
}

TEST_CASE("find_paths contracts") {
  SUBCASE("single pair in K_20") {
    EngineRun run(make_complete(20), 2, config_for(2, 5));
    auto paths = find_paths(run, {{0, 1}}, 4, 0.2);
    REQUIRE(paths.has_value());
    REQUIRE(paths->size() == 1);
    CHECK((*paths)[0].size() == 5);
    CHECK((*paths)[0].front() == 0);
    CHECK((*paths)[0].back() == 1);
  }
  SUBCASE("ten disjoint pairs, length 3") {
    EngineRun run(make_complete(20), 2, config_for(2, 5));
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < 10; ++i) pairs.emplace_back(2 * i, 2 * i + 1);
    auto paths = find_paths(run, pairs, 3, 0.2);
    REQUIRE(paths.has_value());
    CHECK(paths->size() == 10);
    // edge-disjointness: the residual lost exactly 30 edges
    CHECK(run.residual.edge_count() == make_complete(20).edge_count() - 30);
  }
  SUBCASE("expander bulk paths stay within the degree cap") {
    Graph g = random_graph(300, 0.6, 11);
    EngineRun run(g, 4, config_for(4, 11));
    Rng rng(13);
    std::vector<std::pair<int, int>> pairs;
    while (pairs.size() < 100) {
      int x = rng.range(0, 300), y = rng.range(0, 300);
      if (x != y) pairs.emplace_back(x, y);
    }
    auto paths = find_paths(run, pairs, 7, 0.02);
    REQUIRE(paths.has_value());
    std::vector<int> degree(300, 0);
    for (const auto& p : *paths) {
      CHECK(p.size() == 8);
      for (size_t i = 0; i + 1 < p.size(); ++i) {
        ++degree[p[i]];
        ++degree[p[i + 1]];
      }
    }
    int cap = ceil_fraction(std::cbrt(0.02), 300);
    for (int v = 0; v < 300; ++v) CHECK(degree[v] <= cap);
  }
}

TEST_CASE("cover_vertex_star") {
  SUBCASE("even degree leaves nothing") {
    Graph g = make_complete(20);
    EngineRun run(g, 2, config_for(2, 2));
    // strip vertex 0 down to 6 edges
    for (int v = 7; v < 20; ++v) run.residual.remove_edge(0, v);
    Graph host = run.residual;
    EngineRun fresh(host, 2, config_for(2, 2));
    REQUIRE(fresh.residual.degree(0) == 6);
    auto status = cover_vertex_star(fresh, 0, VertexSet::full(20));
    REQUIRE(status.ok);
    CHECK(fresh.residual.degree(0) == 0);
    CHECK(fresh.ledger.cycles_committed() == 3);
    check_ledger(host, fresh);
  }
  SUBCASE("odd degree leaves one edge") {
    Graph g = make_complete(20);
    for (int v = 8; v < 20; ++v) g.remove_edge(0, v);
    EngineRun run(g, 2, config_for(2, 2));
    REQUIRE(run.residual.degree(0) == 7);
    auto status = cover_vertex_star(run, 0, VertexSet::full(20));
    REQUIRE(status.ok);
    CHECK(run.residual.degree(0) == 1);
  }
  SUBCASE("bipartite pairing keeps sides together") {
    Graph g = make_complete_bipartite(10, 10);
    Bipartition sides{VertexSet(20), VertexSet(20)};
    for (int i = 0; i < 10; ++i) sides.a.insert(i);
    for (int i = 10; i < 20; ++i) sides.b.insert(i);
    EngineRun run(g, 2, config_for(2, 9));
    auto status = cover_vertex_star(run, 0, VertexSet::full(20), &sides);
    REQUIRE(status.ok);
    CHECK(run.residual.degree(0) == 0);
    check_ledger(g, run);
  }
}

TEST_CASE("bound_max_degree sweeps K_60 under the target") {
  Graph g = make_complete(60);
  EngineRun run(g, 4, config_for(4, 21));
  auto status = bound_max_degree(run, 0.2);
  INFO(status.stage, ": ", status.detail);
  CHECK(status.ok);
  CHECK(run.residual.max_degree() <= 12);
  check_ledger(g, run);
}

TEST_CASE("bound_max_degree leaves the empty graph alone") {
  Graph g(40);
  EngineRun run(g, 4, config_for(4, 21));
  auto status = bound_max_degree(run, 0.2);
  CHECK(status.ok);
  CHECK(run.residual.edge_count() == 0);
}

TEST_CASE("cover_sparse completes a matching into cycles") {
  Graph g = random_graph(40, 0.8, 31);
  // sparse edges: a matching on the first ten vertices
  std::vector<std::pair<int, int>> matching;
  for (int i = 0; i < 10; i += 2)
    if (g.has_edge(i, i + 1)) matching.emplace_back(i, i + 1);
  REQUIRE(matching.size() >= 2);
  VertexSet l_set(40), r_set(40);
  for (int i = 0; i < 10; ++i) l_set.insert(i);
  for (int i = 10; i < 40; ++i) r_set.insert(i);
  EngineRun run(g, 2, config_for(2, 31));
  auto status = cover_sparse(run, l_set, r_set, matching);
  REQUIRE(status.ok);
  for (auto [u, v] : matching) CHECK_FALSE(run.residual.has_edge(u, v));
  // the completions never added an l-side interior
  for (const auto& cyc : run.ledger.cycles())
    for (int v : cyc) {
      bool endpoint = false;
      for (auto [a, b] : matching) endpoint |= (v == a || v == b);
      if (!endpoint) CHECK(r_set.contains(v));
    }
  check_ledger(g, run);
}

TEST_CASE("cover_down") {
  SUBCASE("u = everything is a no-op") {
    Graph g = make_complete(20);
    EngineRun run(g, 2, config_for(2, 41));
    auto result = cover_down(run, VertexSet::full(20), VortexFlavor::min_degree);
    CHECK(result.status.ok);
    CHECK(result.covered_outside);
    CHECK(run.residual.edge_count() == g.edge_count());
  }
  SUBCASE("seeded expanders: soundness, parity, containment") {
    for (uint64_t seed : {1u, 2u, 3u}) {
      Graph g = random_graph(300, 0.6, seed);
      // make every degree even so the phase-3 parity precondition holds
      std::vector<int> odd;
      for (int v = 0; v < 300; ++v)
        if (g.degree(v) % 2 != 0) odd.push_back(v);
      for (size_t i = 0; i + 1 < odd.size(); i += 2)
        g.toggle_edge(odd[i], odd[i + 1]);
      REQUIRE(is_two_divisible(g));

      EngineConfig cfg = config_for(4, seed);
      cfg.nu = 0.2;
      EngineRun run(g, 4, cfg);
      VertexSet u(300);
      for (int i = 0; i < 60; ++i) u.insert(run.scan[i]);
      auto result = cover_down(run, u, VortexFlavor::expander);
      // ledger soundness holds regardless of the verdict
      check_ledger(g, run);
      if (result.covered_outside) {
        run.residual.for_each_edge([&](int a, int b) {
          CHECK(u.contains(a));
          CHECK(u.contains(b));
        });
        // cycle removal preserved 2-divisibility
        CHECK(is_two_divisible(run.residual));
      }
      if (result.status.ok)
        CHECK(result.intrusion_max_degree <= result.intrusion_bound + 1e-9);
      else
        CHECK_FALSE(result.status.stage.empty());
    }
  }
}

TEST_CASE("decompose dispatcher") {
  SUBCASE("empty graph gets an empty certificate") {
    auto outcome = decompose(Graph(10), 2, config_for(2, 1));
    CHECK(outcome.kind == OutcomeKind::certificate);
    CHECK(outcome.certificate.cycles.empty());
  }
  SUBCASE("divisibility gate names the violation") {
    auto outcome = decompose(make_complete(5), 2, config_for(2, 1));
    CHECK(outcome.kind == OutcomeKind::nonexistence);
    CHECK(outcome.reason.find("divisible") != std::string::npos);
    Graph k2(2);
    k2.add_edge(0, 1);
    auto odd = decompose(k2, 2, config_for(2, 1));
    CHECK(odd.kind == OutcomeKind::nonexistence);
  }
  SUBCASE("two disjoint K_5 are refuted") {
    auto outcome = decompose(gen_two_cliques(2, 0).graph, 2, config_for(2, 1));
    CHECK(outcome.kind == OutcomeKind::nonexistence);
  }
  SUBCASE("K_9 goes through the oracle") {
    auto outcome = decompose(make_complete(9), 2, config_for(2, 1));
    REQUIRE(outcome.kind == OutcomeKind::certificate);
    CHECK(verify_decomposition(make_complete(9), outcome.certificate).ok());
  }
  SUBCASE("oracle agreement on seeded divisible instances") {
    int certificates = 0;
    for (uint64_t seed = 0; seed < 25; ++seed) {
      int n = 6 + static_cast<int>(seed % 7);
      auto g = gen_divisible_min_degree(n, 4, 2.0 / 3.0, seed);
      if (!g) continue;
      auto engine = decompose(*g, 2, config_for(2, seed));
      auto oracle = exact_decompose(*g, 4);
      if (oracle.status == OracleStatus::found) {
        REQUIRE(engine.kind == OutcomeKind::certificate);
        CHECK(verify_decomposition(*g, engine.certificate).ok());
        ++certificates;
      } else if (oracle.status == OracleStatus::none_exists) {
        CHECK(engine.kind == OutcomeKind::nonexistence);
      }
    }
    CHECK(certificates > 10);
  }
}

TEST_CASE("length-four extremal pipelines") {
  SUBCASE("planted tripartite instance decomposes via type 2") {
    // parts of six: the bipartite pieces land within the oracle cutoff
    Graph g = gen_perturbed(PerturbShape::tripartite, 18, 0.0, 3);
    REQUIRE(is_cycle_divisible(g, 4));
    EngineConfig cfg = config_for(2, 3);
    cfg.m1 = 1;
    auto outcome = decompose(g, 2, cfg);
    INFO(outcome.diagnostic.stage, ": ", outcome.diagnostic.detail);
    REQUIRE(outcome.kind == OutcomeKind::certificate);
    CHECK(verify_decomposition(g, outcome.certificate).ok());
  }
  SUBCASE("rigid two-ended instance decomposes via type 1") {
    // the tight shape: two K_5 ends, a middle block of 6 joined to both,
    // no edges between the ends; every piece fits under the oracle cutoff
    const int n = 16;
    Graph g(n);
    auto block = [](int v) { return v < 5 ? 0 : (v < 11 ? 1 : 2); };
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) {
        if (block(u) == block(v) && block(u) != 1) g.add_edge(u, v);
        if ((block(u) == 1) != (block(v) == 1)) g.add_edge(u, v);
      }
    REQUIRE(g.min_degree() == 10);
    REQUIRE(is_cycle_divisible(g, 4));  // e = 10 + 10 + 60 = 80
    EngineConfig cfg = config_for(2, 5);
    cfg.m1 = 1;
    cfg.oracle_cutoff = 14;  // n = 16 exceeds it, so the pipeline must run
    auto outcome = decompose(g, 2, cfg);
    INFO(outcome.diagnostic.stage, ": ", outcome.diagnostic.detail);
    REQUIRE(outcome.kind == OutcomeKind::certificate);
    CHECK(verify_decomposition(g, outcome.certificate).ok());
  }
}

TEST_CASE("decompose_bipartite") {
  SUBCASE("K_{4,4} into 8-cycles via the oracle") {
    Graph g = make_complete_bipartite(4, 4);
    Bipartition sides{VertexSet(8), VertexSet(8)};
    for (int i = 0; i < 4; ++i) sides.a.insert(i);
    for (int i = 4; i < 8; ++i) sides.b.insert(i);
    auto outcome = decompose_bipartite(g, sides, 4, config_for(4, 1));
    REQUIRE(outcome.kind == OutcomeKind::certificate);
    CHECK(outcome.certificate.cycles.size() == 2);
  }
  SUBCASE("a 6-cycle is its own certificate") {
    Graph g = make_cycle(6);
    Bipartition sides{VertexSet::of(6, {0, 2, 4}), VertexSet::of(6, {1, 3, 5})};
    auto outcome = decompose_bipartite(g, sides, 3, config_for(3, 1));
    REQUIRE(outcome.kind == OutcomeKind::certificate);
    CHECK(outcome.certificate.cycles.size() == 1);
  }
  SUBCASE("bipartite blockers are refuted at oracle scale") {
    auto blocker = gen_c2k_bip_extremal(2, 0);
    auto outcome =
        decompose_bipartite(blocker.graph, *blocker.sides, 2, config_for(2, 1));
    CHECK(outcome.kind == OutcomeKind::nonexistence);
  }
  SUBCASE("non-bipartite input is rejected with a diagnostic") {
    Graph g = make_complete(8);
    Bipartition sides{VertexSet::of(8, {0, 1, 2, 3}), VertexSet::of(8, {4, 5, 6, 7})};
    auto outcome = decompose_bipartite(g, sides, 2, config_for(2, 1));
    CHECK(outcome.kind == OutcomeKind::diagnostic);
  }
}

TEST_CASE("pipelines never emit unverifiable certificates and conserve parity") {
  // fuzz across the dispatcher: whatever the outcome, committed cycles are
  // sound and any certificate verifies
  int certificates = 0;
  for (uint64_t seed = 0; seed < 8; ++seed) {
    Graph g = gen_perturbed(PerturbShape::tripartite, 18, 0.003, seed);
    if (!is_cycle_divisible(g, 4)) continue;
    EngineConfig cfg = config_for(2, seed);
    cfg.m1 = 1;
    auto outcome = decompose(g, 2, cfg);
    if (outcome.kind == OutcomeKind::certificate) {
      CHECK(verify_decomposition(g, outcome.certificate).ok());
      ++certificates;
    } else {
      CHECK_FALSE(outcome.diagnostic.stage.empty());
    }
  }
  CHECK(certificates > 0);
}
