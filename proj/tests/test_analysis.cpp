#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cycledec/analysis.hpp"
#include "cycledec/graph.hpp"
#include "cycledec/reference.hpp"
#include "cycledec/rng.hpp"

using namespace cycledec;

namespace {

Graph random_graph(int n, double p, Rng& rng) {
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.chance(p)) g.add_edge(u, v);
  return g;
}

Graph two_cliques(int half) {
  return make_disjoint_union(make_complete(half), make_complete(half));
}

}  // namespace

TEST_CASE("robust neighborhood on fixed graphs") {
  Graph k10 = make_complete(10);
  VertexSet s = VertexSet::of(10, {0, 1, 2, 3, 4});
  CHECK(robust_neighborhood(k10, s, 0.3).size() == 10);

  Graph empty(8);
  CHECK(robust_neighborhood(empty, VertexSet::of(8, {0, 1}), 0.1).empty());

  Graph c6 = make_cycle(6);
  CHECK(robust_neighborhood(c6, VertexSet::of(6, {0}), 0.5).empty());
}

TEST_CASE("expander checks on fixed graphs") {
  CHECK(is_expander(make_complete(10), 0.4));
  CHECK_FALSE(is_expander(two_cliques(10), 0.1));
  CHECK_FALSE(is_expander(make_complete_bipartite(10, 10), 0.45));
}

TEST_CASE("robust neighborhood monotonicity and expander degree bound") {
  Rng rng(505);
  for (int rep = 0; rep < 10; ++rep) {
    int n = rng.range(8, 40);
    Graph g = random_graph(n, 0.5, rng);
    VertexSet s(n);
    for (int v = 0; v < n; ++v)
      if (rng.chance(0.4)) s.insert(v);
    VertexSet r1 = robust_neighborhood(g, s, 0.2);
    VertexSet r2 = robust_neighborhood(g, s, 0.35);
    VertexSet diff = r2;
    diff.subtract(r1);
    CHECK(diff.empty());  // R shrinks as nu grows
    if (is_expander(g, 0.3)) {
      CHECK(is_expander(g, 0.2));  // monotone in nu
      CHECK(g.min_degree() >= ceil_fraction(0.3, n));
    }
  }
}

TEST_CASE("parallel kernels match the serial reference") {
  Rng rng(606);
  for (int rep = 0; rep < 8; ++rep) {
    int n = rng.range(10, 60);
    Graph g = random_graph(n, 0.4, rng);
    VertexSet s(n);
    for (int v = 0; v < n; ++v)
      if (rng.chance(0.5)) s.insert(v);
    for (double nu : {0.1, 0.25, 0.4}) {
      CHECK(robust_neighborhood(g, s, nu) == serial::robust_neighborhood(g, s, nu));
      CHECK(is_expander(g, nu) == serial::is_expander(g, nu));
    }
  }
}

TEST_CASE("closeness on fixed graphs") {
  auto tc = closeness_two_cliques(two_cliques(5));
  CHECK(tc.exact);
  CHECK(tc.epsilon == doctest::Approx(0.0));

  auto bip = closeness_bipartite(make_complete_bipartite(5, 5));
  CHECK(bip.exact);
  CHECK(bip.epsilon == doctest::Approx(0.0));

  auto k10 = closeness_two_cliques(make_complete(10));
  CHECK(k10.epsilon == doctest::Approx(0.25));  // balanced cut of K_10 has 25 edges
}

TEST_CASE("exact closeness agrees with the serial brute force") {
  Rng rng(707);
  for (int rep = 0; rep < 10; ++rep) {
    int n = rng.range(4, 13);
    Graph g = random_graph(n, 0.5, rng);
    auto fast_cut = closeness_two_cliques(g);
    auto slow_cut = serial::closeness_two_cliques_exact(g);
    CHECK(fast_cut.epsilon == doctest::Approx(slow_cut.epsilon));
    auto fast_in = closeness_bipartite(g);
    auto slow_in = serial::closeness_bipartite_exact(g);
    CHECK(fast_in.epsilon == doctest::Approx(slow_in.epsilon));
  }
}

TEST_CASE("annealing closeness finds planted structure") {
  // n = 24 exceeds the exact cutoff; the planted optimum is zero
  auto tc = closeness_two_cliques(two_cliques(12), 17);
  CHECK_FALSE(tc.exact);
  CHECK(tc.epsilon == doctest::Approx(0.0));

  auto bip = closeness_bipartite(make_complete_bipartite(12, 12), 17);
  CHECK_FALSE(bip.exact);
  CHECK(bip.epsilon == doctest::Approx(0.0));
}

TEST_CASE("classify on the three model families") {
  auto a = classify(make_complete(10), 0.2, 0.05);
  CHECK(a.kind == StructureKind::expander);

  auto b = classify(two_cliques(8), 0.1, 0.05);
  CHECK(b.kind == StructureKind::close_two_cliques);
  CHECK(b.parameter == doctest::Approx(0.0));

  auto c = classify(make_complete_bipartite(8, 8), 0.1, 0.05);
  CHECK(c.kind == StructureKind::close_bipartite);
}

TEST_CASE("classify determinism") {
  Rng rng(42);
  Graph g = random_graph(40, 0.55, rng);
  auto r1 = classify(g, 0.05, 0.01, 9);
  auto r2 = classify(g, 0.05, 0.01, 9);
  CHECK(r1.kind == r2.kind);
  CHECK(r1.parameter == doctest::Approx(r2.parameter));
  if (!r1.witness.empty()) CHECK(r1.witness[0] == r2.witness[0]);
}

TEST_CASE("m-extremal finder") {
  SUBCASE("complete tripartite is type 2") {
    Graph g(15);
    for (int u = 0; u < 15; ++u)
      for (int v = u + 1; v < 15; ++v)
        if (u / 5 != v / 5) g.add_edge(u, v);
    auto rep = find_m_extremal(g, 1);
    REQUIRE(rep.has_value());
    CHECK(rep->kind == StructureKind::extremal_type2);
    CHECK(rep->exact);
    CHECK(g.edge_count_within(rep->witness[0]) == 0);
    CHECK(g.edge_count_within(rep->witness[1]) == 0);
    CHECK_FALSE(rep->witness[0].intersects(rep->witness[1]));
  }
  SUBCASE("two cliques joined through a middle block are type 1") {
    Graph g(15);
    auto block = [](int v) { return v / 5; };
    for (int u = 0; u < 15; ++u)
      for (int v = u + 1; v < 15; ++v) {
        if (block(u) == block(v) && block(u) != 1) g.add_edge(u, v);
        if (block(u) == 1 || block(v) == 1) g.add_edge(u, v);
      }
    auto rep = find_m_extremal(g, 1);
    REQUIRE(rep.has_value());
    CHECK(rep->kind == StructureKind::extremal_type1);
    CHECK(g.edge_count_between(rep->witness[0], rep->witness[1]) == 0);
  }
  SUBCASE("K_12 is not 1-extremal") {
    CHECK_FALSE(find_m_extremal(make_complete(12), 1).has_value());
  }
  SUBCASE("heuristic regime finds planted tripartite structure") {
    Graph g(60);
    for (int u = 0; u < 60; ++u)
      for (int v = u + 1; v < 60; ++v)
        if (u / 20 != v / 20) g.add_edge(u, v);
    auto rep = find_m_extremal(g, 2, 5);
    REQUIRE(rep.has_value());
    CHECK(rep->kind == StructureKind::extremal_type2);
    CHECK_FALSE(rep->exact);
  }
}

TEST_CASE("nonadjacent pair finder") {
  Graph g = two_cliques(10);
  auto disjoint = find_nonadjacent_pair(g, 8, true);
  REQUIRE(disjoint.has_value());
  CHECK(g.edge_count_between(disjoint->first, disjoint->second) == 0);

  auto loose = find_nonadjacent_pair(g, 10, false);
  REQUIRE(loose.has_value());
  bool clean = true;
  g.for_each_edge([&](int a, int b) {
    if ((loose->first.contains(a) && loose->second.contains(b)) ||
        (loose->second.contains(a) && loose->first.contains(b)))
      clean = false;
  });
  CHECK(clean);

  CHECK_FALSE(find_nonadjacent_pair(make_complete(12), 3, false).has_value());
}

TEST_CASE("vortex sampling, min-degree flavor") {
  Graph g = make_complete(200);
  auto v = vortex_sample(g, VortexFlavor::min_degree, 0.9, 0.3, 10, 1);
  REQUIRE(v.has_value());
  CHECK(v->levels.size() >= 3);
  CHECK(v->levels[1].size() == 60);  // floor(0.3 * 200)
  CHECK(v->levels.back().size() == 10);
  CHECK(validate_vortex(g, *v));

  Rng rng(99);
  Graph r = random_graph(300, 0.75, rng);
  auto vr = vortex_sample(r, VortexFlavor::min_degree, 0.6, 0.25, 12, 7);
  REQUIRE(vr.has_value());
  CHECK(validate_vortex(r, *vr));
  CHECK(vr->levels.back().size() == 12);
}

TEST_CASE("vortex sampling, expander flavor") {
  Rng rng(123);
  Graph g = random_graph(200, 0.6, rng);
  REQUIRE(is_expander(g, 0.15));
  auto v = vortex_sample(g, VortexFlavor::expander, 0.15, 0.3, 12, 3);
  REQUIRE(v.has_value());
  CHECK(validate_vortex(g, *v));
}

TEST_CASE("vortex sampling, bipartite flavor") {
  Rng rng(321);
  int half = 80;
  Graph g(2 * half);
  for (int a = 0; a < half; ++a)
    for (int b = half; b < 2 * half; ++b)
      if (rng.chance(0.8)) g.add_edge(a, b);
  Bipartition sides{VertexSet(2 * half), VertexSet(2 * half)};
  for (int a = 0; a < half; ++a) sides.a.insert(a);
  for (int b = half; b < 2 * half; ++b) sides.b.insert(b);
  auto v = vortex_sample(g, VortexFlavor::bipartite, 0.7, 0.3, 12, 5, 50, &sides);
  REQUIRE(v.has_value());
  CHECK(validate_vortex(g, *v));
  CHECK((v->levels.back() & sides.a).size() == 6);
  CHECK((v->levels.back() & sides.b).size() == 6);
}

TEST_CASE("vortex validation rejects corrupted vortices") {
  Graph g = make_complete(100);
  auto v = vortex_sample(g, VortexFlavor::min_degree, 0.9, 0.3, 8, 1);
  REQUIRE(v.has_value());
  REQUIRE(validate_vortex(g, *v));

  Vortex broken = *v;
  int moved = broken.levels[1].first();
  broken.levels[1].erase(moved);
  CHECK_FALSE(validate_vortex(g, broken));  // size rule broken

  Vortex swapped = *v;
  int inside = swapped.levels.back().first();
  swapped.levels.back().erase(inside);
  VertexSet outside_l1 = swapped.levels[1].complement();
  swapped.levels.back().insert(outside_l1.first());
  CHECK_FALSE(validate_vortex(g, swapped));  // containment broken
}

TEST_CASE("vortex sampling determinism and retry exhaustion") {
  Graph g = make_complete(120);
  auto v1 = vortex_sample(g, VortexFlavor::min_degree, 0.8, 0.25, 6, 42);
  auto v2 = vortex_sample(g, VortexFlavor::min_degree, 0.8, 0.25, 6, 42);
  REQUIRE(v1.has_value());
  REQUIRE(v2.has_value());
  REQUIRE(v1->levels.size() == v2->levels.size());
  for (size_t i = 0; i < v1->levels.size(); ++i)
    CHECK(v1->levels[i] == v2->levels[i]);

  // an empty graph cannot satisfy any degree level
  Graph empty(100);
  CHECK_FALSE(
      vortex_sample(empty, VortexFlavor::min_degree, 0.5, 0.3, 6, 1, 5).has_value());
}
