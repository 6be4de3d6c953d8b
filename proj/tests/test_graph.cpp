#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "cycledec/graph.hpp"
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

}  // namespace

TEST_CASE("vertex set basics") {
  VertexSet s(130);
  CHECK(s.empty());
  s.insert(0);
  s.insert(64);
  s.insert(129);
  CHECK(s.size() == 3);
  CHECK(s.contains(64));
  CHECK_FALSE(s.contains(63));
  CHECK(s.first() == 0);
  s.erase(0);
  CHECK(s.first() == 64);
  CHECK(s.complement().size() == 128);
  CHECK((s & VertexSet::of(130, {64, 65})).size() == 1);
  CHECK(s.to_vector() == std::vector<int>{64, 129});
}

TEST_CASE("graph adjacency and degrees") {
  Graph g(70);
  g.add_edge(0, 69);
  g.add_edge(0, 1);
  g.add_edge(1, 69);
  CHECK(g.edge_count() == 3);
  CHECK(g.has_edge(69, 0));
  CHECK(g.degree(0) == 2);
  CHECK(g.common_degree(0, 1) == 1);  // 69
  g.add_edge(0, 1);                   // duplicate insert is a no-op
  CHECK(g.edge_count() == 3);
  g.remove_edge(0, 1);
  CHECK(g.edge_count() == 2);
  CHECK_FALSE(g.has_edge(1, 0));
  CHECK_THROWS_AS(g.add_edge(3, 3), std::invalid_argument);
  CHECK_THROWS_AS(g.add_edge(0, 70), std::invalid_argument);
}

TEST_CASE("edge iteration matches a naive matrix") {
  Rng rng(7);
  for (int rep = 0; rep < 10; ++rep) {
    int n = 1 + rng.range(1, 100);
    Graph g = random_graph(n, 0.3, rng);
    std::vector<std::vector<bool>> mat(n, std::vector<bool>(n, false));
    long long m = 0;
    g.for_each_edge([&](int u, int v) {
      REQUIRE(u < v);
      REQUIRE_FALSE(mat[u][v]);
      mat[u][v] = true;
      ++m;
    });
    CHECK(m == g.edge_count());
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) CHECK(mat[u][v] == g.has_edge(u, v));
  }
}

TEST_CASE("divisibility predicates") {
  Graph k2(2);
  k2.add_edge(0, 1);
  CHECK_FALSE(is_two_divisible(k2));
  CHECK(is_two_divisible(make_cycle(6)));
  CHECK(is_two_divisible(make_complete(5)));

  CHECK_FALSE(is_cycle_divisible(make_complete(5), 4));  // e = 10
  CHECK(is_cycle_divisible(make_cycle(6), 6));
  Graph two_k5 = make_disjoint_union(make_complete(5), make_complete(5));
  CHECK(is_cycle_divisible(two_k5, 4));  // e = 20, degrees 4
}

TEST_CASE("bipartite minimum degree fraction") {
  Graph k44 = make_complete_bipartite(4, 4);
  Bipartition p{VertexSet::of(8, {0, 1, 2, 3}), VertexSet::of(8, {4, 5, 6, 7})};
  CHECK(bip_min_degree_fraction(k44, p) == doctest::Approx(1.0));

  for (int i = 0; i < 4; ++i) k44.remove_edge(i, 4 + i);  // perfect matching
  CHECK(bip_min_degree_fraction(k44, p) == doctest::Approx(0.75));

  Graph c6 = make_cycle(6);
  Bipartition q{VertexSet::of(6, {0, 2, 4}), VertexSet::of(6, {1, 3, 5})};
  CHECK(bip_min_degree_fraction(c6, q) == doctest::Approx(2.0 / 3.0));

  Graph bad = make_complete_bipartite(2, 2);
  bad.add_edge(0, 1);  // edge inside a part
  Bipartition r{VertexSet::of(4, {0, 1}), VertexSet::of(4, {2, 3})};
  CHECK_THROWS_AS(bip_min_degree_fraction(bad, r), std::invalid_argument);
}

TEST_CASE("verify_decomposition") {
  Graph c4 = make_cycle(4);
  CycleDecomposition d;
  d.cycle_length = 4;
  d.cycles = {{0, 1, 2, 3}};
  CHECK(verify_decomposition(c4, d).ok());

  CycleDecomposition empty;
  empty.cycle_length = 4;
  auto r = verify_decomposition(c4, empty);
  CHECK_FALSE(r.ok());
  CHECK(r.error == VerifyResult::Error::uncovered_edge);

  CycleDecomposition doubled = d;
  doubled.cycles.push_back({0, 1, 2, 3});
  CHECK(verify_decomposition(c4, doubled).error == VerifyResult::Error::duplicate_edge);

  CycleDecomposition nonedge = d;
  Graph c5 = make_cycle(5);
  CHECK(verify_decomposition(c5, nonedge).error == VerifyResult::Error::bad_cycle);

  CycleDecomposition repeated;
  repeated.cycle_length = 4;
  repeated.cycles = {{0, 1, 0, 3}};
  CHECK(verify_decomposition(c4, repeated).error == VerifyResult::Error::bad_cycle);
}

TEST_CASE("verified decomposition covers exactly e(g) edges") {
  // verify_decomposition(g, d) accepting implies sum of lengths == e(g)
  Graph g = make_complete_bipartite(2, 2);
  CycleDecomposition d;
  d.cycle_length = 4;
  d.cycles = {{0, 2, 1, 3}};
  REQUIRE(verify_decomposition(g, d).ok());
  CHECK(static_cast<long long>(d.cycles.size()) * d.cycle_length == g.edge_count());
}

TEST_CASE("graph_minus and graph_without_vertices") {
  Graph k4 = make_complete(4);
  Graph c4 = make_cycle(4);
  Graph rest = graph_minus(k4, c4);
  CHECK(rest.edge_count() == 2);  // the two diagonals form a perfect matching
  CHECK(rest.has_edge(0, 2));
  CHECK(rest.has_edge(1, 3));

  std::vector<int> kept;
  Graph k3 = graph_without_vertices(k4, VertexSet::of(4, {3}), &kept);
  CHECK(k3.order() == 3);
  CHECK(k3.edge_count() == 3);
  CHECK(kept == std::vector<int>{0, 1, 2});

  Graph big(3);
  CHECK_THROWS_AS(graph_minus(k3, make_complete(5)), std::invalid_argument);
}

TEST_CASE("minus then union restores the original edge set") {
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    int n = rng.range(2, 40);
    Graph g = random_graph(n, 0.4, rng);
    Graph h = random_graph(n, 0.3, rng);
    Graph diff = graph_minus(g, h);
    // e(G − H) = e(G) − e(G ∩ H)
    long long shared = 0;
    g.for_each_edge([&](int u, int v) {
      if (h.has_edge(u, v)) ++shared;
    });
    CHECK(diff.edge_count() == g.edge_count() - shared);
    // restore: (G − H) ∪ (G ∩ H) == G
    Graph inter(n);
    g.for_each_edge([&](int u, int v) {
      if (h.has_edge(u, v)) inter.add_edge(u, v);
    });
    CHECK(diff.union_with(inter) == g);
  }
}

TEST_CASE("components and support connectivity") {
  Graph g = make_disjoint_union(make_cycle(3), make_cycle(4));
  auto comps = g.components();
  CHECK(comps.size() == 2);
  CHECK_FALSE(g.support_connected());
  g.add_edge(0, 5);
  CHECK(g.support_connected());
  CHECK(g.components().size() == 1);
}

TEST_CASE("edge list io round-trips byte-exactly") {
  Rng rng(23);
  Graph g = random_graph(37, 0.2, rng);
  std::ostringstream first;
  write_edge_list(first, g);
  std::istringstream back(first.str());
  Graph h = read_edge_list(back);
  CHECK(h == g);
  std::ostringstream second;
  write_edge_list(second, h);
  CHECK(first.str() == second.str());
}

TEST_CASE("edge list parse errors") {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return read_edge_list(in);
  };
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("2\n"), ParseError);
  CHECK_THROWS_AS(parse("2 1\n1 0\n"), ParseError);   // u < v violated
  CHECK_THROWS_AS(parse("2 2\n0 1\n0 1\n"), ParseError);
  CHECK_THROWS_AS(parse("2 1\n0 2\n"), ParseError);   // v out of range
  CHECK_THROWS_AS(parse("3 1\n"), ParseError);        // missing edge line
  CHECK(parse("3 1\n0 2\n").edge_count() == 1);
}

TEST_CASE("certificate io round-trips byte-exactly") {
  CycleDecomposition d;
  d.cycle_length = 4;
  d.cycles = {{0, 1, 2, 3}, {4, 5, 6, 7}};
  std::ostringstream first;
  write_certificate(first, d);
  CHECK(first.str() == "4 2\n0 1 2 3\n4 5 6 7\n");
  std::istringstream back(first.str());
  CycleDecomposition e = read_certificate(back);
  std::ostringstream second;
  write_certificate(second, e);
  CHECK(first.str() == second.str());

  std::istringstream bad("4 1\n0 1 2\n");
  CHECK_THROWS_AS(read_certificate(bad), ParseError);
}

TEST_CASE("ceil_fraction snaps near-integers") {
  CHECK(ceil_fraction(0.3, 10) == 3);
  CHECK(ceil_fraction(0.2, 15) == 3);   // 0.2 * 15 is 3.0000000000000004 in fp
  CHECK(ceil_fraction(0.31, 10) == 4);
  CHECK(ceil_fraction(0.5, 7) == 4);
  CHECK(ceil_fraction(0.0, 10) == 0);
}
