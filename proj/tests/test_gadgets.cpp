#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cycledec/gadgets.hpp"
#include "cycledec/graph.hpp"
#include "cycledec/rng.hpp"

using namespace cycledec;

namespace {

Graph bowtie() {
  Graph g(5);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(0, 2);
  g.add_edge(2, 3);
  g.add_edge(3, 4);
  g.add_edge(2, 4);
  return g;
}

// Connected 2-divisible graph: union of random cycles through a common
// vertex pool, retried until connected.
Graph random_even_connected(int n, int max_edges, Rng& rng) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    Graph g(n);
    std::vector<int> ids(n);
    for (int i = 0; i < n; ++i) ids[i] = i;
    int cycles = rng.range(1, 4);
    for (int c = 0; c < cycles; ++c) {
      rng.shuffle(ids);
      int len = rng.range(3, n + 1);
      for (int i = 0; i < len; ++i) g.toggle_edge(ids[i], ids[(i + 1) % len]);
    }
    if (g.edge_count() == 0 || g.edge_count() > max_edges) continue;
    if (!is_two_divisible(g) || !g.support_connected()) continue;
    return g;
  }
  return make_cycle(4);
}

void check_transformer(const Graph& h, const TransformerBundle& b, int k) {
  // E(T), E(H), E(C) pairwise disjoint
  b.t.for_each_edge([&](int u, int v) {
    CHECK_FALSE((u < h.order() && v < h.order() && h.has_edge(u, v)));
    CHECK_FALSE(b.c.has_edge(u, v));
  });
  h.for_each_edge([&](int u, int v) { CHECK_FALSE(b.c.has_edge(u, v)); });

  Graph h_pad(b.universe_end);
  h.for_each_edge([&](int u, int v) { h_pad.add_edge(u, v); });
  Graph with_h = b.t.union_with(h_pad);
  Graph with_c = b.t.union_with(b.c);
  CHECK(verify_decomposition(with_h, b.schedule_with_h).ok());
  CHECK(verify_decomposition(with_c, b.schedule_with_c).ok());
  for (const auto& cyc : b.schedule_with_h.cycles)
    CHECK(static_cast<int>(cyc.size()) == 2 * k);
}

}  // namespace

TEST_CASE("euler homomorphism basics") {
  SUBCASE("triangle maps from a 3-cycle") {
    auto hom = euler_homomorphism(make_cycle(3));
    CHECK(hom.cycle_length() == 3);
    CHECK(validate_edge_bijective(make_cycle(3), hom));
  }
  SUBCASE("bowtie maps from a 6-cycle visiting the cut vertex twice") {
    Graph h = bowtie();
    auto hom = euler_homomorphism(h);
    CHECK(hom.cycle_length() == 6);
    CHECK(validate_edge_bijective(h, hom));
    int visits = 0;
    for (int v : hom.tour)
      if (v == 2) ++visits;
    CHECK(visits == 2);
  }
  SUBCASE("K_5 maps from a 10-cycle") {
    auto hom = euler_homomorphism(make_complete(5));
    CHECK(hom.cycle_length() == 10);
    CHECK(validate_edge_bijective(make_complete(5), hom));
  }
  SUBCASE("rejects bad input") {
    Graph two_edges(4);
    two_edges.add_edge(0, 1);
    two_edges.add_edge(2, 3);
    CHECK_THROWS_AS(euler_homomorphism(two_edges), std::invalid_argument);
    Graph k2(2);
    k2.add_edge(0, 1);
    CHECK_THROWS_AS(euler_homomorphism(k2), std::invalid_argument);
    CHECK_THROWS_AS(euler_homomorphism(Graph(3)), std::invalid_argument);
  }
}

TEST_CASE("euler homomorphism is edge-bijective on random even graphs") {
  Rng rng(42);
  for (int rep = 0; rep < 50; ++rep) {
    Graph h = random_even_connected(rng.range(4, 10), 20, rng);
    auto hom = euler_homomorphism(h);
    CHECK(validate_edge_bijective(h, hom));
    CHECK(hom.cycle_length() == h.edge_count());
  }
}

TEST_CASE("flowers") {
  Graph f12 = make_flower(1, 2);
  CHECK(f12.order() == 4);
  CHECK(f12.edge_count() == 4);
  CHECK(verify_decomposition(f12, flower_decomposition(1, 2)).ok());

  Graph f22 = make_flower(2, 2);
  CHECK(f22.order() == 7);
  CHECK(f22.edge_count() == 8);
  CHECK(verify_decomposition(f22, flower_decomposition(2, 2)).ok());

  for (int i : {1, 2, 3})
    for (int k : {2, 4, 5}) {
      Graph f = make_flower(i, k);
      CHECK(f.order() == i * (2 * k - 1) + 1);
      CHECK(f.edge_count() == 2 * k * i);
      CHECK(is_cycle_divisible(f, 2 * k));
      CHECK(verify_decomposition(f, flower_decomposition(i, k)).ok());
    }
}

TEST_CASE("connectors") {
  SUBCASE("connected input needs nothing") {
    CHECK(make_connector(make_cycle(4), 2, 4).edge_count() == 0);
  }
  SUBCASE("two disjoint edges, k = 2") {
    Graph h(4);
    h.add_edge(0, 1);
    h.add_edge(2, 3);
    Graph con = make_connector(h, 2, 4);
    CHECK(con.edge_count() == 4);        // one C_4
    CHECK(con.order() == 6);             // two fresh vertices
    Graph joined = h.union_with(con);
    CHECK(joined.support_connected());
  }
  SUBCASE("c components need c-1 cycles and stay small") {
    for (int k : {2, 4}) {
      Graph h = make_disjoint_union(make_cycle(3),
                                    make_disjoint_union(make_cycle(3), make_cycle(4)));
      Graph con = make_connector(h, k, h.order());
      CHECK(con.edge_count() == 2 * (2 * k));
      Graph joined = h.union_with(con);
      CHECK(joined.support_connected());
      CHECK(is_cycle_divisible(con, 2 * k));
      // |H ∪ H^con| <= (2k-1)|H|
      CHECK(joined.support().size() <= (2 * k - 1) * h.support().size());
    }
  }
}

TEST_CASE("generic transformer on a fixed cycle") {
  Graph h = make_cycle(8);
  auto hom = euler_homomorphism(h);
  auto b = generic_transformer(h, hom, 4, h.order());
  check_transformer(h, b, 4);
  // |V(T)| = (2k-2) e(H) + |V(H)|, within the stated 2k e(H) budget
  CHECK(b.order() == 6 * 8 + 8);
  CHECK(b.order() <= 2 * 4 * 8);
}

TEST_CASE("generic transformer on the bowtie, k = 5") {
  Graph h = bowtie();
  auto hom = euler_homomorphism(h);
  auto b = generic_transformer(h, hom, 5, h.order());
  check_transformer(h, b, 5);
  CHECK(b.order() == 8 * 6 + 5);
  CHECK_THROWS_AS(generic_transformer(h, hom, 2, h.order()), std::invalid_argument);
}

TEST_CASE("generic transformer schedules verify on random inputs") {
  Rng rng(7331);
  for (int rep = 0; rep < 25; ++rep) {
    Graph h = random_even_connected(rng.range(4, 9), 12, rng);
    for (int k : {3, 4, 5}) {
      auto hom = euler_homomorphism(h);
      auto b = generic_transformer(h, hom, k, h.order());
      check_transformer(h, b, k);
      CHECK(b.order() ==
            (2 * k - 2) * h.edge_count() + h.support().size());
    }
  }
}

TEST_CASE("length-four transformer") {
  SUBCASE("on C_4 the vertex count meets the 5 e(H) budget exactly") {
    Graph h = make_cycle(4);
    auto hom = euler_homomorphism(h);
    auto b = c4_transformer(h, hom, 4);
    check_transformer(h, b, 2);
    CHECK(b.order() == 20);
    CHECK(b.order() == 5 * h.edge_count());
  }
  SUBCASE("rejects non-divisible input") {
    Graph h = make_cycle(6);  // 6 edges, not divisible by 4
    auto hom = euler_homomorphism(h);
    CHECK_THROWS_AS(c4_transformer(h, hom, 6), std::invalid_argument);
  }
  SUBCASE("random divisible inputs") {
    Rng rng(99);
    int built = 0;
    for (int rep = 0; rep < 60 && built < 12; ++rep) {
      Graph h = random_even_connected(rng.range(4, 9), 16, rng);
      if (h.edge_count() % 4 != 0) continue;
      ++built;
      auto hom = euler_homomorphism(h);
      auto b = c4_transformer(h, hom, h.order());
      check_transformer(h, b, 2);
      CHECK(b.order() <= 5 * h.edge_count());
    }
    CHECK(built >= 8);
  }
}

TEST_CASE("divisible-subgraph enumeration") {
  // K_4: even subgraphs are the empty graph, 4 triangles, 3 four-cycles;
  // only the empty graph and the four-cycles are C_4-divisible
  auto subs = enumerate_divisible_subgraphs(make_complete(4), 4, 100);
  CHECK(subs.size() == 4);
  int empties = 0, cycles4 = 0;
  for (const Graph& s : subs) {
    if (s.edge_count() == 0) ++empties;
    if (s.edge_count() == 4) ++cycles4;
    CHECK(is_two_divisible(s));
    CHECK(s.edge_count() % 4 == 0);
  }
  CHECK(empties == 1);
  CHECK(cycles4 == 3);

  // deterministic order
  auto again = enumerate_divisible_subgraphs(make_complete(4), 4, 100);
  for (size_t i = 0; i < subs.size(); ++i) CHECK(subs[i] == again[i]);
}

TEST_CASE("abstract absorber for |U| = 4, k = 2") {
  VertexSet u = VertexSet::of(4, {0, 1, 2, 3});
  AbsorberBundle bundle = build_absorber(u, 2);
  REQUIRE(bundle.entries.size() == 4);
  CHECK(is_cycle_divisible(bundle.a_star, 4));
  CHECK(bundle.a_star.support().size() <= 1 << 16);  // 2^(m^2)

  int empties = 0;
  for (size_t i = 0; i < bundle.entries.size(); ++i) {
    const auto& e = bundle.entries[i];
    if (e.leftover.edge_count() == 0) {
      ++empties;
      CHECK(e.absorber.edge_count() == 0);
    }
    // A_i alone decomposes
    CHECK(verify_decomposition(e.absorber, e.schedule_alone).ok());
    // A_i ∪ H_i decomposes
    Graph unioned = e.absorber.union_with(e.leftover);
    CHECK(verify_decomposition(unioned, e.schedule_with_leftover).ok());
    // the full bundle absorbs this leftover
    Graph star_union = bundle.a_star.union_with(e.leftover);
    CHECK(verify_decomposition(star_union, bundle.absorb(i)).ok());
  }
  CHECK(empties == 1);
}

TEST_CASE("abstract absorber for k = 4 on a restricted leftover space") {
  VertexSet u = VertexSet::of(8, {0, 1, 2, 3, 4, 5, 6, 7});
  Graph ring = make_cycle(8);
  AbsorberOptions opts;
  opts.leftover_host = &ring;
  AbsorberBundle bundle = build_absorber(u, 4, opts);
  REQUIRE(bundle.entries.size() == 2);  // empty and the full 8-cycle
  for (size_t i = 0; i < bundle.entries.size(); ++i) {
    const auto& e = bundle.entries[i];
    CHECK(verify_decomposition(e.absorber, e.schedule_alone).ok());
    CHECK(verify_decomposition(e.absorber.union_with(e.leftover),
                               e.schedule_with_leftover)
              .ok());
    CHECK(verify_decomposition(bundle.a_star.union_with(e.leftover), bundle.absorb(i))
              .ok());
  }
}

TEST_CASE("abstract absorber handles disconnected leftovers") {
  // two disjoint triangles: C_6-divisible only as a whole, so the leftover
  // space is {empty, both triangles} and the connector must fire
  VertexSet u = VertexSet::of(6, {0, 1, 2, 3, 4, 5});
  Graph triangles = make_disjoint_union(make_cycle(3), make_cycle(3));
  AbsorberOptions opts;
  opts.leftover_host = &triangles;
  AbsorberBundle bundle = build_absorber(u, 3, opts);
  REQUIRE(bundle.entries.size() == 2);
  bool saw_disconnected = false;
  for (size_t i = 0; i < bundle.entries.size(); ++i) {
    const auto& e = bundle.entries[i];
    if (e.leftover.edge_count() > 0 && !e.leftover.support_connected())
      saw_disconnected = true;
    CHECK(verify_decomposition(e.absorber.union_with(e.leftover),
                               e.schedule_with_leftover)
              .ok());
    CHECK(verify_decomposition(e.absorber, e.schedule_alone).ok());
  }
  CHECK(saw_disconnected);
}

TEST_CASE("embedded absorber in a dense host, k = 2") {
  Graph host_graph = make_complete(60);
  Graph used(60);
  EmbedHost host;
  host.g = &host_graph;
  host.used = &used;
  host.banned = VertexSet::of(60, {0, 1, 2, 3});
  VertexSet u = VertexSet::of(60, {0, 1, 2, 3});
  AbsorberOptions opts;
  Graph complete_u(60);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) complete_u.add_edge(i, j);
  opts.leftover_host = &complete_u;
  opts.host = &host;
  AbsorberBundle bundle = build_absorber(u, 2, opts);
  REQUIRE(bundle.entries.size() == 4);

  // A* draws only unbanned host edges: nothing inside U
  CHECK(bundle.a_star.edge_count_within(u) == 0);
  bundle.a_star.for_each_edge(
      [&](int a, int b) { CHECK(host_graph.has_edge(a, b)); });

  for (size_t i = 0; i < bundle.entries.size(); ++i) {
    const auto& e = bundle.entries[i];
    CHECK(verify_decomposition(e.absorber, e.schedule_alone).ok());
    CHECK(verify_decomposition(e.absorber.union_with(e.leftover),
                               e.schedule_with_leftover)
              .ok());
    CHECK(verify_decomposition(bundle.a_star.union_with(e.leftover), bundle.absorb(i))
              .ok());
  }
}

TEST_CASE("embedded absorber in a dense host, k = 4") {
  Graph host_graph = make_complete(200);
  Graph used(200);
  EmbedHost host;
  host.g = &host_graph;
  host.used = &used;
  VertexSet u(200);
  for (int i = 0; i < 8; ++i) u.insert(i);
  host.banned = u;
  Graph ring(200);
  for (int i = 0; i < 8; ++i) ring.add_edge(std::min(i, (i + 1) % 8), std::max(i, (i + 1) % 8));
  AbsorberOptions opts;
  opts.leftover_host = &ring;
  opts.host = &host;
  AbsorberBundle bundle = build_absorber(u, 4, opts);
  REQUIRE(bundle.entries.size() == 2);
  for (size_t i = 0; i < bundle.entries.size(); ++i) {
    const auto& e = bundle.entries[i];
    CHECK(verify_decomposition(e.absorber, e.schedule_alone).ok());
    CHECK(verify_decomposition(e.absorber.union_with(e.leftover),
                               e.schedule_with_leftover)
              .ok());
  }
  CHECK(bundle.a_star.edge_count_within(u) == 0);
}

TEST_CASE("embedded absorber reports failure in a hostile host") {
  // a sparse host cannot fit the gadgets
  Graph host_graph = make_cycle(20);
  Graph used(20);
  EmbedHost host;
  host.g = &host_graph;
  host.used = &used;
  host.banned = VertexSet::of(20, {0, 1, 2, 3});
  VertexSet u = VertexSet::of(20, {0, 1, 2, 3});
  Graph complete_u(20);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) complete_u.add_edge(i, j);
  AbsorberOptions opts;
  opts.leftover_host = &complete_u;
  opts.host = &host;
  CHECK_THROWS_AS(build_absorber(u, 2, opts), EmbeddingFailure);
}
