#include "cycledec/gadgets.hpp"

#include <algorithm>

namespace cycledec {

EdgeBijectiveHom euler_homomorphism(const Graph& h) {
  if (h.edge_count() == 0)
    throw std::invalid_argument("euler_homomorphism: no edges");
  if (!is_two_divisible(h))
    throw std::invalid_argument("euler_homomorphism: odd degree");
  if (!h.support_connected())
    throw std::invalid_argument("euler_homomorphism: disconnected support");

  // Hierholzer, iterative
  Graph remaining = h;
  std::vector<int> stack = {remaining.support().first()};
  std::vector<int> tour;
  while (!stack.empty()) {
    int v = stack.back();
    if (remaining.degree(v) > 0) {
      int u = remaining.neighbors(v).first();
      remaining.remove_edge(v, u);
      stack.push_back(u);
    } else {
      tour.push_back(v);
      stack.pop_back();
    }
  }
  tour.pop_back();  // closed tour: last vertex repeats the first
  return EdgeBijectiveHom{std::move(tour)};
}

bool validate_edge_bijective(const Graph& h, const EdgeBijectiveHom& hom) {
  int len = hom.cycle_length();
  if (len != h.edge_count()) return false;
  Graph seen(h.order());
  for (int i = 0; i < len; ++i) {
    int u = hom.tour[i];
    int v = hom.tour[(i + 1) % len];
    if (u == v || !h.has_edge(u, v)) return false;
    if (seen.has_edge(u, v)) return false;
    seen.add_edge(u, v);
  }
  return seen.edge_count() == h.edge_count();
}

Graph make_flower(int copies, int k) {
  if (copies < 1 || k < 2) throw std::invalid_argument("make_flower: bad parameters");
  Graph g(copies * (2 * k - 1) + 1);
  for (int p = 0; p < copies; ++p) {
    int base = 1 + p * (2 * k - 1);
    g.add_edge(0, base);
    for (int i = 0; i + 1 < 2 * k - 1; ++i) g.add_edge(base + i, base + i + 1);
    g.add_edge(base + 2 * k - 2, 0);
  }
  return g;
}

CycleDecomposition flower_decomposition(int copies, int k) {
  CycleDecomposition d;
  d.cycle_length = 2 * k;
  for (int p = 0; p < copies; ++p) {
    std::vector<int> cyc = {0};
    int base = 1 + p * (2 * k - 1);
    for (int i = 0; i < 2 * k - 1; ++i) cyc.push_back(base + i);
    d.cycles.push_back(std::move(cyc));
  }
  return d;
}

namespace {

Graph shift_ids(const Graph& g, int offset, int universe) {
  Graph out(universe);
  g.for_each_edge([&](int u, int v) { out.add_edge(u + offset, v + offset); });
  return out;
}

CycleDecomposition shift_ids(const CycleDecomposition& d, int offset) {
  CycleDecomposition out;
  out.cycle_length = d.cycle_length;
  for (const auto& cyc : d.cycles) {
    std::vector<int> c;
    c.reserve(cyc.size());
    for (int v : cyc) c.push_back(v + offset);
    out.cycles.push_back(std::move(c));
  }
  return out;
}

// Both transformer builders share this: given the instantiated cycle
// vertices (the C role) and the target graph h (the H role), emit T and the
// two schedules. `paths` must already be placed; see callers.
struct GenericParts {
  // paths[i] = interior vertices of P_i (length k, u_i -> t_i), then Q_i
  // (length k-1, u_{i+1} -> t_i)
  std::vector<std::vector<int>> p_interior;
  std::vector<std::vector<int>> q_interior;
};

TransformerBundle assemble_generic(const Graph& h, const EdgeBijectiveHom& hom,
                                   int k, const std::vector<int>& cycle,
                                   const GenericParts& parts, int universe) {
  int len = hom.cycle_length();
  TransformerBundle b;
  b.cycle = cycle;
  b.universe_end = universe;
  b.t = Graph(universe);
  b.c = Graph(universe);
  for (int i = 0; i < len; ++i) b.c.add_edge(cycle[i], cycle[(i + 1) % len]);

  auto add_path = [&](int from, const std::vector<int>& interior, int to) {
    int prev = from;
    for (int x : interior) {
      b.t.add_edge(prev, x);
      prev = x;
    }
    b.t.add_edge(prev, to);
  };
  for (int i = 0; i < len; ++i) {
    add_path(cycle[i], parts.p_interior[i], hom.tour[i]);
    add_path(cycle[(i + 1) % len], parts.q_interior[i], hom.tour[i]);
  }

  b.schedule_with_c.cycle_length = 2 * k;
  b.schedule_with_h.cycle_length = 2 * k;
  for (int i = 0; i < len; ++i) {
    int j = (i + 1) % len;
    // u_i u_{i+1}, then Q_i forwards to t_i, then P_i backwards to u_i
    std::vector<int> wc = {cycle[i], cycle[j]};
    wc.insert(wc.end(), parts.q_interior[i].begin(), parts.q_interior[i].end());
    wc.push_back(hom.tour[i]);
    wc.insert(wc.end(), parts.p_interior[i].rbegin(), parts.p_interior[i].rend());
    b.schedule_with_c.cycles.push_back(std::move(wc));

    // t_i t_{i+1}, then P_{i+1} backwards to u_{i+1}, then Q_i forwards to t_i
    std::vector<int> wh = {hom.tour[i], hom.tour[j]};
    wh.insert(wh.end(), parts.p_interior[j].rbegin(), parts.p_interior[j].rend());
    wh.push_back(cycle[j]);
    wh.insert(wh.end(), parts.q_interior[i].begin(), parts.q_interior[i].end());
    b.schedule_with_h.cycles.push_back(std::move(wh));
  }
  (void)h;
  return b;
}

struct C4Parts {
  std::vector<int> z1;  // z^{u_i, u_{i+1}} per cycle edge i
  std::vector<int> z2;  // z^{u_{i+1}, u_i} per cycle edge i
  std::vector<int> w;   // hub per cycle vertex i
};

TransformerBundle assemble_c4(const EdgeBijectiveHom& hom,
                              const std::vector<int>& cycle, const C4Parts& parts,
                              int universe) {
  int len = hom.cycle_length();
  TransformerBundle b;
  b.cycle = cycle;
  b.universe_end = universe;
  b.t = Graph(universe);
  b.c = Graph(universe);
  for (int i = 0; i < len; ++i) b.c.add_edge(cycle[i], cycle[(i + 1) % len]);

  for (int i = 0; i < len; ++i) {
    int j = (i + 1) % len;
    b.t.add_edge(cycle[i], parts.z1[i]);      // E1
    b.t.add_edge(cycle[j], parts.z2[i]);      // E1
    b.t.add_edge(parts.z1[i], parts.z2[i]);   // E2
    b.t.add_edge(hom.tour[i], parts.z1[i]);   // E3
    b.t.add_edge(hom.tour[j], parts.z2[i]);   // E3
    b.t.add_edge(parts.w[i], parts.z1[i]);    // E4
    b.t.add_edge(parts.w[j], parts.z2[i]);    // E4
  }

  b.schedule_with_c.cycle_length = 4;
  b.schedule_with_h.cycle_length = 4;
  for (int i = 0; i < len; ++i) {
    int j = (i + 1) % len;
    b.schedule_with_c.cycles.push_back({cycle[i], cycle[j], parts.z2[i], parts.z1[i]});
    b.schedule_with_h.cycles.push_back(
        {hom.tour[i], hom.tour[j], parts.z2[i], parts.z1[i]});
  }
  for (int i = 0; i < len; ++i) {
    int prev = (i + len - 1) % len;
    // hub cycles: the two cross vertices attached to cycle vertex i
    b.schedule_with_c.cycles.push_back(
        {hom.tour[i], parts.z1[i], parts.w[i], parts.z2[prev]});
    b.schedule_with_h.cycles.push_back(
        {cycle[i], parts.z1[i], parts.w[i], parts.z2[prev]});
  }
  return b;
}

}  // namespace

TransformerBundle generic_transformer(const Graph& h, const EdgeBijectiveHom& hom,
                                      int k, int fresh_id_start) {
  if (k < 3) throw std::invalid_argument("generic_transformer: k must be >= 3");
  if (!validate_edge_bijective(h, hom))
    throw std::invalid_argument("generic_transformer: invalid homomorphism");
  if (fresh_id_start < h.order())
    throw std::invalid_argument("generic_transformer: fresh ids overlap h");
  int len = hom.cycle_length();
  int next = fresh_id_start;
  std::vector<int> cycle(len);
  for (int i = 0; i < len; ++i) cycle[i] = next++;
  GenericParts parts;
  parts.p_interior.resize(len);
  parts.q_interior.resize(len);
  for (int i = 0; i < len; ++i) {
    for (int j = 0; j < k - 1; ++j) parts.p_interior[i].push_back(next++);
    for (int j = 0; j < k - 2; ++j) parts.q_interior[i].push_back(next++);
  }
  return assemble_generic(h, hom, k, cycle, parts, next);
}

TransformerBundle c4_transformer(const Graph& h, const EdgeBijectiveHom& hom,
                                 int fresh_id_start) {
  if (!is_cycle_divisible(h, 4))
    throw std::invalid_argument("c4_transformer: h must be C_4-divisible");
  if (!validate_edge_bijective(h, hom))
    throw std::invalid_argument("c4_transformer: invalid homomorphism");
  if (fresh_id_start < h.order())
    throw std::invalid_argument("c4_transformer: fresh ids overlap h");
  int len = hom.cycle_length();
  int next = fresh_id_start;
  std::vector<int> cycle(len);
  for (int i = 0; i < len; ++i) cycle[i] = next++;
  C4Parts parts;
  parts.z1.resize(len);
  parts.z2.resize(len);
  parts.w.resize(len);
  for (int i = 0; i < len; ++i) {
    parts.z1[i] = next++;
    parts.z2[i] = next++;
  }
  for (int i = 0; i < len; ++i) parts.w[i] = next++;
  return assemble_c4(hom, cycle, parts, next);
}

namespace {

struct ConnectorResult {
  Graph edges;
  CycleDecomposition cycles;
  int universe_end;
};

ConnectorResult connector_with_schedule(const Graph& h, int k, int fresh_id_start) {
  if (k < 2) throw std::invalid_argument("make_connector: k must be >= 2");
  std::vector<VertexSet> comps;
  for (const VertexSet& c : h.components())
    if (h.edge_count_within(c) > 0) comps.push_back(c);
  int joins = std::max(0, static_cast<int>(comps.size()) - 1);
  int universe = std::max(fresh_id_start, h.order()) + joins * (2 * k - 2);
  ConnectorResult res{Graph(universe), {}, universe};
  res.cycles.cycle_length = 2 * k;
  if (joins == 0) return res;
  int next = std::max(fresh_id_start, h.order());
  int u = comps[0].first();
  for (size_t c = 1; c < comps.size(); ++c) {
    int v = comps[c].first();
    // a 2k-cycle through u and v: two internally disjoint paths of length k
    std::vector<int> cyc = {u};
    for (int i = 0; i < k - 1; ++i) cyc.push_back(next++);
    cyc.push_back(v);
    for (int i = 0; i < k - 1; ++i) cyc.push_back(next++);
    for (size_t i = 0; i < cyc.size(); ++i)
      res.edges.add_edge(cyc[i], cyc[(i + 1) % cyc.size()]);
    res.cycles.cycles.push_back(std::move(cyc));
  }
  return res;
}

}  // namespace

Graph make_connector(const Graph& h, int k, int fresh_id_start) {
  return connector_with_schedule(h, k, fresh_id_start).edges;
}

std::vector<Graph> enumerate_divisible_subgraphs(const Graph& host, int L,
                                                 long long max_count) {
  // cycle space: fundamental cycles of the non-forest edges
  const auto edges = host.edges();
  const int m = static_cast<int>(edges.size());
  std::vector<int> parent(host.order(), -1), depth(host.order(), 0);
  Graph forest(host.order());
  {
    std::vector<bool> seen(host.order(), false);
    for (int root = 0; root < host.order(); ++root) {
      if (seen[root]) continue;
      std::vector<int> stack = {root};
      seen[root] = true;
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        host.for_each_neighbor(v, [&](int u) {
          if (!seen[u]) {
            seen[u] = true;
            parent[u] = v;
            depth[u] = depth[v] + 1;
            forest.add_edge(u, v);
            stack.push_back(u);
          }
        });
      }
    }
  }
  auto find_edge = [&](int u, int v) {
    auto it = std::lower_bound(edges.begin(), edges.end(),
                               std::make_pair(std::min(u, v), std::max(u, v)));
    return static_cast<int>(it - edges.begin());
  };
  std::vector<std::vector<uint64_t>> basis;  // edge-id bitsets
  const int words = (m + 63) / 64;
  for (int e = 0; e < m; ++e) {
    auto [u, v] = edges[e];
    if (forest.has_edge(u, v)) continue;
    std::vector<uint64_t> mask(words, 0);
    auto flip = [&](int id) { mask[id >> 6] ^= 1ULL << (id & 63); };
    flip(e);
    int a = u, b = v;
    while (a != b) {
      if (depth[a] < depth[b]) std::swap(a, b);
      flip(find_edge(a, parent[a]));
      a = parent[a];
    }
    basis.push_back(std::move(mask));
  }
  const size_t dim = basis.size();
  if (dim > 24)
    throw std::length_error("divisible-subgraph enumeration: cycle space too large");
  std::vector<std::vector<uint64_t>> keep;
  std::vector<uint64_t> current(words, 0);
  for (uint64_t code = 0;; ++code) {
    int pc = 0;
    for (uint64_t w : current) pc += __builtin_popcountll(w);
    if (pc % L == 0) {
      keep.push_back(current);
      if (static_cast<long long>(keep.size()) > max_count)
        throw std::length_error("divisible-subgraph enumeration: too many leftovers");
    }
    if (code + 1 >= (uint64_t{1} << dim)) break;
    // reflected Gray code: step code -> code+1 flips basis element ctz(code+1)
    int flip_idx = __builtin_ctzll(code + 1);
    for (int w = 0; w < words; ++w) current[w] ^= basis[flip_idx][w];
  }
  std::sort(keep.begin(), keep.end());
  std::vector<Graph> out;
  out.reserve(keep.size());
  for (const auto& mask : keep) {
    Graph g(host.order());
    for (int e = 0; e < m; ++e)
      if ((mask[e >> 6] >> (e & 63)) & 1ULL) g.add_edge(edges[e].first, edges[e].second);
    out.push_back(std::move(g));
  }
  return out;
}

// ---------------------------------------------------------------------------
// embedded building blocks

namespace {

template <class F>
void scan_vertices(const EmbedHost& host, F f) {
  if (!host.scan_order.empty()) {
    for (int v : host.scan_order)
      if (f(v)) return;
  } else {
    for (int v = 0; v < host.g->order(); ++v)
      if (f(v)) return;
  }
}

}  // namespace

std::optional<std::vector<int>> embed_path(EmbedHost& host, int from, int to,
                                           int length, VertexSet& gadget_used,
                                           const VertexSet* allowed) {
  if (length < 1 || from == to) return std::nullopt;
  std::vector<int> interior;
  long long nodes = 0;
  const long long node_cap = 50'000;
  VertexSet on_path(host.g->order());

  auto ok_interior = [&](int v) {
    if (v == from || v == to) return false;
    if (host.banned.contains(v) || gadget_used.contains(v) || on_path.contains(v))
      return false;
    if (allowed && !allowed->contains(v)) return false;
    return true;
  };

  auto dfs = [&](auto&& self, int cur, int remaining) -> bool {
    if (++nodes > node_cap) return false;
    if (remaining == 1) return host.edge_free(cur, to) && host.g->has_edge(cur, to);
    bool found = false;
    scan_vertices(host, [&](int v) {
      if (!host.g->has_edge(cur, v) || !host.edge_free(cur, v)) return false;
      if (!ok_interior(v)) return false;
      interior.push_back(v);
      on_path.insert(v);
      if (self(self, v, remaining - 1)) {
        found = true;
        return true;
      }
      on_path.erase(v);
      interior.pop_back();
      return nodes > node_cap;
    });
    return found;
  };

  if (length == 1) {
    if (!host.edge_free(from, to)) return std::nullopt;
  } else if (!dfs(dfs, from, length)) {
    return std::nullopt;
  }

  std::vector<int> path = {from};
  path.insert(path.end(), interior.begin(), interior.end());
  path.push_back(to);
  for (size_t i = 0; i + 1 < path.size(); ++i) host.used->add_edge(path[i], path[i + 1]);
  for (int v : interior) gadget_used.insert(v);
  return path;
}

std::optional<std::vector<int>> embed_cycle(EmbedHost& host, int length,
                                            VertexSet& gadget_used,
                                            const VertexSet* allowed) {
  if (length < 3) return std::nullopt;
  std::optional<std::vector<int>> result;
  scan_vertices(host, [&](int a) {
    if (host.banned.contains(a) || gadget_used.contains(a)) return false;
    if (allowed && !allowed->contains(a)) return false;
    bool done = false;
    host.g->for_each_neighbor(a, [&](int b) {
      if (done || b == a) return;
      if (host.banned.contains(b) || gadget_used.contains(b)) return;
      if (allowed && !allowed->contains(b)) return;
      if (!host.edge_free(a, b)) return;
      gadget_used.insert(a);
      gadget_used.insert(b);
      auto rest = embed_path(host, b, a, length - 1, gadget_used, allowed);
      if (rest) {
        host.used->add_edge(a, b);
        std::vector<int> cyc = {a};
        cyc.insert(cyc.end(), rest->begin(), rest->end() - 1);
        result = std::move(cyc);
        done = true;
        return;
      }
      gadget_used.erase(a);
      gadget_used.erase(b);
    });
    return done;
  });
  return result;
}

std::optional<std::pair<int, int>> default_transforming_edge(
    const EmbedHost& host, int x, int phix, int y, int phiy,
    const VertexSet& avoid) {
  VertexSet cx = host.g->common_neighbors(x, phix);
  VertexSet cy = host.g->common_neighbors(y, phiy);
  cx.subtract(host.banned);
  cy.subtract(host.banned);
  cx.subtract(avoid);
  cy.subtract(avoid);
  std::optional<std::pair<int, int>> best;
  cx.for_each([&](int vx) {
    if (best) return;
    if (!host.edge_free(x, vx) || !host.edge_free(phix, vx)) return;
    VertexSet cand = cy & host.g->neighbors(vx);
    cand.for_each([&](int vy) {
      if (best || vy == vx) return;
      if (!host.edge_free(vx, vy)) return;
      if (!host.edge_free(y, vy) || !host.edge_free(phiy, vy)) return;
      best = std::make_pair(vx, vy);
    });
  });
  return best;
}

// ---------------------------------------------------------------------------
// absorbers

namespace {

struct EntryBuilder {
  int k;
  int L;
  EmbedHost* host;          // null in abstract mode
  TransformingEdgeFinder finder;
  int* fresh;               // abstract allocation counter
  const VertexSet* cycle_region = nullptr;

  // Places connector + C + J + two transformers for one leftover.
  AbsorberEntry build(const Graph& leftover, const VertexSet& u_set) {
    AbsorberEntry entry;
    entry.leftover = leftover;
    if (leftover.edge_count() == 0) {
      int uni = host ? host->g->order() : *fresh;
      entry.absorber = Graph(uni);
      entry.schedule_alone.cycle_length = L;
      entry.schedule_with_leftover.cycle_length = L;
      return entry;
    }

    Graph committed_before;  // for rollback in embedded mode
    if (host) committed_before = *host->used;
    try {
      entry = build_nonempty(leftover, u_set);
    } catch (const EmbeddingFailure&) {
      if (host) *host->used = committed_before;
      throw;
    }
    return entry;
  }

 private:
  int alloc(int count) {
    int base = *fresh;
    *fresh += count;
    return base;
  }

  AbsorberEntry build_nonempty(const Graph& leftover, const VertexSet& u_set) {
    VertexSet gadget_used(host ? host->g->order() : 0);

    // connector: make the leftover's support connected
    Graph conn;
    CycleDecomposition conn_cycles;
    conn_cycles.cycle_length = L;
    int universe = host ? host->g->order() : *fresh;
    if (host) {
      gadget_used = u_set;
      conn = Graph(universe);
      std::vector<VertexSet> comps;
      for (const VertexSet& c : leftover.components())
        if (leftover.edge_count_within(c) > 0) comps.push_back(c);
      for (size_t c = 1; c < comps.size(); ++c) {
        int u = comps[0].first();
        int v = comps[c].first();
        auto cyc = embed_join_cycle(u, v, gadget_used);
        if (!cyc) throw EmbeddingFailure("connector");
        for (size_t i = 0; i < cyc->size(); ++i)
          conn.add_edge((*cyc)[i], (*cyc)[(i + 1) % cyc->size()]);
        conn_cycles.cycles.push_back(std::move(*cyc));
      }
    } else {
      auto res = connector_with_schedule(leftover, k, *fresh);
      conn = std::move(res.edges);
      conn_cycles = std::move(res.cycles);
      *fresh = res.universe_end;
    }

    Graph h_prime = leftover.union_with(conn);
    EdgeBijectiveHom hom = euler_homomorphism(h_prime);
    const int h_i = static_cast<int>(h_prime.edge_count());
    if (h_i % L != 0) throw std::logic_error("absorber: leftover not divisible");

    // the auxiliary cycle C^i and the flower J_i
    std::vector<int> c_cycle;
    Graph j_graph;
    CycleDecomposition j_cycles;
    if (host) {
      h_prime = pad_universe(h_prime, host->g->order());
      auto cyc = embed_cycle(*host, h_i, gadget_used, cycle_region);
      if (!cyc) throw EmbeddingFailure("auxiliary cycle");
      c_cycle = std::move(*cyc);
      auto flower = embed_flower(h_i / L, gadget_used);
      if (!flower) throw EmbeddingFailure("flower");
      j_graph = std::move(flower->first);
      j_cycles = std::move(flower->second);
    } else {
      int base = alloc(h_i);
      c_cycle.resize(h_i);
      for (int i = 0; i < h_i; ++i) c_cycle[i] = base + i;
      Graph local = make_flower(h_i / L, k);
      int jbase = alloc(local.order());
      j_graph = shift_ids(local, jbase, *fresh);
      j_cycles = shift_ids(flower_decomposition(h_i / L, k), jbase);
    }

    // T: (C, H')-transformer; T': (C, J)-transformer on the same C
    EdgeBijectiveHom j_hom = euler_homomorphism(j_graph);
    TransformerBundle t1 = place_transformer(h_prime, hom, c_cycle, gadget_used);
    TransformerBundle t2 = place_transformer(j_graph, j_hom, c_cycle, gadget_used);

    int uni = host ? host->g->order() : *fresh;
    AbsorberEntry entry;
    entry.leftover = pad_universe(leftover, uni);
    entry.absorber = pad_universe(conn, uni);
    Graph c_graph(uni);
    for (size_t i = 0; i < c_cycle.size(); ++i)
      c_graph.add_edge(c_cycle[i], c_cycle[(i + 1) % c_cycle.size()]);
    entry.absorber = entry.absorber.union_with(pad_universe(t1.t, uni))
                         .union_with(c_graph)
                         .union_with(pad_universe(t2.t, uni))
                         .union_with(pad_universe(j_graph, uni));

    entry.schedule_alone.cycle_length = L;
    append(entry.schedule_alone, conn_cycles);
    append(entry.schedule_alone, t1.schedule_with_c);
    append(entry.schedule_alone, t2.schedule_with_h);

    entry.schedule_with_leftover.cycle_length = L;
    append(entry.schedule_with_leftover, t1.schedule_with_h);
    append(entry.schedule_with_leftover, t2.schedule_with_c);
    append(entry.schedule_with_leftover, j_cycles);
    return entry;
  }

  static Graph pad_universe(const Graph& g, int universe) {
    if (g.order() >= universe) return g;
    return shift_ids(g, 0, universe);
  }

  static void append(CycleDecomposition& into, const CycleDecomposition& from) {
    into.cycles.insert(into.cycles.end(), from.cycles.begin(), from.cycles.end());
  }

  // One 2k-cycle through u and v from host edges: two internally disjoint
  // paths whose lengths sum to 2k (split adjusted for bipartite parity).
  std::optional<std::vector<int>> embed_join_cycle(int u, int v,
                                                   VertexSet& gadget_used) {
    int first_len = k;
    if (host->sides) {
      bool same_side = host->sides->a.contains(u) == host->sides->a.contains(v);
      if (same_side != (k % 2 == 0)) first_len = k - 1;
    }
    int second_len = 2 * k - first_len;
    auto p1 = embed_path(*host, u, v, first_len, gadget_used);
    if (!p1) return std::nullopt;
    auto p2 = embed_path(*host, u, v, second_len, gadget_used);
    if (!p2) return std::nullopt;
    // u ... v from p1, then back along p2's interior
    std::vector<int> cyc(p1->begin(), p1->end());
    for (auto it = p2->rbegin() + 1; it + 1 != p2->rend(); ++it) cyc.push_back(*it);
    return cyc;
  }

  std::optional<std::pair<Graph, CycleDecomposition>> embed_flower(
      int petals, VertexSet& gadget_used) {
    std::vector<int> centers;
    scan_vertices(*host, [&](int v) {
      if (host->banned.contains(v) || gadget_used.contains(v)) return false;
      centers.push_back(v);
      return centers.size() >= 48;
    });
    for (int center : centers) {
      Graph used_snap = *host->used;
      VertexSet gu_snap = gadget_used;
      auto attempt = try_flower_at(center, petals, gadget_used);
      if (attempt) return attempt;
      *host->used = used_snap;
      gadget_used = gu_snap;
    }
    return std::nullopt;
  }

  std::optional<std::pair<Graph, CycleDecomposition>> try_flower_at(
      int center, int petals, VertexSet& gadget_used) {
    Graph edges(host->g->order());
    CycleDecomposition cycles;
    cycles.cycle_length = L;
    gadget_used.insert(center);
    for (int p = 0; p < petals; ++p) {
      bool placed = false;
      host->g->for_each_neighbor(center, [&](int a) {
        if (placed) return;
        if (host->banned.contains(a) || gadget_used.contains(a)) return;
        if (!host->edge_free(center, a)) return;
        gadget_used.insert(a);
        auto rest = embed_path(*host, a, center, L - 1, gadget_used);
        if (!rest) {
          gadget_used.erase(a);
          return;
        }
        host->used->add_edge(center, a);
        std::vector<int> cyc = {center, a};
        cyc.insert(cyc.end(), rest->begin() + 1, rest->end() - 1);
        for (size_t i = 0; i < cyc.size(); ++i)
          edges.add_edge(cyc[i], cyc[(i + 1) % cyc.size()]);
        cycles.cycles.push_back(std::move(cyc));
        placed = true;
      });
      if (!placed) return std::nullopt;
    }
    return std::make_pair(std::move(edges), std::move(cycles));
  }

  TransformerBundle place_transformer(const Graph& h, const EdgeBijectiveHom& hom,
                                      std::vector<int>& c_cycle,
                                      VertexSet& gadget_used) {
    if (!host) {
      // abstract: fresh interiors via the public constructors, except that
      // the cycle is shared, so use the assembly helpers directly
      int len = hom.cycle_length();
      if (k >= 3) {
        GenericParts parts;
        parts.p_interior.resize(len);
        parts.q_interior.resize(len);
        for (int i = 0; i < len; ++i) {
          for (int j = 0; j < k - 1; ++j) parts.p_interior[i].push_back(alloc(1));
          for (int j = 0; j < k - 2; ++j) parts.q_interior[i].push_back(alloc(1));
        }
        return assemble_generic(h, hom, k, c_cycle, parts, *fresh);
      }
      C4Parts parts;
      parts.z1.resize(len);
      parts.z2.resize(len);
      parts.w.resize(len);
      for (int i = 0; i < len; ++i) {
        parts.z1[i] = alloc(1);
        parts.z2[i] = alloc(1);
      }
      for (int i = 0; i < len; ++i) parts.w[i] = alloc(1);
      return assemble_c4(hom, c_cycle, parts, *fresh);
    }
    return embed_transformer(h, hom, c_cycle, gadget_used);
  }

  TransformerBundle embed_transformer(const Graph& h, const EdgeBijectiveHom& hom_in,
                                      std::vector<int>& c_cycle,
                                      VertexSet& gadget_used) {
    EdgeBijectiveHom hom = hom_in;
    const int len = hom.cycle_length();
    align_cycle_sides(hom, c_cycle);
    VertexSet local = gadget_used;  // paths internally disjoint per transformer
    for (int v : c_cycle) local.insert(v);
    hom_loop_insert(local, hom);

    if (k >= 3) {
      GenericParts parts;
      parts.p_interior.resize(len);
      parts.q_interior.resize(len);
      for (int i = 0; i < len; ++i) {
        int j = (i + 1) % len;
        auto p = embed_path(*host, c_cycle[i], hom.tour[i], k, local);
        if (!p) throw EmbeddingFailure("transformer path");
        parts.p_interior[i].assign(p->begin() + 1, p->end() - 1);
        auto q = embed_path(*host, c_cycle[j], hom.tour[i], k - 1, local);
        if (!q) throw EmbeddingFailure("transformer path");
        parts.q_interior[i].assign(q->begin() + 1, q->end() - 1);
      }
      gadget_used |= local;
      return assemble_generic(h, hom, k, c_cycle, parts, host->g->order());
    }

    // k = 2: transforming-edge search per cycle edge, then the hubs
    C4Parts parts;
    parts.z1.assign(len, -1);
    parts.z2.assign(len, -1);
    parts.w.assign(len, -1);
    TransformingEdgeFinder search = finder ? finder : default_transforming_edge;
    for (int i = 0; i < len; ++i) {
      int j = (i + 1) % len;
      auto z = search(*host, c_cycle[i], hom.tour[i], c_cycle[j], hom.tour[j], local);
      if (!z) throw EmbeddingFailure("transforming edge");
      auto [vx, vy] = *z;
      parts.z1[i] = vx;
      parts.z2[i] = vy;
      local.insert(vx);
      local.insert(vy);
      host->used->add_edge(c_cycle[i], vx);
      host->used->add_edge(c_cycle[j], vy);
      host->used->add_edge(vx, vy);
      host->used->add_edge(hom.tour[i], vx);
      host->used->add_edge(hom.tour[j], vy);
    }
    for (int i = 0; i < len; ++i) {
      int prev = (i + len - 1) % len;
      int z_a = parts.z1[i], z_b = parts.z2[prev];
      int hub = -1;
      VertexSet cand = host->g->common_neighbors(z_a, z_b);
      cand.subtract(host->banned);
      cand.subtract(local);
      cand.for_each([&](int w) {
        if (hub >= 0) return;
        if (host->edge_free(w, z_a) && host->edge_free(w, z_b)) hub = w;
      });
      if (hub < 0) throw EmbeddingFailure("transformer hub");
      parts.w[i] = hub;
      local.insert(hub);
      host->used->add_edge(hub, z_a);
      host->used->add_edge(hub, z_b);
    }
    gadget_used |= local;
    return assemble_c4(hom, c_cycle, parts, host->g->order());
  }

  static void hom_loop_insert(VertexSet& set, const EdgeBijectiveHom& hom) {
    for (int v : hom.tour) set.insert(v);
  }

  // In a bipartite host the cycle and the tour must align: position classes
  // must agree exactly when k is even. Rotating the embedded cycle by one
  // flips its class pattern.
  void align_cycle_sides(const EdgeBijectiveHom& hom, std::vector<int>& c_cycle) {
    if (!host->sides) return;
    bool same = host->sides->a.contains(c_cycle[0]) ==
                host->sides->a.contains(hom.tour[0]);
    if (same != (k % 2 == 0))
      std::rotate(c_cycle.begin(), c_cycle.begin() + 1, c_cycle.end());
  }
};

}  // namespace

CycleDecomposition AbsorberBundle::absorb(size_t entry_index) const {
  CycleDecomposition out;
  out.cycle_length = 2 * k;
  for (size_t i = 0; i < entries.size(); ++i) {
    const auto& src =
        i == entry_index ? entries[i].schedule_with_leftover : entries[i].schedule_alone;
    out.cycles.insert(out.cycles.end(), src.cycles.begin(), src.cycles.end());
  }
  return out;
}

AbsorberBundle build_absorber(const VertexSet& u, int k, const AbsorberOptions& opts) {
  if (k < 2) throw std::invalid_argument("build_absorber: k must be >= 2");
  const int L = 2 * k;
  AbsorberBundle bundle;
  bundle.universe_u = u;
  bundle.k = k;

  Graph leftover_host;
  if (opts.leftover_host) {
    leftover_host = *opts.leftover_host;
  } else {
    leftover_host = Graph(u.universe());
    auto us = u.to_vector();
    for (size_t i = 0; i < us.size(); ++i)
      for (size_t j = i + 1; j < us.size(); ++j)
        leftover_host.add_edge(us[i], us[j]);
  }
  std::vector<Graph> leftovers =
      enumerate_divisible_subgraphs(leftover_host, L, opts.max_leftovers);

  int fresh = opts.host ? opts.host->g->order() : u.universe();
  EntryBuilder builder{k, L, opts.host, opts.finder, &fresh, opts.aux_cycle_region};
  for (const Graph& h : leftovers) bundle.entries.push_back(builder.build(h, u));

  int universe = opts.host ? opts.host->g->order() : fresh;
  bundle.universe_end = universe;
  bundle.a_star = Graph(universe);
  long long total = 0;
  for (auto& entry : bundle.entries) {
    Graph padded(universe);
    entry.absorber.for_each_edge([&](int a, int b) { padded.add_edge(a, b); });
    entry.absorber = padded;
    Graph lpad(universe);
    entry.leftover.for_each_edge([&](int a, int b) { lpad.add_edge(a, b); });
    entry.leftover = lpad;
    total += entry.absorber.edge_count();
    bundle.a_star = bundle.a_star.union_with(entry.absorber);
  }
  if (total != bundle.a_star.edge_count())
    throw std::logic_error("build_absorber: entries are not edge-disjoint");
  if (bundle.a_star.edge_count() > 0 && !is_cycle_divisible(bundle.a_star, L))
    throw std::logic_error("build_absorber: union not divisible");
  return bundle;
}

}  // namespace cycledec
