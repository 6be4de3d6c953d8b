#include "cycledec/generators.hpp"

#include <algorithm>
#include <cmath>

#include "cycledec/rng.hpp"

namespace cycledec {

GeneratorOutput gen_c4_extremal(int m) {
  if (m < 1) throw std::invalid_argument("gen_c4_extremal: m must be >= 1");
  const int na = 4 * m + 2, nb = 4 * m + 3, nc = 4 * m - 2;
  const int n = na + nb + nc;
  Graph g(n);
  // A = [0, na), B = [na, na+nb), C = [na+nb, n); A and C cliques, B joined
  // to everything outside B
  for (int u = 0; u < na; ++u)
    for (int v = u + 1; v < na; ++v) g.add_edge(u, v);
  for (int u = na + nb; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
  for (int b = na; b < na + nb; ++b) {
    for (int u = 0; u < na; ++u) g.add_edge(u, b);
    for (int u = na + nb; u < n; ++u) g.add_edge(u, b);
  }
  GeneratorOutput out;
  out.graph = std::move(g);
  out.divisibility_length = 4;
  out.claimed_min_degree = 8 * m;
  out.claimed_edge_count = 4LL * (12LL * m * m + 5 * m + 1);
  VertexSet a(n);
  for (int u = 0; u < na; ++u) a.insert(u);
  out.parity_certificate = ParityCertificate{a, 2, std::nullopt};
  return out;
}

GeneratorOutput gen_two_cliques(int k, int j) {
  if (k < 2 || j < 0) throw std::invalid_argument("gen_two_cliques: bad parameters");
  const int n = 2 * k + 1 + 4 * k * j;
  Graph g = make_disjoint_union(make_complete(n), make_complete(n));
  GeneratorOutput out;
  out.graph = std::move(g);
  out.divisibility_length = 2 * k;
  out.claimed_min_degree = n - 1;
  out.claimed_edge_count = static_cast<long long>(n) * (n - 1);
  long long comp = static_cast<long long>(n) * (n - 1) / 2;
  out.count_certificate = CountCertificate{{comp, comp}, 2 * k};
  return out;
}

GeneratorOutput gen_c4_bip_extremal(int m) {
  if (m < 1) throw std::invalid_argument("gen_c4_bip_extremal: m must be >= 1");
  const int part = 2 * m + 1;
  const int n = 6 * part;
  auto vid = [&](int p, int i) { return p * part + i; };
  Graph g(n);
  for (int p = 0; p < 6; ++p)
    for (int i = 0; i < part; ++i)
      for (int j = 0; j < part; ++j) g.add_edge(vid(p, i), vid((p + 1) % 6, j));
  // remove one 6-cycle between parts 4 and 5
  for (int i = 0; i < 3; ++i) {
    g.remove_edge(vid(4, i), vid(5, i));
    g.remove_edge(vid(4, (i + 1) % 3), vid(5, i));
  }
  GeneratorOutput out;
  out.graph = std::move(g);
  out.divisibility_length = 4;
  out.claimed_min_degree = 4 * m;
  out.claimed_edge_count = 6LL * part * part - 6;
  RingBlowupDeclaration decl;
  decl.part_of.resize(n);
  for (int p = 0; p < 6; ++p)
    for (int i = 0; i < part; ++i) decl.part_of[vid(p, i)] = p;
  decl.cut_part = 0;
  VertexSet witness(n);
  for (int i = 0; i < part; ++i) {
    witness.insert(vid(0, i));
    witness.insert(vid(1, i));
  }
  out.parity_certificate = ParityCertificate{witness, 2, decl};
  Bipartition sides{VertexSet(n), VertexSet(n)};
  for (int p = 0; p < 6; ++p)
    for (int i = 0; i < part; ++i)
      (p % 2 == 0 ? sides.a : sides.b).insert(vid(p, i));
  out.sides = sides;
  return out;
}

namespace {

Graph complete_bipartite_minus_matching(int m, int base, int universe) {
  Graph g(universe);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j) g.add_edge(base + i, base + m + j);
  return g;
}

}  // namespace

GeneratorOutput gen_c2k_bip_extremal(int k, int variant_index) {
  if (k < 2 || variant_index < 0)
    throw std::invalid_argument("gen_c2k_bip_extremal: bad parameters");
  GeneratorOutput out;
  out.divisibility_length = 2 * k;
  if (k % 2 == 0) {
    const int m = (k + 1) + 2 * k * variant_index;
    const int n = 4 * m;
    Graph g = complete_bipartite_minus_matching(m, 0, n);
    Graph g2 = complete_bipartite_minus_matching(m, 2 * m, n);
    out.graph = g.union_with(g2);
    out.claimed_min_degree = m - 1;
    out.claimed_edge_count = 2LL * m * (m - 1);
    long long comp = static_cast<long long>(m) * (m - 1);
    out.count_certificate = CountCertificate{{comp, comp}, 2 * k};
    Bipartition sides{VertexSet(n), VertexSet(n)};
    for (int i = 0; i < m; ++i) {
      sides.a.insert(i);
      sides.b.insert(m + i);
      sides.a.insert(2 * m + i);
      sides.b.insert(3 * m + i);
    }
    out.sides = sides;
    return out;
  }
  int m0 = -1;
  for (int m = 1; m <= 4 * k; ++m)
    if ((4 * m) % (2 * k) == (k - 1) % (2 * k)) {
      m0 = m;
      break;
    }
  if (m0 < 0) throw std::logic_error("gen_c2k_bip_extremal: no valid m");
  const int m = m0 + 2 * k * variant_index;
  const int big = 2 * m + 1, small = 2 * m;
  const int n = 2 * big + 2 * small;
  Graph g = complete_bipartite_minus_matching(big, 0, n);
  Graph g2(n);
  for (int i = 0; i < small; ++i)
    for (int j = 0; j < small; ++j) g2.add_edge(2 * big + i, 2 * big + small + j);
  out.graph = g.union_with(g2);
  out.claimed_min_degree = 2 * m;
  out.claimed_edge_count = 2LL * m * (4 * m + 1);
  out.count_certificate = CountCertificate{
      {static_cast<long long>(big) * (big - 1),
       static_cast<long long>(small) * small},
      2 * k};
  Bipartition sides{VertexSet(n), VertexSet(n)};
  for (int i = 0; i < big; ++i) {
    sides.a.insert(i);
    sides.b.insert(big + i);
  }
  for (int i = 0; i < small; ++i) {
    sides.a.insert(2 * big + i);
    sides.b.insert(2 * big + small + i);
  }
  out.sides = sides;
  return out;
}

Graph gen_random_min_degree(int n, double delta_fraction, double p,
                            uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_random_min_degree: n too small");
  const int target = ceil_fraction(delta_fraction, n);
  if (target > n - 1)
    throw std::invalid_argument("gen_random_min_degree: infeasible floor");
  Rng rng(Rng(seed).fork("random-min-degree").next());
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.chance(p)) g.add_edge(u, v);
  // repair: attach the lowest-degree vertex to random non-neighbours
  while (true) {
    int worst = -1, worst_deg = n;
    for (int v = 0; v < n; ++v) {
      int d = g.degree(v);
      if (d < worst_deg) {
        worst = v;
        worst_deg = d;
      }
    }
    if (worst_deg >= target) break;
    int tries = 0;
    while (tries++ < 4 * n) {
      int other = rng.range(0, n);
      if (other != worst && !g.has_edge(worst, other)) {
        g.add_edge(worst, other);
        break;
      }
    }
  }
  return g;
}

namespace {

// Near-equal part sizes, biased so the ideal shape is already 2-divisible
// when n's parity allows it: odd cliques, even bipartition sides, same-parity
// tripartition classes.
std::vector<int> shape_parts(PerturbShape shape, int n) {
  std::vector<int> best;
  long long best_key = 1LL << 60;
  auto consider = [&](std::vector<int> parts, bool clean_parity) {
    for (int p : parts)
      if (p < 1) return;
    int spread = *std::max_element(parts.begin(), parts.end()) -
                 *std::min_element(parts.begin(), parts.end());
    long long key = (clean_parity ? 0 : 1000) + spread;
    if (key < best_key) {
      best_key = key;
      best = std::move(parts);
    }
  };
  switch (shape) {
    case PerturbShape::two_cliques:
      for (int a = std::max(1, n / 2 - 3); a <= n / 2; ++a)
        consider({a, n - a}, a % 2 == 1 && (n - a) % 2 == 1);
      break;
    case PerturbShape::bipartite:
      for (int a = std::max(1, n / 2 - 3); a <= n / 2; ++a)
        consider({a, n - a}, a % 2 == 0 && (n - a) % 2 == 0);
      break;
    case PerturbShape::tripartite:
      for (int a = std::max(1, n / 3 - 3); a <= n / 3 + 3; ++a)
        for (int b = std::max(1, n / 3 - 3); b <= n / 3 + 3; ++b)
          consider({a, b, n - a - b},
                   a % 2 == b % 2 && b % 2 == (n - a - b) % 2);
      break;
  }
  return best;
}

}  // namespace

Graph gen_perturbed(PerturbShape shape, int n, double noise, uint64_t seed) {
  if (n < 4) throw std::invalid_argument("gen_perturbed: n too small");
  std::vector<int> parts = shape_parts(shape, n);
  std::vector<int> part_of(n);
  {
    int v = 0;
    for (size_t p = 0; p < parts.size(); ++p)
      for (int i = 0; i < parts[p]; ++i) part_of[v++] = static_cast<int>(p);
  }
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      bool same = part_of[u] == part_of[v];
      bool edge = shape == PerturbShape::two_cliques ? same : !same;
      if (edge) g.add_edge(u, v);
    }

  Rng rng(Rng(seed).fork("perturb").next());
  long long flips = std::llround(noise * n * static_cast<double>(n));
  for (long long f = 0; f < flips; ++f) {
    int u = rng.range(0, n), v = rng.range(0, n);
    if (u != v) g.toggle_edge(u, v);
  }

  // 2-divisibility repair: toggle a greedy matching on the odd-degree
  // vertices, preferring pairs whose edge slot the ideal shape allows so the
  // repair does not blur the planted structure
  std::vector<int> odd;
  for (int v = 0; v < n; ++v)
    if (g.degree(v) % 2 != 0) odd.push_back(v);
  rng.shuffle(odd);
  auto allowed = [&](int u, int v) {
    bool same = part_of[u] == part_of[v];
    return shape == PerturbShape::two_cliques ? same : !same;
  };
  std::vector<bool> matched(odd.size(), false);
  for (size_t i = 0; i < odd.size(); ++i) {
    if (matched[i]) continue;
    size_t partner = 0;
    bool found = false;
    for (size_t j = i + 1; j < odd.size() && !found; ++j)
      if (!matched[j] && allowed(odd[i], odd[j])) {
        partner = j;
        found = true;
      }
    for (size_t j = i + 1; j < odd.size() && !found; ++j)
      if (!matched[j]) {
        partner = j;
        found = true;
      }
    if (!found) break;  // at most one odd vertex left unmatched
    matched[i] = matched[partner] = true;
    g.toggle_edge(odd[i], odd[partner]);
  }
  return g;
}

std::optional<Graph> gen_divisible_min_degree(int n, int L, double delta_fraction,
                                              uint64_t seed) {
  const int target = std::max(0, ceil_fraction(delta_fraction, n) - 1);
  Rng root(Rng(seed).fork("divisible").next());
  for (int attempt = 0; attempt < 300; ++attempt) {
    Rng rng(root.fork(static_cast<uint64_t>(attempt)).next());
    Graph g(n);
    double p = 0.75 + 0.2 * rng.unit();
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng.chance(p)) g.add_edge(u, v);
    // even degrees: pair up odd vertices, prefer adding missing edges
    std::vector<int> odd;
    for (int v = 0; v < n; ++v)
      if (g.degree(v) % 2 != 0) odd.push_back(v);
    rng.shuffle(odd);
    for (size_t i = 0; i + 1 < odd.size(); i += 2) g.toggle_edge(odd[i], odd[i + 1]);
    // edge count mod L: toggle triangles, which keeps degree parity
    int guard = 0;
    while (g.edge_count() % L != 0 && ++guard < 2000) {
      int a = rng.range(0, n), b = rng.range(0, n), c = rng.range(0, n);
      if (a == b || b == c || a == c) continue;
      g.toggle_edge(a, b);
      g.toggle_edge(b, c);
      g.toggle_edge(a, c);
    }
    if (g.edge_count() % L != 0) continue;
    if (!is_two_divisible(g)) continue;
    if (g.min_degree() < target) continue;
    return g;
  }
  return std::nullopt;
}

}  // namespace cycledec
