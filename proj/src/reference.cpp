#include "cycledec/reference.hpp"

#include <stdexcept>

namespace cycledec::serial {

VertexSet robust_neighborhood(const Graph& g, const VertexSet& s, double nu) {
  const int n = g.order();
  const int threshold = ceil_fraction(nu, n);
  VertexSet r(n);
  for (int v = 0; v < n; ++v) {
    int d = 0;
    s.for_each([&](int u) {
      if (g.has_edge(v, u)) ++d;
    });
    if (d >= threshold) r.insert(v);
  }
  return r;
}

bool is_expander(const Graph& g, double nu) {
  const int n = g.order();
  for (int x = 0; x < n; ++x) {
    VertexSet r = serial::robust_neighborhood(g, g.neighbors(x), nu);
    if (r.size() < n / 2.0 + nu * n - 1e-9) return false;
  }
  return true;
}

namespace {

ClosenessResult exhaustive(const Graph& g, bool inside) {
  const int n = g.order();
  if (n < 2 || n > 28)
    throw std::invalid_argument("serial closeness: n out of range");
  const int k = n / 2;
  long long best = -1;
  uint32_t best_mask = 0;
  // Gosper's hack over all k-subsets of [0, n)
  uint32_t mask = (1u << k) - 1;
  const uint32_t limit = 1u << n;
  while (mask < limit) {
    VertexSet s(n);
    for (int v = 0; v < n; ++v)
      if ((mask >> v) & 1u) s.insert(v);
    long long value = 0;
    if (inside) {
      value = g.edge_count_within(s);
    } else {
      s.for_each([&](int v) { value += g.degree(v) - g.degree_in(v, s); });
    }
    if (best < 0 || value < best) {
      best = value;
      best_mask = mask;
    }
    uint32_t c = mask & -mask;
    uint32_t r = mask + c;
    mask = (((r ^ mask) >> 2) / c) | r;
  }
  ClosenessResult res;
  res.witness = VertexSet(n);
  for (int v = 0; v < n; ++v)
    if ((best_mask >> v) & 1u) res.witness.insert(v);
  res.epsilon = static_cast<double>(best) / (1.0 * n * n);
  res.exact = true;
  return res;
}

}  // namespace

ClosenessResult closeness_two_cliques_exact(const Graph& g) {
  return exhaustive(g, false);
}

ClosenessResult closeness_bipartite_exact(const Graph& g) {
  return exhaustive(g, true);
}

}  // namespace cycledec::serial
