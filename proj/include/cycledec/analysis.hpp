#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "cycledec/graph.hpp"

namespace cycledec {

// R_{nu,G}(S): vertices with at least ceil(nu * n) neighbours in S.
VertexSet robust_neighborhood(const Graph& g, const VertexSet& s, double nu);

// |R_{nu,G}(S)| >= n/2 + nu*n.
bool is_expanding(const Graph& g, const VertexSet& s, double nu);

// Every vertex's neighbourhood is nu-expanding.
bool is_expander(const Graph& g, double nu);

struct ClosenessResult {
  double epsilon = 0.0;  // e(S, S̄)/n² resp. e(S)/n²
  VertexSet witness;     // |S| = floor(n/2)
  bool exact = false;    // brute force (n <= 20 or forced) vs local search
};

// Balanced set minimizing the cut (two-cliques closeness) resp. the inside
// edges (bipartite closeness). Exact below 21 vertices, annealing with
// seeded restarts above.
ClosenessResult closeness_two_cliques(const Graph& g, uint64_t seed = 0,
                                      bool force_exact = false);
ClosenessResult closeness_bipartite(const Graph& g, uint64_t seed = 0,
                                    bool force_exact = false);

enum class StructureKind {
  expander,
  close_two_cliques,
  close_bipartite,
  extremal_type1,
  extremal_type2,
  none,
};
const char* to_string(StructureKind kind);

struct StructureReport {
  StructureKind kind = StructureKind::none;
  std::vector<VertexSet> witness;
  double parameter = 0.0;
  bool exact = true;
};

// Checks expander, then two-cliques closeness, then bipartite closeness, and
// reports the first that holds.
StructureReport classify(const Graph& g, double nu, double epsilon,
                         uint64_t seed = 0);

// Disjoint S, T with |S|, |T| >= n/3 - m and either e(S,T) = 0 (type 1) or
// e(S) = e(T) = 0 (type 2). Exact subset search for n <= 18, seeded greedy
// search above.
std::optional<StructureReport> find_m_extremal(const Graph& g, int m,
                                               uint64_t seed = 0);

// Variant where X and Y may intersect: any edge with one endpoint in X and
// the other in Y counts, including edges inside X ∩ Y.
std::optional<std::pair<VertexSet, VertexSet>> find_nonadjacent_pair(
    const Graph& g, int min_size, bool require_disjoint, uint64_t seed = 0);

enum class VortexFlavor { min_degree, bipartite, expander };

// Nested vertex sets U_0 = V(G) ⊇ ... ⊇ U_ell with |U_i| = floor(mu
// |U_{i-1}|) on intermediate levels, |U_ell| = m, and a per-level guarantee
// for every x in U_{i-1}:
//   min_degree:  d(x, U_i) >= check_value * |U_i|
//   bipartite:   per side, d(x, U_i ∩ X) >= check_value * |U_i ∩ X|
//   expander:    N(x, U_i) is check_value-expanding in G[U_i]
// check_value already carries the sampling weakening (input delta - mu).
struct Vortex {
  std::vector<VertexSet> levels;
  VortexFlavor flavor = VortexFlavor::min_degree;
  double check_value = 0.0;
  double mu = 0.0;
  int m = 0;
  std::optional<Bipartition> sides;
};

// Uniformly resamples each level until its guarantee holds, up to retry_cap
// attempts per level. check_value = delta_or_nu - weaken; weaken defaults to
// mu (the sampling slack), overridable when the shrink factor and the slack
// must differ.
std::optional<Vortex> vortex_sample(const Graph& g, VortexFlavor flavor,
                                    double delta_or_nu, double mu, int m,
                                    uint64_t seed, int retry_cap = 50,
                                    const Bipartition* sides = nullptr,
                                    double weaken = -1.0);

// Rechecks every size and level condition from scratch.
bool validate_vortex(const Graph& g, const Vortex& v);

// S is nu-expanding inside the induced subgraph G[u]; thresholds scale with
// |u|. Exposed for the engine's level checks.
bool is_expanding_within(const Graph& g, const VertexSet& s, const VertexSet& u,
                         double nu);

}  // namespace cycledec
