#pragma once

#include <cstdint>
#include <optional>

#include "cycledec/graph.hpp"
#include "cycledec/oracle.hpp"

namespace cycledec {

struct GeneratorOutput {
  Graph graph;
  int divisibility_length = 0;  // the L for which the graph is divisible
  int claimed_min_degree = 0;
  long long claimed_edge_count = 0;
  std::optional<ParityCertificate> parity_certificate;
  std::optional<CountCertificate> count_certificate;
  std::optional<Bipartition> sides;
};

// Cliques on A and C plus everything between A ∪ C and B, with
// |A| = 4m+2, |B| = 4m+3, |C| = 4m-2. C_4-divisible, delta = 2n/3 - 2, and
// certified non-decomposable by the odd edge count inside A.
GeneratorOutput gen_c4_extremal(int m);

// Two disjoint K_n with n = 2k+1+4kj: C_2k-divisible, delta = n/2 - 1 over
// the union, no decomposition since each component's edge count is k mod 2k.
GeneratorOutput gen_two_cliques(int k, int j);

// Ring blow-up on six parts of size 2m+1 minus one 6-cycle between the last
// two parts. Bipartite, C_4-divisible, blocked by the odd cut between the
// first two parts.
GeneratorOutput gen_c4_bip_extremal(int m);

// Bipartite blockers for general k: two K_{m,m} minus perfect matchings
// (k even), or K^-_{2m+1,2m+1} plus K_{2m,2m} (k odd). variant_index picks
// the smallest valid m plus variant_index * 2k.
GeneratorOutput gen_c2k_bip_extremal(int k, int variant_index);

// Seeded G(n,p) with edges added until the minimum degree reaches
// ceil(delta_fraction * n).
Graph gen_random_min_degree(int n, double delta_fraction, double p,
                            uint64_t seed);

enum class PerturbShape { two_cliques, bipartite, tripartite };

// Ideal shape (parts sized so every degree is even where parity permits),
// noise * n^2 random edge toggles, then a greedy matching on odd-degree
// vertices toggled to restore 2-divisibility.
Graph gen_perturbed(PerturbShape shape, int n, double noise, uint64_t seed);

// Seeded C_4-divisible instances with a minimum-degree floor; used by the
// oracle-agreement harness. Returns nullopt when the repair loop fails.
std::optional<Graph> gen_divisible_min_degree(int n, int L, double delta_fraction,
                                              uint64_t seed);

}  // namespace cycledec
