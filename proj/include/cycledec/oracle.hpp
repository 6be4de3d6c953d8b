#pragma once

#include <optional>
#include <vector>

#include "cycledec/graph.hpp"

namespace cycledec {

// Witness set S with e(S) odd such that every L-cycle of the host graph uses
// an even number of edges inside S; a successful check proves that no
// C_L-decomposition exists. The optional blow-up declaration enables a
// structural check instead of exhaustive cycle enumeration: when every edge
// of the host joins consecutive parts of a 6-part ring and S is the union of
// two consecutive parts, any cycle shorter than the ring maps to a closed
// walk that crosses the declared cut an even number of times.
struct RingBlowupDeclaration {
  std::vector<int> part_of;  // vertex -> part id in 0..5
  int cut_part = 0;          // S == parts cut_part and cut_part+1 (mod 6)
};

struct ParityCertificate {
  VertexSet witness;
  int modulus = 2;
  std::optional<RingBlowupDeclaration> structure;
};

// Some connected component has edge count not divisible by the modulus, so
// no decomposition into cycles (which never cross components) exists.
struct CountCertificate {
  std::vector<long long> component_edge_counts;
  int modulus = 0;
};

// All distinct L-cycles of g, each reported once up to rotation and
// reflection, in lexicographic order of their canonical vertex sequence.
// Stops after max_count cycles when max_count >= 0.
std::vector<std::vector<int>> enumerate_cycles(const Graph& g, int length,
                                               long long max_count = -1);

enum class OracleStatus { found, none_exists, budget_exceeded };

struct OracleResult {
  OracleStatus status = OracleStatus::budget_exceeded;
  std::optional<CycleDecomposition> decomposition;
  long long nodes_visited = 0;
};

inline constexpr long long kDefaultOracleBudget = 100'000'000;

// Exact decision by backtracking on the lexicographically smallest uncovered
// edge. Budget exhaustion is a distinct outcome, never reported as
// nonexistence. Deterministic: identical inputs and budgets yield identical
// outputs.
OracleResult exact_decompose(const Graph& g, int length,
                             long long budget = kDefaultOracleBudget);

bool check_parity_certificate(const Graph& g, int length,
                              const ParityCertificate& cert);
bool check_count_certificate(const Graph& g, int length,
                             const CountCertificate& cert);

}  // namespace cycledec
