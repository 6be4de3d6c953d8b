#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cycledec/analysis.hpp"
#include "cycledec/config.hpp"
#include "cycledec/gadgets.hpp"
#include "cycledec/graph.hpp"
#include "cycledec/rng.hpp"

namespace cycledec {

// Accumulates the cycles removed so far, the edges they consumed, and how
// often each vertex served as a path interior. Every commit re-validates the
// cycle against the host graph and the used-edge set; a violation is a bug
// and throws.
class CoverLedger {
 public:
  CoverLedger(const Graph& host, int cycle_length)
      : host_(&host),
        cycle_length_(cycle_length),
        used_(host.order()),
        load_(host.order(), 0) {}

  void commit(const std::vector<int>& cycle,
              const std::vector<int>& interiors = {});

  const Graph& used() const { return used_; }
  int load(int v) const { return load_[v]; }
  long long cycles_committed() const { return static_cast<long long>(cycles_.size()); }
  const std::vector<std::vector<int>>& cycles() const { return cycles_; }
  CycleDecomposition decomposition() const;
  int cycle_length() const { return cycle_length_; }

 private:
  const Graph* host_;
  int cycle_length_;
  Graph used_;
  std::vector<int> load_;
  std::vector<std::vector<int>> cycles_;
};

struct StageLog {
  std::vector<std::pair<std::string, std::string>> entries;
  void note(std::string stage, std::string detail) {
    entries.emplace_back(std::move(stage), std::move(detail));
  }
};

struct StageStatus {
  bool ok = true;
  std::string stage;
  std::string detail;
  explicit operator bool() const { return ok; }
  static StageStatus good() { return {}; }
  static StageStatus fail(std::string stage, std::string detail) {
    return {false, std::move(stage), std::move(detail)};
  }
};

// One covering run over a fixed host graph. residual always equals the host
// minus every consumed edge (committed cycles plus explicit reservations).
struct EngineRun {
  EngineRun(const Graph& g, int k_half, const EngineConfig& config)
      : original(g),
        residual(g),
        ledger(original, 2 * k_half),
        cfg(config),
        k(k_half),
        L(2 * k_half),
        rng(Rng(config.seed).fork("engine")),
        scan(make_scan(g.order(), config.seed)) {}

  Graph original;
  Graph residual;
  CoverLedger ledger;
  EngineConfig cfg;
  int k;
  int L;
  Rng rng;
  StageLog log;
  std::vector<int> scan;  // seeded vertex order used by every search

  void commit_cycle(const std::vector<int>& cycle,
                    const std::vector<int>& interiors = {});
  // removes edges from residual without recording cycles (absorber reserve)
  void reserve_edges(const Graph& edges);

  static std::vector<int> make_scan(int n, uint64_t seed);
};

// Repeatedly removes an L-cycle found inside the edge domain (full residual
// when null) until at most eta * n^2 domain edges remain or no cycle is
// found. Returns the number of cycles removed.
long long greedy_approx(EngineRun& run, double eta,
                        const Graph* edge_domain = nullptr);

// Edge-disjoint paths of exact `length` for each pair, interiors drawn from
// allowed_interior (everything when null) avoiding overloaded vertices; the
// union's max degree is capped at gamma^(1/3) * n. Path edges leave the
// residual; the caller closes them into cycles. Returns std::nullopt with
// the failing pair logged when stuck.
std::optional<std::vector<std::vector<int>>> find_paths(
    EngineRun& run, const std::vector<std::pair<int, int>>& pairs, int length,
    double gamma, const Graph* edge_domain = nullptr,
    const VertexSet* allowed_interior = nullptr);

// Covers all but at most one residual edge at x (the edges inside
// edge_domain when given) by cycles through x whose connecting paths of
// length L-2 live inside allowed_interior, drawn from path_domain (defaults
// to edge_domain). With sides given, neighbours are paired within one side.
StageStatus cover_vertex_star(EngineRun& run, int x,
                              const VertexSet& allowed_interior,
                              const Bipartition* sides = nullptr,
                              const Graph* edge_domain = nullptr,
                              const Graph* path_domain = nullptr);

// Partitions the vertices into cfg.s sampled parts, sweeps the grouped
// multipartite graphs (one per clique of the K_t-decomposition of K_s), and
// leaves the domain with max degree at most target_fraction * n.
StageStatus bound_max_degree(EngineRun& run, double target_fraction,
                             const Graph* edge_domain = nullptr,
                             const Bipartition* sides = nullptr);

// Completes every listed edge (inside the L-side) to an L-cycle whose other
// vertices lie in r_set; the added graph never touches l_set beyond the edge
// endpoints and its max degree is capped.
StageStatus cover_sparse(EngineRun& run, const VertexSet& l_set,
                         const VertexSet& r_set,
                         const std::vector<std::pair<int, int>>& sparse_edges,
                         const Graph* edge_domain = nullptr);

struct CoverDownResult {
  StageStatus status;           // ok iff fully covered within the bound
  bool covered_outside = false; // residual restricted to G[u]
  int intrusion_max_degree = 0; // max degree of used cycles inside G[u]
  double intrusion_bound = 0.0; // the flavor formula this run was held to
};

// Covers every residual edge outside G[u] (never touching edges inside
// protect_mask) while bounding the cycles' intrusion into G[u].
CoverDownResult cover_down(EngineRun& run, const VertexSet& u,
                           VortexFlavor flavor,
                           const VertexSet* protect = nullptr,
                           const Bipartition* sides = nullptr);

// Iterates cover_down along the vortex levels; on success the residual is
// confined to the terminal level.
StageStatus near_optimal(EngineRun& run, const Vortex& vortex);

// Absorbers for every divisible leftover inside G[u], embedded in the host
// with the transforming-edge search; falls back to region-constrained
// placement when the plain search space has an empty bipartite pattern.
AbsorberBundle build_c4_absorber(EngineRun& run, const VertexSet& u,
                                 const VertexSet& ban);

// K_t-decomposition of K_s for s = t^j (t prime): the classes partition the
// edge set of K_s; used by bound_max_degree.
std::vector<std::vector<int>> clique_partition_classes(int s, int t);

// Path of exact length inside residual ∧ edge_domain whose interior vertices
// stay inside allowed_interior (when given); shared by all covering stages.
std::optional<std::vector<int>> find_constrained_path(
    EngineRun& run, int from, int to, int length,
    const Graph* edge_domain = nullptr,
    const VertexSet* allowed_interior = nullptr);

enum class OutcomeKind { certificate, nonexistence, diagnostic };

struct EngineOutcome {
  OutcomeKind kind = OutcomeKind::diagnostic;
  CycleDecomposition certificate;  // verified against the input before return
  std::string reason;              // nonexistence: the violated condition
  StageStatus diagnostic;          // diagnostic: failing stage + detail
  std::vector<std::pair<std::string, std::string>> log;
  long long cycles = 0;
  long long residual_edges = 0;
};

// Top-level dispatcher: divisibility, oracle below the cutoff, then the
// structure-directed pipelines. Never returns an unverified certificate.
EngineOutcome decompose(const Graph& g, int k, const EngineConfig& cfg);
EngineOutcome decompose_bipartite(const Graph& g, const Bipartition& sides,
                                  int k, const EngineConfig& cfg);

// Structure-specific pipelines (k >= 4 for the first two, k = 2 for the
// rest); exposed for tests and the dispatcher.
EngineOutcome decompose_two_cliques(const Graph& g, int k,
                                    const EngineConfig& cfg);
EngineOutcome decompose_bipartite_like(const Graph& g, int k,
                                       const EngineConfig& cfg);
EngineOutcome decompose_c4_type1(const Graph& g, const EngineConfig& cfg,
                                 const StructureReport* hint = nullptr);
EngineOutcome decompose_c4_type2(const Graph& g, const EngineConfig& cfg,
                                 const StructureReport* hint = nullptr);

}  // namespace cycledec
