#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cycledec/graph.hpp"
#include "cycledec/oracle.hpp"

namespace cycledec {

// Euler tour of a connected 2-divisible graph, i.e. an edge-bijective
// homomorphism from a cycle of length e(H) onto H. tour[i] is the image of
// the i-th cycle vertex; edge i of the source cycle maps to
// (tour[i], tour[(i+1) % h]).
struct EdgeBijectiveHom {
  std::vector<int> tour;
  int cycle_length() const { return static_cast<int>(tour.size()); }
};

// Throws std::invalid_argument unless the edge-support of h is connected and
// every degree is even. Isolated vertices are ignored.
EdgeBijectiveHom euler_homomorphism(const Graph& h);

// True iff the induced edge map is a bijection onto E(h).
bool validate_edge_bijective(const Graph& h, const EdgeBijectiveHom& hom);

// L(i,k): i cycles of length 2k sharing exactly one vertex (vertex 0).
Graph make_flower(int copies, int k);
CycleDecomposition flower_decomposition(int copies, int k);

// Transformer T for a pair (C, H): edge-disjoint from both, with explicit
// decomposition schedules for T ∪ C and T ∪ H. cycle lists the vertices of C
// in order; t and c share one universe with h.
struct TransformerBundle {
  Graph t;
  Graph c;
  std::vector<int> cycle;
  CycleDecomposition schedule_with_h;  // covers E(T) ∪ E(H)
  CycleDecomposition schedule_with_c;  // covers E(T) ∪ E(C)
  int universe_end = 0;
  int order() const { return t.support().size(); }  // |V(T)|
};

// Paths-based transformer for cycles of length 2k, k >= 3. Internals are
// placed on fresh ids starting at fresh_id_start (which must be at least
// h.order()).
TransformerBundle generic_transformer(const Graph& h, const EdgeBijectiveHom& hom,
                                      int k, int fresh_id_start);

// The length-four construction: a pair of cross vertices per cycle edge and
// one hub per cycle vertex. Requires h connected and C_4-divisible.
TransformerBundle c4_transformer(const Graph& h, const EdgeBijectiveHom& hom,
                                 int fresh_id_start);

// Connector: added 2k-cycles making the edge-support of h connected, on
// fresh internal vertices. Returns a graph holding only the added edges.
Graph make_connector(const Graph& h, int k, int fresh_id_start);

struct EmbeddingFailure : std::runtime_error {
  explicit EmbeddingFailure(const std::string& gadget)
      : std::runtime_error("embedding failed: " + gadget), gadget(gadget) {}
  std::string gadget;
};

// Host for embedded gadget construction. `used` accumulates consumed edges;
// fresh gadget vertices are drawn outside `banned`; edges with both
// endpoints in `banned` are never touched.
struct EmbedHost {
  const Graph* g = nullptr;
  Graph* used = nullptr;
  VertexSet banned;
  const Bipartition* sides = nullptr;
  std::vector<int> scan_order;  // candidate order; identity when empty

  bool edge_free(int u, int v) const {
    return g->has_edge(u, v) && !used->has_edge(u, v) &&
           !(banned.contains(u) && banned.contains(v));
  }
};

// Finds an unused host edge (v_x, v_y) with v_x adjacent to both x and phix
// and v_y adjacent to both y and phiy, avoiding the given vertex set. The
// engine supplies a stronger finder with a structured fallback.
using TransformingEdgeFinder = std::function<std::optional<std::pair<int, int>>(
    const EmbedHost&, int x, int phix, int y, int phiy, const VertexSet& avoid)>;

std::optional<std::pair<int, int>> default_transforming_edge(
    const EmbedHost& host, int x, int phix, int y, int phiy,
    const VertexSet& avoid);

// One absorber per possible leftover. leftover lives on the shared universe;
// absorber holds the gadget edges; both schedules verify by construction and
// are re-checked in tests.
struct AbsorberEntry {
  Graph leftover;
  Graph absorber;
  CycleDecomposition schedule_alone;          // covers E(A_i)
  CycleDecomposition schedule_with_leftover;  // covers E(A_i) ∪ E(H_i)
};

struct AbsorberBundle {
  VertexSet universe_u;
  int k = 2;
  Graph a_star;  // edge-disjoint union of the entry absorbers
  std::vector<AbsorberEntry> entries;
  int universe_end = 0;

  // Decomposition of A* ∪ H_i: the absorbing schedule of entry i plus the
  // standalone schedules of every other entry.
  CycleDecomposition absorb(size_t entry_index) const;
};

struct AbsorberOptions {
  // Restrict enumerated leftovers to subgraphs of this graph (defaults to
  // the complete graph on U).
  const Graph* leftover_host = nullptr;
  long long max_leftovers = 4096;
  // Embedded mode when set; abstract fresh-vertex mode otherwise.
  EmbedHost* host = nullptr;
  TransformingEdgeFinder finder;  // only consulted for k = 2 embedded
  // Constrain the auxiliary cycles to this vertex region (embedded mode).
  const VertexSet* aux_cycle_region = nullptr;
};

// All C_2k-divisible graphs on U get an absorber; the bundle's pieces are
// pairwise edge-disjoint and every schedule passes verify_decomposition.
// Throws EmbeddingFailure in embedded mode when the host is too constrained.
AbsorberBundle build_absorber(const VertexSet& u, int k,
                              const AbsorberOptions& opts = {});

// Deterministic enumeration of the C_L-divisible subgraphs of `host`
// (even-degree subgraphs with edge count divisible by L), lexicographic by
// edge set. Throws std::length_error beyond max_count.
std::vector<Graph> enumerate_divisible_subgraphs(const Graph& host, int L,
                                                 long long max_count);

// Embedded building blocks (shared with the engine).
std::optional<std::vector<int>> embed_path(EmbedHost& host, int from, int to,
                                           int length, VertexSet& gadget_used,
                                           const VertexSet* allowed = nullptr);
std::optional<std::vector<int>> embed_cycle(EmbedHost& host, int length,
                                            VertexSet& gadget_used,
                                            const VertexSet* allowed = nullptr);

}  // namespace cycledec
