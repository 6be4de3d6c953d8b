#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cycledec {

// Set of vertex ids over a fixed universe [0, n). Backed by 64-bit words so
// that intersections and counts are word-parallel; common-neighbourhood
// queries dominate everything downstream.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(int universe)
      : n_(universe), w_((universe + 63) / 64, 0) {}

  static VertexSet full(int universe) {
    VertexSet s(universe);
    for (int v = 0; v < universe; ++v) s.insert(v);
    return s;
  }
  static VertexSet of(int universe, std::initializer_list<int> vs) {
    VertexSet s(universe);
    for (int v : vs) s.insert(v);
    return s;
  }

  int universe() const { return n_; }
  bool contains(int v) const {
    return (w_[v >> 6] >> (v & 63)) & 1ULL;
  }
  void insert(int v) { w_[v >> 6] |= 1ULL << (v & 63); }
  void erase(int v) { w_[v >> 6] &= ~(1ULL << (v & 63)); }
  void clear() { std::fill(w_.begin(), w_.end(), 0); }

  int size() const {
    int c = 0;
    for (uint64_t x : w_) c += __builtin_popcountll(x);
    return c;
  }
  bool empty() const {
    for (uint64_t x : w_)
      if (x) return false;
    return true;
  }

  VertexSet& operator|=(const VertexSet& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  VertexSet& operator&=(const VertexSet& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  VertexSet& subtract(const VertexSet& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
    return *this;
  }
  friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }
  friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }
  VertexSet complement() const {
    VertexSet s(n_);
    for (size_t i = 0; i < w_.size(); ++i) s.w_[i] = ~w_[i];
    s.trim();
    return s;
  }
  bool intersects(const VertexSet& o) const {
    for (size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & o.w_[i]) return true;
    return false;
  }
  bool operator==(const VertexSet& o) const = default;

  int first() const {  // smallest element, -1 if empty
    for (size_t i = 0; i < w_.size(); ++i)
      if (w_[i]) return static_cast<int>(i * 64 + __builtin_ctzll(w_[i]));
    return -1;
  }

  template <class F>
  void for_each(F f) const {
    for (size_t i = 0; i < w_.size(); ++i) {
      uint64_t x = w_[i];
      while (x) {
        f(static_cast<int>(i * 64 + __builtin_ctzll(x)));
        x &= x - 1;
      }
    }
  }
  std::vector<int> to_vector() const {
    std::vector<int> out;
    out.reserve(size());
    for_each([&](int v) { out.push_back(v); });
    return out;
  }

  std::span<const uint64_t> words() const { return w_; }

 private:
  void trim() {
    if (n_ % 64) w_.back() &= (~uint64_t{0}) >> (64 - n_ % 64);
  }
  int n_ = 0;
  std::vector<uint64_t> w_;
};

// Undirected simple graph on vertex ids [0, n). Adjacency is one bitset row
// per vertex; no self-loops, no multi-edges, rows kept symmetric.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n)
      : n_(n), words_((n + 63) / 64), bits_(static_cast<size_t>(n) * words_, 0) {}

  int order() const { return n_; }
  long long edge_count() const { return m_; }

  bool has_edge(int u, int v) const {
    return (bits_[static_cast<size_t>(u) * words_ + (v >> 6)] >> (v & 63)) & 1ULL;
  }

  void add_edge(int u, int v) {
    check_pair(u, v);
    if (has_edge(u, v)) return;
    set_bit(u, v);
    set_bit(v, u);
    ++m_;
  }
  void remove_edge(int u, int v) {
    check_pair(u, v);
    if (!has_edge(u, v)) return;
    clear_bit(u, v);
    clear_bit(v, u);
    --m_;
  }
  void toggle_edge(int u, int v) {
    if (has_edge(u, v))
      remove_edge(u, v);
    else
      add_edge(u, v);
  }

  int degree(int v) const {
    const uint64_t* row = row_ptr(v);
    int d = 0;
    for (int i = 0; i < words_; ++i) d += __builtin_popcountll(row[i]);
    return d;
  }
  int degree_in(int v, const VertexSet& s) const {
    const uint64_t* row = row_ptr(v);
    auto sw = s.words();
    int d = 0;
    for (int i = 0; i < words_; ++i) d += __builtin_popcountll(row[i] & sw[i]);
    return d;
  }
  int common_degree(int u, int v) const {  // |N(u) ∩ N(v)|
    const uint64_t* a = row_ptr(u);
    const uint64_t* b = row_ptr(v);
    int d = 0;
    for (int i = 0; i < words_; ++i) d += __builtin_popcountll(a[i] & b[i]);
    return d;
  }

  VertexSet neighbors(int v) const {
    VertexSet s(n_);
    for_each_neighbor(v, [&](int u) { s.insert(u); });
    return s;
  }
  VertexSet common_neighbors(int u, int v) const {
    VertexSet s(n_);
    const uint64_t* a = row_ptr(u);
    const uint64_t* b = row_ptr(v);
    for (int i = 0; i < words_; ++i) {
      uint64_t x = a[i] & b[i];
      while (x) {
        s.insert(i * 64 + __builtin_ctzll(x));
        x &= x - 1;
      }
    }
    return s;
  }

  template <class F>
  void for_each_neighbor(int v, F f) const {
    const uint64_t* row = row_ptr(v);
    for (int i = 0; i < words_; ++i) {
      uint64_t x = row[i];
      while (x) {
        f(static_cast<int>(i * 64 + __builtin_ctzll(x)));
        x &= x - 1;
      }
    }
  }
  template <class F>
  void for_each_edge(F f) const {  // visits each edge once, u < v
    for (int u = 0; u < n_; ++u) {
      const uint64_t* row = row_ptr(u);
      int start_word = u >> 6;
      for (int i = start_word; i < words_; ++i) {
        uint64_t x = row[i];
        if (i == start_word) {
          int bit = u & 63;
          x &= (bit == 63) ? 0 : (~uint64_t{0} << (bit + 1));
        }
        while (x) {
          int v = static_cast<int>(i * 64 + __builtin_ctzll(x));
          f(u, v);
          x &= x - 1;
        }
      }
    }
  }
  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(static_cast<size_t>(m_));
    for_each_edge([&](int u, int v) { out.emplace_back(u, v); });
    return out;
  }

  std::span<const uint64_t> row(int v) const { return {row_ptr(v), static_cast<size_t>(words_)}; }

  int min_degree() const {
    if (n_ == 0) return 0;
    int d = degree(0);
    for (int v = 1; v < n_; ++v) d = std::min(d, degree(v));
    return d;
  }
  int max_degree() const {
    int d = 0;
    for (int v = 0; v < n_; ++v) d = std::max(d, degree(v));
    return d;
  }

  long long edge_count_within(const VertexSet& s) const {
    long long total = 0;
    s.for_each([&](int v) { total += degree_in(v, s); });
    return total / 2;
  }
  long long edge_count_between(const VertexSet& a, const VertexSet& b) const {
    long long total = 0;
    a.for_each([&](int v) { total += degree_in(v, b); });
    return total;
  }

  VertexSet support() const {  // vertices with degree >= 1
    VertexSet s(n_);
    for (int v = 0; v < n_; ++v)
      if (degree(v) > 0) s.insert(v);
    return s;
  }

  // Connected components as vertex sets (isolated vertices included as
  // singleton components).
  std::vector<VertexSet> components() const;
  // Connectivity of the edge-support (isolated vertices ignored).
  bool support_connected() const;

  Graph union_with(const Graph& o) const;

  bool operator==(const Graph& o) const {
    return n_ == o.n_ && bits_ == o.bits_;
  }

 private:
  void check_pair(int u, int v) const {
    if (u == v) throw std::invalid_argument("self-loop");
    if (u < 0 || v < 0 || u >= n_ || v >= n_)
      throw std::invalid_argument("vertex id out of range");
  }
  const uint64_t* row_ptr(int v) const {
    return bits_.data() + static_cast<size_t>(v) * words_;
  }
  void set_bit(int u, int v) {
    bits_[static_cast<size_t>(u) * words_ + (v >> 6)] |= 1ULL << (v & 63);
  }
  void clear_bit(int u, int v) {
    bits_[static_cast<size_t>(u) * words_ + (v >> 6)] &= ~(1ULL << (v & 63));
  }

  int n_ = 0;
  int words_ = 0;
  long long m_ = 0;
  std::vector<uint64_t> bits_;
};

struct Bipartition {
  VertexSet a;
  VertexSet b;
};

// Ordered list of cycles, each a sequence of exactly cycle_length distinct
// vertices; consecutive pairs (cyclically) must be edges of the target graph.
struct CycleDecomposition {
  int cycle_length = 0;
  std::vector<std::vector<int>> cycles;
};

struct VerifyResult {
  enum class Error { none, bad_cycle, duplicate_edge, uncovered_edge };
  Error error = Error::none;
  std::string detail;
  bool ok() const { return error == Error::none; }
  explicit operator bool() const { return ok(); }
};

bool is_two_divisible(const Graph& g);
bool is_cycle_divisible(const Graph& g, int cycle_length);

// Largest delta with d(v) >= delta * |opposite side| for every vertex of the
// bipartition. Rejects edges inside a part and edges leaving a ∪ b.
double bip_min_degree_fraction(const Graph& g, const Bipartition& p);

VerifyResult verify_decomposition(const Graph& g, const CycleDecomposition& d);

// G − H: edge-set difference on V(G). Requires h.order() <= g.order().
Graph graph_minus(const Graph& g, const Graph& h);
// G \ S: subgraph induced by V(G) ∖ S, relabelled densely. kept_ids, when
// given, receives old ids indexed by new id.
Graph graph_without_vertices(const Graph& g, const VertexSet& removed,
                             std::vector<int>* kept_ids = nullptr);

// Standard small builders.
Graph make_complete(int n);
Graph make_complete_bipartite(int a, int b);
Graph make_cycle(int length);
Graph make_disjoint_union(const Graph& a, const Graph& b);

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Edge-list text format: "n m" then m lines "u v" with 0 <= u < v < n,
// lexicographically sorted. Certificate format: "L c" then one cycle per
// line. Writers emit exactly this shape; readers reject anything else, so
// write→read→write round-trips are byte-exact.
Graph read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const Graph& g);
Graph load_edge_list(const std::string& path);
void save_edge_list(const std::string& path, const Graph& g);

CycleDecomposition read_certificate(std::istream& in);
void write_certificate(std::ostream& out, const CycleDecomposition& d);
CycleDecomposition load_certificate(const std::string& path);
void save_certificate(const std::string& path, const CycleDecomposition& d);

// ceil(frac * n) with snapping for values that are integral up to fp noise;
// the ">= frac * n" thresholds all use this, ties included.
int ceil_fraction(double frac, int n);

}  // namespace cycledec
