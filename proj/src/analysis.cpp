#include "cycledec/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "cycledec/rng.hpp"

namespace cycledec {

VertexSet robust_neighborhood(const Graph& g, const VertexSet& s, double nu) {
  const int n = g.order();
  const int threshold = ceil_fraction(nu, n);
  std::vector<char> in(n, 0);
#pragma omp parallel for schedule(static)
  for (int v = 0; v < n; ++v) in[v] = g.degree_in(v, s) >= threshold;
  VertexSet r(n);
  for (int v = 0; v < n; ++v)
    if (in[v]) r.insert(v);
  return r;
}

bool is_expanding(const Graph& g, const VertexSet& s, double nu) {
  const int n = g.order();
  return robust_neighborhood(g, s, nu).size() >= n / 2.0 + nu * n - 1e-9;
}

bool is_expander(const Graph& g, double nu) {
  const int n = g.order();
  const int threshold = ceil_fraction(nu, n);
  const double needed = n / 2.0 + nu * n - 1e-9;
  bool good = true;
#pragma omp parallel for schedule(dynamic, 8)
  for (int x = 0; x < n; ++x) {
    bool local;
#pragma omp atomic read
    local = good;
    if (!local) continue;
    int count = 0;
    for (int v = 0; v < n; ++v)
      if (g.common_degree(v, x) >= threshold) ++count;
    if (count < needed) {
#pragma omp atomic write
      good = false;
    }
  }
  return good;
}

bool is_expanding_within(const Graph& g, const VertexSet& s, const VertexSet& u,
                         double nu) {
  const int nu_size = u.size();
  const int threshold = ceil_fraction(nu, nu_size);
  int count = 0;
  u.for_each([&](int v) {
    if (g.degree_in(v, s) >= threshold) ++count;
  });
  return count >= nu_size / 2.0 + nu * nu_size - 1e-9;
}

namespace {

long long binom_table[64][64];
bool binom_ready = false;

void ensure_binom() {
  if (binom_ready) return;
  for (int i = 0; i < 64; ++i) {
    binom_table[i][0] = 1;
    for (int j = 1; j <= i; ++j)
      binom_table[i][j] = binom_table[i - 1][j - 1] +
                          (j <= i - 1 ? binom_table[i - 1][j] : 0);
  }
  binom_ready = true;
}

// combinadic unranking: the rank-th k-subset of [0, n) in colex order
void unrank_subset(long long rank, int n, int k, std::vector<int>& out) {
  out.clear();
  int a = n;
  long long r = rank;
  for (int i = k; i >= 1; --i) {
    --a;
    while (binom_table[a][i] > r) --a;
    r -= binom_table[a][i];
    out.push_back(a);
  }
}

enum class Objective { cut, inside };

long long objective_value(const Graph& g, const VertexSet& s, Objective obj) {
  if (obj == Objective::inside) return g.edge_count_within(s);
  long long cut = 0;
  s.for_each([&](int v) { cut += g.degree(v) - g.degree_in(v, s); });
  return cut;
}

ClosenessResult exact_closeness(const Graph& g, Objective obj) {
  ensure_binom();
  const int n = g.order();
  const int k = n / 2;
  const long long total = binom_table[n][k];
  long long best_value = -1;
  long long best_rank = -1;

#pragma omp parallel
  {
    long long my_value = -1, my_rank = -1;
    std::vector<int> subset;
    VertexSet s(n);
#pragma omp for schedule(static) nowait
    for (long long rank = 0; rank < total; ++rank) {
      unrank_subset(rank, n, k, subset);
      s.clear();
      for (int v : subset) s.insert(v);
      long long value = objective_value(g, s, obj);
      if (my_value < 0 || value < my_value ||
          (value == my_value && rank < my_rank)) {
        my_value = value;
        my_rank = rank;
      }
    }
#pragma omp critical
    {
      if (best_value < 0 || my_value < best_value ||
          (my_value == best_value && my_rank < best_rank)) {
        best_value = my_value;
        best_rank = my_rank;
      }
    }
  }

  std::vector<int> subset;
  unrank_subset(best_rank, n, k, subset);
  ClosenessResult res;
  res.witness = VertexSet(n);
  for (int v : subset) res.witness.insert(v);
  res.epsilon = n == 0 ? 0.0 : static_cast<double>(best_value) / (1.0 * n * n);
  res.exact = true;
  return res;
}

struct AnnealState {
  VertexSet s;
  std::vector<int> deg_in_s;  // d(v, S) for every v
  long long value = 0;
};

ClosenessResult anneal_closeness(const Graph& g, Objective obj, uint64_t seed) {
  const int n = g.order();
  const int k = n / 2;
  const int restarts = 20;
  const int sweeps = 60;

  struct Best {
    long long value = -1;
    int restart = -1;
    VertexSet witness;
  };
  std::vector<Best> results(restarts);

#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < restarts; ++r) {
    Rng rng(Rng(seed).fork("closeness").fork(static_cast<uint64_t>(r)).next());
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);
    AnnealState st;
    st.s = VertexSet(n);
    for (int i = 0; i < k; ++i) st.s.insert(order[i]);
    st.deg_in_s.assign(n, 0);
    for (int v = 0; v < n; ++v) st.deg_in_s[v] = g.degree_in(v, st.s);
    st.value = objective_value(g, st.s, obj);

    auto swap_delta = [&](int u, int v) {  // u in S, v outside
      long long d;
      if (obj == Objective::inside) {
        d = static_cast<long long>(st.deg_in_s[v]) - st.deg_in_s[u];
        if (g.has_edge(u, v)) --d;  // v's count includes u, which leaves
      } else {
        long long du = g.degree(u), dv = g.degree(v);
        // cut change when u leaves S and v enters
        d = (dv - 2LL * st.deg_in_s[v]) - (du - 2LL * st.deg_in_s[u]);
        if (g.has_edge(u, v)) d += 2;  // the u-v edge stays a cut edge
      }
      return d;
    };
    auto apply_swap = [&](int u, int v) {
      st.s.erase(u);
      g.for_each_neighbor(u, [&](int w) { --st.deg_in_s[w]; });
      st.s.insert(v);
      g.for_each_neighbor(v, [&](int w) { ++st.deg_in_s[w]; });
    };

    long long best_value = st.value;
    VertexSet best_witness = st.s;
    double temperature = std::max<long long>(1, g.edge_count() / std::max(1, n));
    for (int sweep = 0; sweep < sweeps; ++sweep) {
      for (int step = 0; step < n; ++step) {
        int u = -1, v = -1;
        // random in/out pair
        int tries = 0;
        while (tries++ < 32) {
          int cand = rng.range(0, n);
          if (st.s.contains(cand)) {
            u = cand;
            break;
          }
        }
        while (tries++ < 64) {
          int cand = rng.range(0, n);
          if (!st.s.contains(cand)) {
            v = cand;
            break;
          }
        }
        if (u < 0 || v < 0) continue;
        long long delta = swap_delta(u, v);
        if (delta <= 0 || rng.unit() < std::exp(-static_cast<double>(delta) /
                                                std::max(1e-9, temperature))) {
          apply_swap(u, v);
          st.value += delta;
          if (st.value < best_value) {
            best_value = st.value;
            best_witness = st.s;
          }
        }
      }
      temperature *= 0.88;
    }
    results[r] = {best_value, r, best_witness};
  }

  Best overall;
  for (const Best& b : results) {
    if (overall.value < 0 || b.value < overall.value ||
        (b.value == overall.value && b.restart < overall.restart))
      overall = b;
  }
  ClosenessResult res;
  res.witness = overall.witness;
  res.epsilon = static_cast<double>(overall.value) / (1.0 * n * n);
  res.exact = false;
  return res;
}

ClosenessResult closeness(const Graph& g, Objective obj, uint64_t seed,
                          bool force_exact) {
  if (g.order() < 2) throw std::invalid_argument("closeness: need n >= 2");
  if (g.order() <= 20 || force_exact) return exact_closeness(g, obj);
  return anneal_closeness(g, obj, seed);
}

}  // namespace

ClosenessResult closeness_two_cliques(const Graph& g, uint64_t seed,
                                      bool force_exact) {
  return closeness(g, Objective::cut, seed, force_exact);
}

ClosenessResult closeness_bipartite(const Graph& g, uint64_t seed,
                                    bool force_exact) {
  return closeness(g, Objective::inside, seed, force_exact);
}

const char* to_string(StructureKind kind) {
  switch (kind) {
    case StructureKind::expander: return "expander";
    case StructureKind::close_two_cliques: return "close_two_cliques";
    case StructureKind::close_bipartite: return "close_bipartite";
    case StructureKind::extremal_type1: return "extremal_type1";
    case StructureKind::extremal_type2: return "extremal_type2";
    case StructureKind::none: return "none";
  }
  return "none";
}

StructureReport classify(const Graph& g, double nu, double epsilon,
                         uint64_t seed) {
  StructureReport report;
  if (is_expander(g, nu)) {
    report.kind = StructureKind::expander;
    report.parameter = nu;
    return report;
  }
  ClosenessResult cliques = closeness_two_cliques(g, seed);
  if (cliques.epsilon <= epsilon + 1e-12) {
    report.kind = StructureKind::close_two_cliques;
    report.parameter = cliques.epsilon;
    report.witness = {cliques.witness};
    report.exact = cliques.exact;
    return report;
  }
  ClosenessResult bip = closeness_bipartite(g, seed);
  if (bip.epsilon <= epsilon + 1e-12) {
    report.kind = StructureKind::close_bipartite;
    report.parameter = bip.epsilon;
    report.witness = {bip.witness};
    report.exact = bip.exact;
    return report;
  }
  report.kind = StructureKind::none;
  report.exact = cliques.exact && bip.exact;
  return report;
}

namespace {

// Maximal witnesses serve the pipelines best: grow both sides as far as the
// defining condition allows.
void grow_type1(const Graph& g, VertexSet& s, VertexSet& t) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < g.order(); ++v) {
      if (s.contains(v) || t.contains(v)) continue;
      if (g.degree_in(v, t) == 0 && !t.contains(v)) {
        s.insert(v);
        changed = true;
      } else if (g.degree_in(v, s) == 0) {
        t.insert(v);
        changed = true;
      }
    }
  }
}

void grow_type2(const Graph& g, VertexSet& s, VertexSet& t) {
  for (int v = 0; v < g.order(); ++v) {
    if (s.contains(v) || t.contains(v)) continue;
    if (g.degree_in(v, s) == 0)
      s.insert(v);
    else if (g.degree_in(v, t) == 0)
      t.insert(v);
  }
}

// exact type-1 search: S of size exactly s0 with |V \ (S ∪ N(S))| >= s0
std::optional<std::pair<VertexSet, VertexSet>> exact_type1(const Graph& g, int s0) {
  const int n = g.order();
  std::vector<int> subset;
  ensure_binom();
  const long long total = binom_table[n][s0];
  for (long long rank = 0; rank < total; ++rank) {
    unrank_subset(rank, n, s0, subset);
    VertexSet s(n), closed(n);
    for (int v : subset) {
      s.insert(v);
      closed.insert(v);
    }
    for (int v : subset) closed |= g.neighbors(v);
    VertexSet t = closed.complement();
    if (t.size() >= s0) {
      grow_type1(g, s, t);
      return std::make_pair(s, t);
    }
  }
  return std::nullopt;
}

bool independent(const Graph& g, const VertexSet& s) {
  return g.edge_count_within(s) == 0;
}

// exact independent set of size k within allowed, smallest-id branching
bool find_independent(const Graph& g, const VertexSet& allowed, int k,
                      VertexSet& out) {
  if (k == 0) return true;
  if (allowed.size() < k) return false;
  int v = allowed.first();
  // branch: take v
  VertexSet take = allowed;
  take.erase(v);
  take.subtract(g.neighbors(v));
  out.insert(v);
  if (find_independent(g, take, k - 1, out)) return true;
  out.erase(v);
  // branch: skip v
  VertexSet skip = allowed;
  skip.erase(v);
  return find_independent(g, skip, k, out);
}

std::optional<std::pair<VertexSet, VertexSet>> exact_type2(const Graph& g, int s0) {
  const int n = g.order();
  // enumerate independent S of size s0, then search T in the complement
  std::vector<int> subset;
  ensure_binom();
  const long long total = binom_table[n][s0];
  for (long long rank = 0; rank < total; ++rank) {
    unrank_subset(rank, n, s0, subset);
    VertexSet s(n);
    for (int v : subset) s.insert(v);
    if (!independent(g, s)) continue;
    VertexSet allowed = s.complement();
    VertexSet t(n);
    if (find_independent(g, allowed, s0, t)) {
      grow_type2(g, s, t);
      return std::make_pair(s, t);
    }
  }
  return std::nullopt;
}

std::optional<std::pair<VertexSet, VertexSet>> greedy_type1(const Graph& g, int s0,
                                                            uint64_t seed) {
  const int n = g.order();
  for (int restart = 0; restart < 20; ++restart) {
    Rng rng(Rng(seed).fork("t1").fork(static_cast<uint64_t>(restart)).next());
    int u = rng.range(0, n);
    VertexSet s(n), t(n);
    s.insert(u);
    for (int round = 0; round < 2 * s0 + 4; ++round) {
      bool grow_s = s.size() <= t.size();
      VertexSet cand = VertexSet::full(n);
      const VertexSet& other = grow_s ? t : s;
      cand.subtract(s);
      cand.subtract(t);
      other.for_each([&](int v) { cand.subtract(g.neighbors(v)); });
      if (cand.empty()) break;
      // the candidate with fewest neighbours keeps the pools large
      int best = -1, best_deg = n + 1;
      cand.for_each([&](int v) {
        int d = g.degree(v);
        if (d < best_deg) {
          best = v;
          best_deg = d;
        }
      });
      (grow_s ? s : t).insert(best);
      if (static_cast<int>(s.size()) >= s0 && static_cast<int>(t.size()) >= s0) {
        grow_type1(g, s, t);
        return std::make_pair(s, t);
      }
    }
  }
  return std::nullopt;
}

std::optional<std::pair<VertexSet, VertexSet>> greedy_type2(const Graph& g, int s0,
                                                            uint64_t seed) {
  const int n = g.order();
  auto greedy_ind = [&](const VertexSet& allowed, Rng& rng) {
    std::vector<int> order = allowed.to_vector();
    // low-degree-first with seeded tie noise
    std::vector<std::pair<long long, int>> keyed;
    keyed.reserve(order.size());
    for (int v : order)
      keyed.push_back({static_cast<long long>(g.degree(v)) * 1024 +
                           static_cast<long long>(rng.below(1024)),
                       v});
    std::sort(keyed.begin(), keyed.end());
    VertexSet s(n);
    for (auto [key, v] : keyed) {
      (void)key;
      if (g.degree_in(v, s) == 0) s.insert(v);
    }
    return s;
  };
  for (int restart = 0; restart < 20; ++restart) {
    Rng rng(Rng(seed).fork("t2").fork(static_cast<uint64_t>(restart)).next());
    VertexSet s = greedy_ind(VertexSet::full(n), rng);
    if (static_cast<int>(s.size()) < s0) continue;
    VertexSet t = greedy_ind(s.complement(), rng);
    if (static_cast<int>(t.size()) >= s0) {
      grow_type2(g, s, t);
      return std::make_pair(s, t);
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<StructureReport> find_m_extremal(const Graph& g, int m,
                                               uint64_t seed) {
  const int n = g.order();
  const double bound = n / 3.0 - m;
  if (bound <= 1e-9) return std::nullopt;  // degenerate regime
  double r = std::round(bound);
  int s0 = std::abs(bound - r) < 1e-9 ? static_cast<int>(r)
                                      : static_cast<int>(std::ceil(bound));
  const bool exact = n <= 18;

  auto t1 = exact ? exact_type1(g, s0) : greedy_type1(g, s0, seed);
  if (t1) {
    StructureReport report;
    report.kind = StructureKind::extremal_type1;
    report.witness = {t1->first, t1->second};
    report.parameter = m;
    report.exact = exact;
    return report;
  }
  auto t2 = exact ? exact_type2(g, s0) : greedy_type2(g, s0, seed);
  if (t2) {
    StructureReport report;
    report.kind = StructureKind::extremal_type2;
    report.witness = {t2->first, t2->second};
    report.parameter = m;
    report.exact = exact;
    return report;
  }
  return std::nullopt;
}

std::optional<std::pair<VertexSet, VertexSet>> find_nonadjacent_pair(
    const Graph& g, int min_size, bool require_disjoint, uint64_t seed) {
  const int n = g.order();
  if (min_size < 1 || min_size > n) return std::nullopt;
  if (require_disjoint) {
    auto t1 = n <= 18 ? exact_type1(g, min_size) : greedy_type1(g, min_size, seed);
    return t1;
  }
  // X may meet Y: pick X, then Y = V \ N(X); grow X greedily from
  // low-degree seeds to keep N(X) small
  for (int restart = 0; restart < 24; ++restart) {
    Rng rng(Rng(seed).fork("nonadj").fork(static_cast<uint64_t>(restart)).next());
    std::vector<std::pair<long long, int>> keyed;
    for (int v = 0; v < n; ++v)
      keyed.push_back({static_cast<long long>(g.degree(v)) * 1024 +
                           static_cast<long long>(rng.below(1024)),
                       v});
    std::sort(keyed.begin(), keyed.end());
    VertexSet x(n), nx(n);
    for (auto [key, v] : keyed) {
      (void)key;
      VertexSet next_nx = nx | g.neighbors(v);
      if (n - next_nx.size() < min_size) continue;
      x.insert(v);
      nx = next_nx;
      if (static_cast<int>(x.size()) >= min_size) break;
    }
    if (static_cast<int>(x.size()) < min_size) continue;
    VertexSet y = nx.complement();
    if (static_cast<int>(y.size()) < min_size) continue;
    bool clean = true;  // no edge may join X and Y, overlap included
    g.for_each_edge([&](int a, int b) {
      if ((x.contains(a) && y.contains(b)) || (y.contains(a) && x.contains(b)))
        clean = false;
    });
    if (clean) return std::make_pair(x, y);
  }
  return std::nullopt;
}

namespace {

std::vector<int> level_sizes(int n, double mu, int m) {
  std::vector<int> sizes = {n};
  if (m > n || m < 1) return {};
  if (m == n) return sizes;
  while (true) {
    int next = static_cast<int>(std::floor(mu * sizes.back() + 1e-9));
    if (next <= m) break;
    sizes.push_back(next);
  }
  sizes.push_back(m);
  return sizes;
}

VertexSet sample_subset(const VertexSet& from, int size, Rng& rng) {
  std::vector<int> pool = from.to_vector();
  rng.shuffle(pool);
  VertexSet out(from.universe());
  for (int i = 0; i < size; ++i) out.insert(pool[i]);
  return out;
}

bool level_ok(const Graph& g, const VertexSet& prev, const VertexSet& cur,
              VortexFlavor flavor, double check, const Bipartition* sides) {
  switch (flavor) {
    case VortexFlavor::min_degree: {
      const int size = cur.size();
      const int threshold = ceil_fraction(check, size);
      bool ok = true;
      prev.for_each([&](int x) {
        if (g.degree_in(x, cur) < threshold) ok = false;
      });
      return ok;
    }
    case VortexFlavor::bipartite: {
      bool ok = true;
      for (int side = 0; side < 2; ++side) {
        const VertexSet& part = side == 0 ? sides->a : sides->b;
        VertexSet cur_part = cur & part;
        const int threshold = ceil_fraction(check, cur_part.size());
        prev.for_each([&](int x) {
          if (part.contains(x)) return;  // degree into the opposite side
          if (g.degree_in(x, cur_part) < threshold) ok = false;
        });
      }
      return ok;
    }
    case VortexFlavor::expander: {
      bool ok = true;
      std::vector<int> xs = prev.to_vector();
#pragma omp parallel for schedule(dynamic, 4)
      for (size_t i = 0; i < xs.size(); ++i) {
        bool local;
#pragma omp atomic read
        local = ok;
        if (!local) continue;
        VertexSet nbrs = g.neighbors(xs[i]);
        nbrs &= cur;
        if (!is_expanding_within(g, nbrs, cur, check)) {
#pragma omp atomic write
          ok = false;
        }
      }
      return ok;
    }
  }
  return false;
}

}  // namespace

std::optional<Vortex> vortex_sample(const Graph& g, VortexFlavor flavor,
                                    double delta_or_nu, double mu, int m,
                                    uint64_t seed, int retry_cap,
                                    const Bipartition* sides, double weaken) {
  if (flavor == VortexFlavor::bipartite && !sides)
    throw std::invalid_argument("vortex_sample: bipartite flavor needs sides");
  const int n = g.order();
  auto sizes = level_sizes(n, mu, m);
  if (sizes.empty()) return std::nullopt;

  Vortex v;
  v.flavor = flavor;
  v.check_value = delta_or_nu - (weaken < 0 ? mu : weaken);
  v.mu = mu;
  v.m = m;
  if (sides) v.sides = *sides;
  v.levels = {VertexSet::full(n)};

  Rng rng(Rng(seed).fork("vortex").next());
  for (size_t i = 1; i < sizes.size(); ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < retry_cap; ++attempt) {
      VertexSet cur(n);
      if (flavor == VortexFlavor::bipartite) {
        VertexSet prev_a = v.levels.back() & sides->a;
        VertexSet prev_b = v.levels.back() & sides->b;
        int want_a, want_b;
        if (i + 1 < sizes.size()) {
          want_a = static_cast<int>(std::floor(mu * prev_a.size() + 1e-9));
          want_b = static_cast<int>(std::floor(mu * prev_b.size() + 1e-9));
        } else {
          want_a = sizes[i] / 2;
          want_b = sizes[i] - want_a;
        }
        if (want_a < 1 || want_b < 1 || want_a > prev_a.size() ||
            want_b > prev_b.size())
          return std::nullopt;
        cur = sample_subset(prev_a, want_a, rng);
        cur |= sample_subset(prev_b, want_b, rng);
      } else {
        cur = sample_subset(v.levels.back(), sizes[i], rng);
      }
      if (level_ok(g, v.levels.back(), cur, flavor, v.check_value, sides)) {
        v.levels.push_back(cur);
        placed = true;
        break;
      }
    }
    if (!placed) return std::nullopt;
  }
  return v;
}

bool validate_vortex(const Graph& g, const Vortex& v) {
  if (v.levels.empty()) return false;
  if (v.flavor == VortexFlavor::bipartite && !v.sides) return false;
  if (!(v.levels.front() == VertexSet::full(g.order()))) return false;
  if (static_cast<int>(v.levels.back().size()) != v.m) return false;
  for (size_t i = 1; i < v.levels.size(); ++i) {
    // containment
    VertexSet outside = v.levels[i];
    outside.subtract(v.levels[i - 1]);
    if (!outside.empty()) return false;
    // sizes: floor rule on intermediate levels, m on the last
    if (i + 1 < v.levels.size()) {
      if (v.flavor == VortexFlavor::bipartite) {
        for (int side = 0; side < 2; ++side) {
          const VertexSet& part = side == 0 ? v.sides->a : v.sides->b;
          int prev = (v.levels[i - 1] & part).size();
          int cur = (v.levels[i] & part).size();
          if (cur != static_cast<int>(std::floor(v.mu * prev + 1e-9))) return false;
        }
      } else {
        if (static_cast<int>(v.levels[i].size()) !=
            static_cast<int>(std::floor(v.mu * v.levels[i - 1].size() + 1e-9)))
          return false;
      }
    }
    const Bipartition* sides = v.sides ? &*v.sides : nullptr;
    if (!level_ok(g, v.levels[i - 1], v.levels[i], v.flavor, v.check_value, sides))
      return false;
  }
  return true;
}

}  // namespace cycledec
