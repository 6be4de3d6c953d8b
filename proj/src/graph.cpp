#include "cycledec/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace cycledec {

std::vector<VertexSet> Graph::components() const {
  std::vector<VertexSet> out;
  std::vector<bool> seen(n_, false);
  std::vector<int> stack;
  for (int s = 0; s < n_; ++s) {
    if (seen[s]) continue;
    VertexSet comp(n_);
    stack.push_back(s);
    seen[s] = true;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      comp.insert(v);
      for_each_neighbor(v, [&](int u) {
        if (!seen[u]) {
          seen[u] = true;
          stack.push_back(u);
        }
      });
    }
    out.push_back(std::move(comp));
  }
  return out;
}

bool Graph::support_connected() const {
  int nonempty = 0;
  for (const VertexSet& c : components())
    if (edge_count_within(c) > 0) ++nonempty;
  return nonempty <= 1;
}

Graph Graph::union_with(const Graph& o) const {
  Graph out(std::max(n_, o.n_));
  for_each_edge([&](int u, int v) { out.add_edge(u, v); });
  o.for_each_edge([&](int u, int v) { out.add_edge(u, v); });
  return out;
}

bool is_two_divisible(const Graph& g) {
  for (int v = 0; v < g.order(); ++v)
    if (g.degree(v) % 2 != 0) return false;
  return true;
}

bool is_cycle_divisible(const Graph& g, int cycle_length) {
  if (cycle_length < 3) throw std::invalid_argument("cycle length must be >= 3");
  return g.edge_count() % cycle_length == 0 && is_two_divisible(g);
}

double bip_min_degree_fraction(const Graph& g, const Bipartition& p) {
  if (p.a.intersects(p.b)) throw std::invalid_argument("bipartition parts overlap");
  const int na = p.a.size();
  const int nb = p.b.size();
  if (na == 0 || nb == 0) {
    if (g.edge_count() == 0) return 0.0;
    throw std::invalid_argument("empty side in a graph with edges");
  }
  bool bad = false;
  g.for_each_edge([&](int u, int v) {
    bool cross = (p.a.contains(u) && p.b.contains(v)) ||
                 (p.b.contains(u) && p.a.contains(v));
    if (!cross) bad = true;
  });
  if (bad) throw std::invalid_argument("edge not crossing the bipartition");
  double delta = 1.0;
  p.a.for_each([&](int v) {
    delta = std::min(delta, static_cast<double>(g.degree(v)) / nb);
  });
  p.b.for_each([&](int v) {
    delta = std::min(delta, static_cast<double>(g.degree(v)) / na);
  });
  return delta;
}

VerifyResult verify_decomposition(const Graph& g, const CycleDecomposition& d) {
  const int L = d.cycle_length;
  if (L < 3)
    return {VerifyResult::Error::bad_cycle, "cycle length below 3"};
  Graph used(g.order());
  for (size_t ci = 0; ci < d.cycles.size(); ++ci) {
    const auto& cyc = d.cycles[ci];
    std::string where = "cycle " + std::to_string(ci);
    if (static_cast<int>(cyc.size()) != L)
      return {VerifyResult::Error::bad_cycle, where + ": wrong length"};
    VertexSet seen(g.order());
    for (int v : cyc) {
      if (v < 0 || v >= g.order())
        return {VerifyResult::Error::bad_cycle, where + ": vertex out of range"};
      if (seen.contains(v))
        return {VerifyResult::Error::bad_cycle, where + ": repeated vertex"};
      seen.insert(v);
    }
    for (int i = 0; i < L; ++i) {
      int u = cyc[i];
      int v = cyc[(i + 1) % L];
      if (!g.has_edge(u, v))
        return {VerifyResult::Error::bad_cycle,
                where + ": missing edge " + std::to_string(u) + "-" + std::to_string(v)};
      if (used.has_edge(u, v))
        return {VerifyResult::Error::duplicate_edge,
                where + ": edge " + std::to_string(u) + "-" + std::to_string(v) +
                    " already covered"};
      used.add_edge(u, v);
    }
  }
  if (used.edge_count() != g.edge_count()) {
    long long missing = g.edge_count() - used.edge_count();
    return {VerifyResult::Error::uncovered_edge,
            std::to_string(missing) + " uncovered edge(s)"};
  }
  return {};
}

Graph graph_minus(const Graph& g, const Graph& h) {
  if (h.order() > g.order())
    throw std::invalid_argument("graph_minus: unknown vertex ids in h");
  Graph out = g;
  h.for_each_edge([&](int u, int v) { out.remove_edge(u, v); });
  return out;
}

Graph graph_without_vertices(const Graph& g, const VertexSet& removed,
                             std::vector<int>* kept_ids) {
  if (removed.universe() != g.order())
    throw std::invalid_argument("graph_without_vertices: universe mismatch");
  std::vector<int> new_id(g.order(), -1);
  std::vector<int> kept;
  for (int v = 0; v < g.order(); ++v) {
    if (!removed.contains(v)) {
      new_id[v] = static_cast<int>(kept.size());
      kept.push_back(v);
    }
  }
  Graph out(static_cast<int>(kept.size()));
  g.for_each_edge([&](int u, int v) {
    if (new_id[u] >= 0 && new_id[v] >= 0) out.add_edge(new_id[u], new_id[v]);
  });
  if (kept_ids) *kept_ids = std::move(kept);
  return out;
}

Graph make_complete(int n) {
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

Graph make_complete_bipartite(int a, int b) {
  Graph g(a + b);
  for (int u = 0; u < a; ++u)
    for (int v = a; v < a + b; ++v) g.add_edge(u, v);
  return g;
}

Graph make_cycle(int length) {
  if (length < 3) throw std::invalid_argument("cycle length must be >= 3");
  Graph g(length);
  for (int v = 0; v < length; ++v) g.add_edge(v, (v + 1) % length);
  return g;
}

Graph make_disjoint_union(const Graph& a, const Graph& b) {
  Graph g(a.order() + b.order());
  a.for_each_edge([&](int u, int v) { g.add_edge(u, v); });
  b.for_each_edge([&](int u, int v) { g.add_edge(a.order() + u, a.order() + v); });
  return g;
}

namespace {

std::vector<std::string> read_nonempty_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

bool parse_ints(const std::string& line, std::vector<long long>& out) {
  out.clear();
  std::istringstream ss(line);
  long long x;
  while (ss >> x) out.push_back(x);
  std::string trailing;
  ss.clear();
  return !(ss >> trailing);
}

}  // namespace

Graph read_edge_list(std::istream& in) {
  auto lines = read_nonempty_lines(in);
  if (lines.empty()) throw ParseError("edge list: empty input");
  std::vector<long long> header;
  if (!parse_ints(lines[0], header) || header.size() != 2)
    throw ParseError("edge list: header must be 'n m'");
  long long n = header[0], m = header[1];
  if (n < 0 || m < 0 || n > (1 << 20)) throw ParseError("edge list: bad header values");
  if (static_cast<long long>(lines.size()) != m + 1)
    throw ParseError("edge list: expected " + std::to_string(m) + " edge lines");
  Graph g(static_cast<int>(n));
  for (long long i = 1; i <= m; ++i) {
    std::vector<long long> e;
    if (!parse_ints(lines[i], e) || e.size() != 2)
      throw ParseError("edge list: bad edge line " + std::to_string(i));
    long long u = e[0], v = e[1];
    if (!(0 <= u && u < v && v < n))
      throw ParseError("edge list: edge must satisfy 0 <= u < v < n at line " +
                       std::to_string(i));
    if (g.has_edge(static_cast<int>(u), static_cast<int>(v)))
      throw ParseError("edge list: duplicate edge at line " + std::to_string(i));
    g.add_edge(static_cast<int>(u), static_cast<int>(v));
  }
  return g;
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.order() << ' ' << g.edge_count() << '\n';
  g.for_each_edge([&](int u, int v) { out << u << ' ' << v << '\n'; });
}

Graph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_edge_list(in);
}

void save_edge_list(const std::string& path, const Graph& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  write_edge_list(out, g);
}

CycleDecomposition read_certificate(std::istream& in) {
  auto lines = read_nonempty_lines(in);
  if (lines.empty()) throw ParseError("certificate: empty input");
  std::vector<long long> header;
  if (!parse_ints(lines[0], header) || header.size() != 2)
    throw ParseError("certificate: header must be 'L c'");
  long long L = header[0], c = header[1];
  if (L < 3 || c < 0) throw ParseError("certificate: bad header values");
  if (static_cast<long long>(lines.size()) != c + 1)
    throw ParseError("certificate: expected " + std::to_string(c) + " cycle lines");
  CycleDecomposition d;
  d.cycle_length = static_cast<int>(L);
  for (long long i = 1; i <= c; ++i) {
    std::vector<long long> vs;
    if (!parse_ints(lines[i], vs) || static_cast<long long>(vs.size()) != L)
      throw ParseError("certificate: cycle line " + std::to_string(i) +
                       " must list exactly " + std::to_string(L) + " vertices");
    std::vector<int> cyc(vs.begin(), vs.end());
    d.cycles.push_back(std::move(cyc));
  }
  return d;
}

void write_certificate(std::ostream& out, const CycleDecomposition& d) {
  out << d.cycle_length << ' ' << d.cycles.size() << '\n';
  for (const auto& cyc : d.cycles) {
    for (size_t i = 0; i < cyc.size(); ++i) {
      if (i) out << ' ';
      out << cyc[i];
    }
    out << '\n';
  }
}

CycleDecomposition load_certificate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_certificate(in);
}

void save_certificate(const std::string& path, const CycleDecomposition& d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  write_certificate(out, d);
}

int ceil_fraction(double frac, int n) {
  double x = frac * n;
  double r = std::round(x);
  if (std::abs(x - r) < 1e-9) return static_cast<int>(r);
  return static_cast<int>(std::ceil(x));
}

}  // namespace cycledec
