// Compares the parallel analysis kernels against their serial reference on
// growing instances and checks they agree.

#include <chrono>
#include <cstdio>

#include "cycledec/analysis.hpp"
#include "cycledec/graph.hpp"
#include "cycledec/reference.hpp"
#include "cycledec/rng.hpp"

#ifdef CYCLEDEC_HAVE_OPENMP
#include <omp.h>
#endif

using namespace cycledec;

namespace {

Graph random_graph(int n, double p, uint64_t seed) {
  Rng rng(seed);
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.chance(p)) g.add_edge(u, v);
  return g;
}

template <class F>
double time_ms(F f, int repeats = 3) {
  double best = 1e18;
  for (int r = 0; r < repeats; ++r) {
    auto start = std::chrono::steady_clock::now();
    f();
    auto ms = std::chrono::duration<double, std::milli>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    if (ms < best) best = ms;
  }
  return best;
}

}  // namespace

int main() {
#ifdef CYCLEDEC_HAVE_OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif
  std::printf("%-22s %6s %12s %12s %8s %6s\n", "kernel", "n", "serial_ms",
              "parallel_ms", "speedup", "agree");

  for (int n : {512, 1024, 2048, 4096}) {
    Graph g = random_graph(n, 0.5, 99);
    VertexSet s(n);
    Rng rng(7);
    for (int v = 0; v < n; ++v)
      if (rng.chance(0.5)) s.insert(v);

    VertexSet fast_r, slow_r;
    double par = time_ms([&] { fast_r = robust_neighborhood(g, s, 0.2); });
    double ser = time_ms([&] { slow_r = serial::robust_neighborhood(g, s, 0.2); });
    std::printf("%-22s %6d %12.2f %12.2f %7.2fx %6s\n", "robust_neighborhood", n,
                ser, par, ser / par, fast_r == slow_r ? "yes" : "NO");
  }

  for (int n : {256, 512, 1024}) {
    Graph g = random_graph(n, 0.5, 17);
    bool fast_e = false, slow_e = false;
    double par = time_ms([&] { fast_e = is_expander(g, 0.1); });
    double ser = time_ms([&] { slow_e = serial::is_expander(g, 0.1); }, 1);
    std::printf("%-22s %6d %12.2f %12.2f %7.2fx %6s\n", "is_expander", n, ser,
                par, ser / par, fast_e == slow_e ? "yes" : "NO");
  }

  for (int n : {18, 20, 22}) {
    Graph g = random_graph(n, 0.5, 23);
    ClosenessResult fast_c, slow_c;
    double par = time_ms([&] { fast_c = closeness_two_cliques(g, 0, true); });
    double ser =
        time_ms([&] { slow_c = serial::closeness_two_cliques_exact(g); }, 1);
    std::printf("%-22s %6d %12.2f %12.2f %7.2fx %6s\n", "closeness_exact", n,
                ser, par, ser / par,
                fast_c.epsilon == slow_c.epsilon ? "yes" : "NO");
  }
  return 0;
}
