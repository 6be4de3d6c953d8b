#pragma once

#include "cycledec/analysis.hpp"
#include "cycledec/graph.hpp"

// Plain single-threaded implementations of the parallel analysis kernels.
// Tests check the fast paths against these; kernel_bench compares timings.
namespace cycledec::serial {

VertexSet robust_neighborhood(const Graph& g, const VertexSet& s, double nu);
bool is_expander(const Graph& g, double nu);

// Exhaustive minimum over all floor(n/2)-subsets; n <= 28 only.
ClosenessResult closeness_two_cliques_exact(const Graph& g);
ClosenessResult closeness_bipartite_exact(const Graph& g);

}  // namespace cycledec::serial
