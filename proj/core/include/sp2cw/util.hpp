// Deterministic parallel helpers: work items are indexed, each item derives
// its own random stream, and reductions run in a fixed tree order, so results
// do not depend on the worker count.
#pragma once

#include <functional>
#include <span>

namespace sp2cw {

// Runs fn(0..n-1), optionally across `jobs` threads. Results must go into
// per-index slots; the function must not touch shared mutable state.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn);

// Pairwise (tree) summation in index order; independent of chunking.
double tree_sum(std::span<const double> values);

}  // namespace sp2cw
