#pragma once

// Hot loops, each in an OpenMP variant and a serial reference variant.  The
// two must produce bit-identical results: parallel structure is chosen so
// that no result depends on thread count or schedule (independent iterations
// writing disjoint slots; reductions materialize per-slot partials that are
// then folded serially in index order).

#include <cstdint>
#include <functional>
#include <vector>

#include "annlab/geometry.hpp"

namespace annlab {

enum class ExecMode { Serial, Parallel };

/// Evaluate a scalar field at every grid node, row-parallel.
/// Output is row-major (radial index slow, angular fast).
std::vector<double> eval_scalar_grid(const std::function<double(cplx)>& f,
                                     const PolarGrid& g, ExecMode mode);

/// One red-black relaxation half-sweep over the masked Laplace problem in
/// (log r, theta).  role: 0 = interior, nonzero = fixed.  Updates u in place
/// for nodes of the given color ((i + j) % 2 == color) and returns the max
/// absolute Gauss-Seidel correction seen on that color.
double sor_halfsweep(std::vector<double>& u, const std::vector<std::uint8_t>& role,
                     const PolarGrid& g, int color, double omega, ExecMode mode);

struct WalkOutcome {
    std::int64_t absorbed_one = 0;   // walks ending on the target boundary
    std::int64_t absorbed_zero = 0;  // walks ending elsewhere
    std::int64_t censored = 0;       // walks cut by the step cap
};

/// Batch of independent grid random walks for harmonic measure.  Start node
/// (i0, j0); absorbing roles: 1 -> counts zero, 2 -> counts one.  Neighbor
/// probabilities weight the radial and angular steps by the inverse squared
/// spacings so the walk matches the 5-point scheme.  Each walk runs its own
/// generator seeded by (seed, walk index), so the tally is independent of
/// execution order.
WalkOutcome random_walk_batch(const std::vector<std::uint8_t>& role, const PolarGrid& g,
                              int i0, int j0, std::int64_t n_walks, std::uint64_t seed,
                              std::int64_t max_steps, ExecMode mode);

/// Integrate `integrand(i, j)` * weight over all grid cells, accumulating one
/// partial per radial band and folding the bands in index order.
double banded_cell_sum(const PolarGrid& g,
                       const std::function<double(int, int)>& cell_term, ExecMode mode);

// splitmix64; the per-walk and per-case seeds derive from this
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace annlab
