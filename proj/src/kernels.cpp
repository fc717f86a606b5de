#include "annlab/kernels.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace annlab {

std::vector<double> eval_scalar_grid(const std::function<double(cplx)>& f,
                                     const PolarGrid& g, ExecMode mode) {
    std::vector<double> out(g.size());
    const int nr = g.n_radial, na = g.n_angular;
    if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < na; ++j) out[g.index(i, j)] = f(g.node(i, j));
    } else {
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < na; ++j) out[g.index(i, j)] = f(g.node(i, j));
    }
    return out;
}

namespace {

inline double sor_update(std::vector<double>& u, const std::vector<std::uint8_t>& role,
                         const PolarGrid& g, int i, int j, double cs, double ct,
                         double inv_diag, double omega) {
    const int na = g.n_angular;
    std::size_t idx = g.index(i, j);
    if (role[idx] != 0) return 0.0;
    int jl = (j == 0) ? na - 1 : j - 1;
    int jr = (j == na - 1) ? 0 : j + 1;
    double gs = (cs * (u[g.index(i + 1, j)] + u[g.index(i - 1, j)]) +
                 ct * (u[g.index(i, jr)] + u[g.index(i, jl)])) * inv_diag;
    double corr = gs - u[idx];
    u[idx] += omega * corr;
    return std::abs(corr);
}

}  // namespace

double sor_halfsweep(std::vector<double>& u, const std::vector<std::uint8_t>& role,
                     const PolarGrid& g, int color, double omega, ExecMode mode) {
    const int nr = g.n_radial;
    const double ds = g.ds(), dt = g.dtheta();
    const double cs = 1.0 / (ds * ds), ct = 1.0 / (dt * dt);
    const double inv_diag = 1.0 / (2.0 * (cs + ct));

    // Same-color nodes read only opposite-color neighbors, so the row order
    // cannot change any value; only the max-fold order is pinned below.
    std::vector<double> row_max(std::size_t(nr), 0.0);
    if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 1; i < nr - 1; ++i) {
            double m = 0.0;
            for (int j = (i + color) % 2; j < g.n_angular; j += 2)
                m = std::max(m, sor_update(u, role, g, i, j, cs, ct, inv_diag, omega));
            row_max[std::size_t(i)] = m;
        }
    } else {
        for (int i = 1; i < nr - 1; ++i) {
            double m = 0.0;
            for (int j = (i + color) % 2; j < g.n_angular; j += 2)
                m = std::max(m, sor_update(u, role, g, i, j, cs, ct, inv_diag, omega));
            row_max[std::size_t(i)] = m;
        }
    }
    double worst = 0.0;
    for (double m : row_max) worst = std::max(worst, m);
    return worst;
}

namespace {

struct WalkRng {
    std::uint64_t x;
    WalkRng(std::uint64_t seed, std::int64_t walk)
        : x(mix64(seed ^ (0xd1b54a32d192ed03ULL * std::uint64_t(walk + 1)))) {}
    double uniform() {
        x = mix64(x);
        return double(x >> 11) * 0x1.0p-53;
    }
};

}  // namespace

WalkOutcome random_walk_batch(const std::vector<std::uint8_t>& role, const PolarGrid& g,
                              int i0, int j0, std::int64_t n_walks, std::uint64_t seed,
                              std::int64_t max_steps, ExecMode mode) {
    const int na = g.n_angular;
    const double ds = g.ds(), dt = g.dtheta();
    const double cs = 1.0 / (ds * ds), ct = 1.0 / (dt * dt);
    const double ps = cs / (2.0 * (cs + ct));   // each radial neighbor
    const double pt = ct / (2.0 * (cs + ct));   // each angular neighbor

    auto run_walk = [&](std::int64_t w) -> int {  // 0, 1, or -1 (censored)
        WalkRng rng(seed, w);
        int i = i0, j = j0;
        for (std::int64_t step = 0; step < max_steps; ++step) {
            std::uint8_t r = role[g.index(i, j)];
            if (r == 2) return 1;
            if (r != 0) return 0;
            double u = rng.uniform();
            if (u < ps) ++i;
            else if (u < 2 * ps) --i;
            else if (u < 2 * ps + pt) j = (j == na - 1) ? 0 : j + 1;
            else j = (j == 0) ? na - 1 : j - 1;
        }
        return -1;
    };

    std::int64_t ones = 0, zeros = 0, cens = 0;
    if (mode == ExecMode::Parallel) {
        // integer tallies: order of accumulation cannot matter
#pragma omp parallel for schedule(static) reduction(+ : ones, zeros, cens)
        for (std::int64_t w = 0; w < n_walks; ++w) {
            int r = run_walk(w);
            if (r == 1) ++ones;
            else if (r == 0) ++zeros;
            else ++cens;
        }
    } else {
        for (std::int64_t w = 0; w < n_walks; ++w) {
            int r = run_walk(w);
            if (r == 1) ++ones;
            else if (r == 0) ++zeros;
            else ++cens;
        }
    }
    return {ones, zeros, cens};
}

double banded_cell_sum(const PolarGrid& g,
                       const std::function<double(int, int)>& cell_term, ExecMode mode) {
    const int nr_cells = g.n_radial - 1, na = g.n_angular;
    std::vector<double> band(std::size_t(std::max(nr_cells, 0)), 0.0);
    if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < nr_cells; ++i) {
            double acc = 0.0;
            for (int j = 0; j < na; ++j) acc += cell_term(i, j);
            band[std::size_t(i)] = acc;
        }
    } else {
        for (int i = 0; i < nr_cells; ++i) {
            double acc = 0.0;
            for (int j = 0; j < na; ++j) acc += cell_term(i, j);
            band[std::size_t(i)] = acc;
        }
    }
    double total = 0.0;
    for (double b : band) total += b;  // fixed left-to-right fold
    return total;
}

}  // namespace annlab
