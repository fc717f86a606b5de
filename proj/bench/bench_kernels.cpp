// Serial vs OpenMP timing for the four hot kernels.  Each case checks the
// two modes agree before timing, so a broken parallel path cannot post a
// winning number.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "annlab/kernels.hpp"

using namespace annlab;
using clk = std::chrono::steady_clock;

namespace {

double ms_best_of(int reps, const std::function<void()>& body) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        auto t0 = clk::now();
        body();
        double ms = std::chrono::duration<double, std::milli>(clk::now() - t0).count();
        if (ms < best) best = ms;
    }
    return best;
}

void report(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-18s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx\n", name,
                serial_ms, parallel_ms, serial_ms / parallel_ms);
}

void require(bool ok, const char* what) {
    if (!ok) {
        std::fprintf(stderr, "mode mismatch in %s\n", what);
        std::exit(1);
    }
}

std::vector<std::uint8_t> annulus_roles(const PolarGrid& g) {
    std::vector<std::uint8_t> role(g.size(), 0);
    for (int j = 0; j < g.n_angular; ++j) {
        role[g.index(0, j)] = 2;
        role[g.index(g.n_radial - 1, j)] = 1;
    }
    return role;
}

}  // namespace

int main() {
    {
        PolarGrid g(0.004, 257, 1024);
        auto f = [](cplx z) {
            cplx w = 1.0 / (z * z * z);
            return w.real() + 0.1 * std::log(std::abs(z));
        };
        auto a = eval_scalar_grid(f, g, ExecMode::Serial);
        auto b = eval_scalar_grid(f, g, ExecMode::Parallel);
        require(a == b, "eval_scalar_grid");
        double s = ms_best_of(5, [&] { eval_scalar_grid(f, g, ExecMode::Serial); });
        double p = ms_best_of(5, [&] { eval_scalar_grid(f, g, ExecMode::Parallel); });
        report("eval_scalar_grid", s, p);
    }

    {
        PolarGrid g(0.01, 257, 512);
        auto role = annulus_roles(g);
        std::vector<double> u0(g.size(), 0.0);
        for (int j = 0; j < g.n_angular; ++j) u0[g.index(0, j)] = 1.0;
        auto sweep = [&](ExecMode mode) {
            std::vector<double> u = u0;
            for (int it = 0; it < 60; ++it)
                for (int color = 0; color < 2; ++color)
                    sor_halfsweep(u, role, g, color, 1.9, mode);
            return u;
        };
        require(sweep(ExecMode::Serial) == sweep(ExecMode::Parallel), "sor_halfsweep");
        double s = ms_best_of(3, [&] { sweep(ExecMode::Serial); });
        double p = ms_best_of(3, [&] { sweep(ExecMode::Parallel); });
        report("sor_halfsweep", s, p);
    }

    {
        PolarGrid g(0.1, 65, 128);
        auto role = annulus_roles(g);
        auto batch = [&](ExecMode mode) {
            return random_walk_batch(role, g, g.n_radial / 2, 3, 50000, 0x5eedULL,
                                     10000000, mode);
        };
        WalkOutcome a = batch(ExecMode::Serial), b = batch(ExecMode::Parallel);
        require(a.absorbed_one == b.absorbed_one && a.absorbed_zero == b.absorbed_zero &&
                    a.censored == b.censored,
                "random_walk_batch");
        double s = ms_best_of(3, [&] { batch(ExecMode::Serial); });
        double p = ms_best_of(3, [&] { batch(ExecMode::Parallel); });
        report("random_walk_batch", s, p);
    }

    {
        PolarGrid g(0.004, 513, 1024);
        auto term = [&](int i, int j) {
            return std::sin(0.37 * i) * std::cos(0.11 * j) + std::exp(-1e-4 * i * j);
        };
        double a = banded_cell_sum(g, term, ExecMode::Serial);
        double b = banded_cell_sum(g, term, ExecMode::Parallel);
        require(a == b, "banded_cell_sum");
        double s = ms_best_of(5, [&] { banded_cell_sum(g, term, ExecMode::Serial); });
        double p = ms_best_of(5, [&] { banded_cell_sum(g, term, ExecMode::Parallel); });
        report("banded_cell_sum", s, p);
    }

    return 0;
}
