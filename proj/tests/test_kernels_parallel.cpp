#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <vector>

#include "annlab/kernels.hpp"

using namespace annlab;

namespace {

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

bool same_bits(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

// full-annulus roles with a rectangular absorbing wall in the middle, so the
// geometry is not rotation invariant
std::vector<std::uint8_t> walled_roles(const PolarGrid& g) {
    std::vector<std::uint8_t> role(g.size(), 0);
    for (int j = 0; j < g.n_angular; ++j) {
        role[g.index(0, j)] = 2;
        role[g.index(g.n_radial - 1, j)] = 1;
    }
    for (int i = g.n_radial / 3; i < g.n_radial / 3 + 3; ++i)
        for (int j = 5; j < g.n_angular / 2; ++j) role[g.index(i, j)] = 1;
    return role;
}

}  // namespace

TEST_CASE("grid evaluation matches bit for bit across exec modes") {
    PolarGrid g(0.05, 65, 128);
    auto f = [](cplx z) {
        return std::log(std::abs(z)) + (1.0 / z).real() + std::cos(3.0 * std::arg(z));
    };
    auto serial = eval_scalar_grid(f, g, ExecMode::Serial);
    auto parallel = eval_scalar_grid(f, g, ExecMode::Parallel);
    CHECK(same_bits(serial, parallel));
}

TEST_CASE("relaxation half-sweeps match bit for bit across exec modes") {
    PolarGrid g(0.05, 65, 128);
    auto role = walled_roles(g);
    std::vector<double> a(g.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (role[k] == 2)
            a[k] = 1.0;
        else if (role[k] == 1)
            a[k] = 0.0;
        else
            a[k] = 1e-3 * double((k * 2654435761u) % 997);
    }
    std::vector<double> b = a;

    for (int sweep = 0; sweep < 10; ++sweep)
        for (int color = 0; color < 2; ++color) {
            double ca = sor_halfsweep(a, role, g, color, 1.9, ExecMode::Serial);
            double cb = sor_halfsweep(b, role, g, color, 1.9, ExecMode::Parallel);
            CHECK(same_bits(ca, cb));
        }
    CHECK(same_bits(a, b));
}

TEST_CASE("walk batches match count for count across exec modes") {
    PolarGrid g(0.1, 33, 64);
    auto role = walled_roles(g);
    int i0 = 2 * g.n_radial / 3, j0 = 7;
    REQUIRE(role[g.index(i0, j0)] == 0);
    WalkOutcome serial =
        random_walk_batch(role, g, i0, j0, 4097, 0xfeedULL, 1000000, ExecMode::Serial);
    WalkOutcome parallel =
        random_walk_batch(role, g, i0, j0, 4097, 0xfeedULL, 1000000, ExecMode::Parallel);
    CHECK(serial.absorbed_one == parallel.absorbed_one);
    CHECK(serial.absorbed_zero == parallel.absorbed_zero);
    CHECK(serial.censored == parallel.censored);
    CHECK(serial.absorbed_one + serial.absorbed_zero + serial.censored == 4097);
    CHECK(serial.absorbed_one > 0);  // the wall does not block the whole inner circle
}

TEST_CASE("banded sums match bit for bit across exec modes") {
    PolarGrid g(0.05, 129, 256);
    auto term = [&](int i, int j) {
        return std::sin(0.37 * i) * std::cos(0.11 * j) + 1.0 / (1.0 + i + j);
    };
    double serial = banded_cell_sum(g, term, ExecMode::Serial);
    double parallel = banded_cell_sum(g, term, ExecMode::Parallel);
    CHECK(same_bits(serial, parallel));
    CHECK(serial != 0.0);
}
