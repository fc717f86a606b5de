#pragma once

// Independent reference computations used to pin expected values in tests.
// Everything here is deliberately naive (direct summation, dense quadrature,
// finite differences) so it shares no code path with the library.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
constexpr double PI_O = 3.14159265358979323846;

// sum a_m z^m term by term, no Horner
inline cplx direct_laurent_sum(const std::vector<std::pair<int, cplx>>& terms, cplx z) {
    cplx acc(0.0, 0.0);
    for (const auto& [m, a] : terms) acc += a * std::pow(z, double(m));
    return acc;
}

// O(n^2) DFT: c_m = (1/n) sum_j v_j e^{-i m theta_j}
inline cplx naive_fourier(const std::vector<cplx>& v, int m) {
    const int n = int(v.size());
    cplx acc(0.0, 0.0);
    for (int j = 0; j < n; ++j) {
        double th = 2.0 * PI_O * j / n;
        acc += v[std::size_t(j)] * std::exp(cplx(0.0, -m * th));
    }
    return acc / double(n);
}

// flux of f through the circle |z| = r: closed trapezoid of (df/dr) r dtheta
// with radial derivative by central differences
inline double trapezoid_flux(const std::function<double(cplx)>& f, double r, int nodes = 4096) {
    const double h = 1e-6 * r;
    double acc = 0.0;
    for (int j = 0; j < nodes; ++j) {
        double th = 2.0 * PI_O * j / nodes;
        double up = f(std::polar(r + h, th));
        double dn = f(std::polar(r - h, th));
        acc += (up - dn) / (2.0 * h);
    }
    return acc * r * (2.0 * PI_O / nodes);
}

// gradient of a scalar field by central differences
inline std::pair<double, double> fd_gradient(const std::function<double(cplx)>& f, cplx z,
                                             double h = 1e-6) {
    double fx = (f(z + cplx(h, 0)) - f(z - cplx(h, 0))) / (2 * h);
    double fy = (f(z + cplx(0, h)) - f(z - cplx(0, h))) / (2 * h);
    return {fx, fy};
}

// Taylor coefficients of exp(x) (used for essential-singularity fields)
inline double inv_factorial(int m) {
    double v = 1.0;
    for (int k = 2; k <= m; ++k) v /= k;
    return v;
}

// Deterministic 64-bit mix for hand-rolled generators (splitmix64 step).
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next_u64() {
        state = mix64(state);
        return state;
    }
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + int(next_u64() % std::uint64_t(hi - lo + 1));
    }
};

}  // namespace oracle
