#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "annlab/errors.hpp"

namespace annlab {

using cplx = std::complex<double>;

inline constexpr double PI = 3.14159265358979323846;
inline constexpr double TWO_PI = 2.0 * PI;

// Annulus { R < |z| <= 1 }.  R = 0 means the punctured unit disk.
struct AnnulusDomain {
    double inner_radius = 0.0;

    AnnulusDomain() = default;
    explicit AnnulusDomain(double R) : inner_radius(R) {
        if (!(R >= 0.0 && R < 1.0)) throw DomainError("annulus inner radius must lie in [0,1)");
    }

    bool punctured() const { return inner_radius == 0.0; }

    bool contains(cplx z) const {
        double r = std::abs(z);
        return r > inner_radius && r <= 1.0 + 1e-12;
    }
};

// Tensor grid in (log r, theta): radial nodes geometric from r_min up to
// r_outer (default 1), angular nodes uniform on [0, 2*pi).  theta is periodic;
// the angular sample count is kept a power of two so circle transforms are
// exact-length.
struct PolarGrid {
    double r_min = 1e-3;
    int n_radial = 0;
    int n_angular = 0;
    double r_outer = 1.0;

    PolarGrid() = default;
    PolarGrid(double rmin, int nr, int na, double router = 1.0)
        : r_min(rmin), n_radial(nr), n_angular(na), r_outer(router) {
        if (!(rmin > 0.0 && rmin < router)) throw DomainError("grid needs 0 < r_min < r_outer");
        if (nr < 2 || na < 4) throw DomainError("grid too small");
        if ((na & (na - 1)) != 0) throw DomainError("n_angular must be a power of two");
    }

    double s_min() const { return std::log(r_min); }
    double s_max() const { return std::log(r_outer); }
    double ds() const { return (s_max() - s_min()) / (n_radial - 1); }
    double dtheta() const { return TWO_PI / n_angular; }

    double s_of(int i) const { return s_min() + i * ds(); }
    double r_of(int i) const { return std::exp(s_of(i)); }
    double theta_of(int j) const { return j * dtheta(); }

    cplx node(int i, int j) const {
        return std::polar(r_of(i), theta_of(j));
    }

    std::size_t size() const { return std::size_t(n_radial) * n_angular; }
    std::size_t index(int i, int j) const { return std::size_t(i) * n_angular + j; }

    PolarGrid refined() const { return PolarGrid(r_min, 2 * n_radial - 1, 2 * n_angular, r_outer); }
};

// Values of a (complex-valued) function on one uniformly sampled circle.
struct CircleSamples {
    double radius = 0.0;
    std::vector<cplx> values;

    int n() const { return int(values.size()); }
    double theta(int j) const { return TWO_PI * j / values.size(); }
};

// Nested radii descending toward the inner boundary.  Used by end counting,
// limit-point tracking and tail classification.
struct RadiusSchedule {
    std::vector<double> radii;  // strictly decreasing

    static RadiusSchedule geometric(double r_top, double r_bottom, int count) {
        if (!(r_bottom > 0.0 && r_bottom < r_top)) throw DomainError("bad schedule range");
        if (count < 4) throw DomainError("schedule needs at least 4 radii");
        RadiusSchedule s;
        s.radii.resize(count);
        double ltop = std::log(r_top), lbot = std::log(r_bottom);
        for (int j = 0; j < count; ++j)
            s.radii[j] = std::exp(ltop + (lbot - ltop) * double(j) / (count - 1));
        s.radii.back() = r_bottom;
        return s;
    }

    // Default: 12 geometric radii spanning the inner quarter of the grid's
    // log-radius range (r_min^(1/4) down to r_min on a unit-outer grid).
    static RadiusSchedule for_grid(const PolarGrid& g) {
        double top = std::exp(g.s_min() + 0.75 * (g.s_max() - g.s_min()));
        return geometric(top, g.r_min, 12);
    }

    double top() const { return radii.front(); }
    double bottom() const { return radii.back(); }
    int count() const { return int(radii.size()); }
};

}  // namespace annlab
