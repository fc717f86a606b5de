#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <string>

#include "annlab/weierstrass.hpp"
#include "oracles.hpp"

using namespace annlab;

namespace {

// Closed-form immersions used as oracles below (basepoint z = R', X(R') = 0):
//   g = z, h = dz/z          x1 = -cosh(s) cos t + cosh(log R')
//                            x2 = -cosh(s) sin t
//                            x3 = s - log R'            (s = log r, t = theta)
//                            so grid circles land on horizontal circles of
//                            radius cosh(s): the cosh profile.
//   g = z, h = dz            x3 = Re z - R'
//   g = 1/z, h = -dz/z^3     x1 = Re(1/(2z) - 1/(6z^3)) - (1/(2R') - 1/(6R'^3))
//                            x2 = -Im(1/z + 1/(3z^3)) / 2
//                            x3 = Re(1/(2z^2)) - 1/(2R'^2)

const double RP = 0.8;

WeierstrassData catenoid_data() {
    return make_weierstrass(1, LaurentSeries(), LaurentSeries::single(-1, {1, 0}), RP);
}

WeierstrassData planar_data() {
    return make_weierstrass(1, LaurentSeries(), LaurentSeries::single(0, {1, 0}), RP);
}

WeierstrassData enneper_like_data() {
    return make_weierstrass(-1, LaurentSeries(), LaurentSeries::single(-3, {-1, 0}), RP);
}

// g = z e^{1/z} with dh = dz/z: every finiteness verdict in the corollary
// flips to the unbounded side on this datum.
WeierstrassData essential_data() {
    return make_weierstrass(1, LaurentSeries::single(-1, {1, 0}),
                            LaurentSeries::single(-1, {1, 0}), RP);
}

std::array<double, 3> catenoid_point(cplx z) {
    double s = std::log(std::abs(z)), t = std::arg(z);
    double prof = std::cosh(s);
    return {-prof * std::cos(t) + std::cosh(std::log(RP)), -prof * std::sin(t),
            s - std::log(RP)};
}

std::array<double, 3> enneper_like_point(cplx z) {
    cplx z3 = z * z * z;
    double x1 = std::real(1.0 / (2.0 * z) - 1.0 / (6.0 * z3)) -
                (1.0 / (2.0 * RP) - 1.0 / (6.0 * RP * RP * RP));
    double x2 = -0.5 * std::imag(1.0 / z + 1.0 / (3.0 * z3));
    double x3 = std::real(1.0 / (2.0 * z * z)) - 1.0 / (2.0 * RP * RP);
    return {x1, x2, x3};
}

// spherical area swept by g = z over the annulus rb < |z| < rt:
// integral of 4/(1+p^2)^2 over the region, in closed form
double identity_cap_area(double rb, double rt) {
    auto seg = [](double r) { return r * r / (1.0 + r * r); };
    return 4.0 * oracle::PI_O * (seg(rt) - seg(rb));
}

int circle_sign_changes(const std::function<double(double)>& u, int m, double tol) {
    int count = 0, prev = 0;
    int first = 0;
    for (int k = 0; k <= m; ++k) {
        double v = u(2.0 * oracle::PI_O * (k % m) / m);
        int s = v > tol ? 1 : (v < -tol ? -1 : 0);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++count;
        if (first == 0) first = s;
        prev = s;
    }
    return count;
}

}  // namespace

TEST_CASE("catenoid data maps grid circles onto the cosh profile") {
    WeierstrassData data = catenoid_data();
    PolarGrid g(0.05, 64, 256, RP);
    MinimalImmersion imm = immerse(data, g);

    REQUIRE(imm.points.size() == g.size());
    double worst = 0.0;
    for (int k = 0; k < 16; ++k) {
        int i = (3 + 4 * k) % g.n_radial, j = (7 + 29 * k) % g.n_angular;
        auto want = catenoid_point(g.node(i, j));
        const auto& got = imm.at(i, j);
        for (int c = 0; c < 3; ++c) worst = std::max(worst, std::abs(got[c] - want[c]));
    }
    CHECK(worst <= 1e-8);

    CHECK(imm.x3_log_coefficient == 1.0);
    for (int c = 0; c < 3; ++c) CHECK(std::abs(imm.seam_period[c]) <= 1e-9);
    CHECK(imm.max_plaquette_residual <= 1e-8 * imm.mesh_scale);
}

TEST_CASE("planar data keeps the height affine") {
    WeierstrassData data = planar_data();
    PolarGrid g(0.1, 48, 128, RP);
    MinimalImmersion imm = immerse(data, g);

    double worst = 0.0;
    for (int i = 0; i < g.n_radial; i += 5)
        for (int j = 0; j < g.n_angular; j += 11) {
            double want = std::real(g.node(i, j)) - RP;
            worst = std::max(worst, std::abs(imm.at(i, j)[2] - want));
        }
    CHECK(worst <= 1e-9);
    // the log residue sits in the first coordinate here, not the height
    CHECK(imm.x3_log_coefficient == 0.0);
    CHECK(std::abs(imm.seam_period[2]) <= 1e-9);
}

TEST_CASE("cubic height differential integrates to the inverse-square height") {
    WeierstrassData data = enneper_like_data();
    PolarGrid g(0.1, 48, 256, RP);
    MinimalImmersion imm = immerse(data, g);

    double worst = 0.0;
    for (int k = 0; k < 16; ++k) {
        int i = (5 + 3 * k) % g.n_radial, j = (11 + 17 * k) % g.n_angular;
        auto want = enneper_like_point(g.node(i, j));
        const auto& got = imm.at(i, j);
        for (int c = 0; c < 3; ++c) worst = std::max(worst, std::abs(got[c] - want[c]));
    }
    CHECK(worst <= 1e-7);
    for (int c = 0; c < 3; ++c) CHECK(std::abs(imm.seam_period[c]) <= 1e-8);
    CHECK(imm.max_plaquette_residual <= 1e-8 * imm.mesh_scale);
}

TEST_CASE("a vanishing conformal factor names the bad vertex") {
    PolarGrid g(0.3, 8, 16, 0.9);
    cplx v = g.node(4, 5);
    // dh = (z - v) dz vanishes exactly at node (4, 5)
    LaurentSeries h({{0, -v}, {1, {1, 0}}});
    WeierstrassData data = make_weierstrass(1, LaurentSeries(), h, 0.9);
    try {
        immerse(data, g);
        FAIL("expected DegenerateMetric");
    } catch (const DegenerateMetric& e) {
        CHECK(std::string(e.what()).find("(4, 5)") != std::string::npos);
    }
}

TEST_CASE("winding numbers from circle samples") {
    auto square = [](cplx z) { return z * z; };
    CHECK(gauss_winding_of(square, 0.5) == 2);

    // z^{-3} e^{0.2 z}: the exponential factor is single-valued, so the
    // winding equals the monomial order -3
    auto tri = [](cplx z) { return std::exp(0.2 * z) / (z * z * z); };
    CHECK(gauss_winding_of(tri, 0.5) == -3);

    auto ess = [](cplx z) { return std::exp(1.0 / z); };
    CHECK(gauss_winding_of(ess, 0.5) == 0);

    auto lin = [](cplx z) { return 5.0 * z; };
    CHECK(gauss_winding_of(lin, 0.5) == 1);

    // a zero parked on the sample circle leaves the argument undefined
    cplx z0 = std::polar(0.5, TWO_PI * 3.0 / 64.0);
    auto bad = [z0](cplx z) {
        return std::abs(z - z0) < 1e-6 ? cplx(0, 0) : z - z0;
    };
    CHECK_THROWS_AS(gauss_winding_of(bad, 0.5, 64), WindingUnresolved);
}

TEST_CASE("winding is radius independent for the catalog maps") {
    std::vector<std::pair<std::function<cplx(cplx)>, int>> cat = {
        {[](cplx z) { return z * z; }, 2},
        {[](cplx z) { return std::exp(0.2 * z) / (z * z * z); }, -3},
        {[](cplx z) { return std::exp(1.0 / z); }, 0},
        {[](cplx z) { return 5.0 * z; }, 1},
        {[](cplx z) { return z * std::exp(z); }, 1},
        {[](cplx z) { return z * z * std::exp(1.0 / z + 3.0); }, 2},
    };
    for (const auto& [g, w] : cat)
        for (double r : {0.3, 0.45, 0.6, 0.75}) CHECK(gauss_winding_of(g, r) == w);
}

TEST_CASE("log factor extraction recovers planted coefficients") {
    auto g1 = [](cplx z) { return z * z * std::exp(1.0 / z + 3.0); };
    LaurentSeries h1 = extract_H(g1, 2, {0.7, 0.35});
    CHECK(h1.m_min() == -1);
    CHECK(h1.m_max() == 0);
    CHECK(std::abs(h1.coeff(-1) - cplx(1, 0)) <= 1e-9);
    CHECK(std::abs(h1.coeff(0) - cplx(3, 0)) <= 1e-9);

    auto g2 = [](cplx z) { return 5.0 * z; };
    LaurentSeries h2 = extract_H(g2, 1, {0.7, 0.35});
    CHECK(h2.m_min() == 0);
    CHECK(h2.m_max() == 0);
    CHECK(std::abs(h2.coeff(0) - cplx(std::log(5.0), 0)) <= 1e-10);

    auto g3 = [](cplx z) { return z * std::exp(z); };
    LaurentSeries h3 = extract_H(g3, 1, {0.7, 0.35});
    CHECK(h3.m_min() == 1);
    CHECK(h3.m_max() == 1);
    CHECK(std::abs(h3.coeff(1) - cplx(1, 0)) <= 1e-9);
}

TEST_CASE("extraction reconstructs the source map at random probes") {
    std::vector<std::pair<std::function<cplx(cplx)>, int>> cat = {
        {[](cplx z) { return z * z * std::exp(1.0 / z + 3.0); }, 2},
        {[](cplx z) { return 5.0 * z; }, 1},
        {[](cplx z) { return z * std::exp(z); }, 1},
        // truncated-sine exponent: all indices nonnegative by construction
        {[](cplx z) { return z * std::exp(z - z * z * z / 6.0 +
                                          z * z * z * z * z / 120.0); }, 1},
    };
    std::mt19937 rng(0xc0de5eedu);
    std::uniform_real_distribution<double> ur(0.36, 0.69), ut(0.0, TWO_PI);
    for (const auto& [g, n] : cat) {
        LaurentSeries H = extract_H(g, n, {0.7, 0.35});
        double worst = 0.0;
        for (int k = 0; k < 64; ++k) {
            cplx z = std::polar(ur(rng), ut(rng));
            cplx back = std::pow(z, double(n)) * std::exp(H.evaluate(z));
            worst = std::max(worst, std::abs(back - g(z)) / std::abs(g(z)));
        }
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("radius-inconsistent phases are rejected") {
    // pure radius-dependent phase: no single-valued log matches both circles
    auto jump = [](cplx z) {
        return std::polar(1.0, std::abs(z) < 0.5 ? 0.0 : PI);
    };
    CHECK_THROWS_AS(extract_H(jump, 0, {0.7, 0.35}), BranchError);
}

TEST_CASE("an unrepresentable log factor propagates the recovery failure") {
    // exponent z^{-40} sits outside the default coefficient window
    auto g = [](cplx z) { return std::exp(std::pow(z, -40.0)); };
    CHECK_THROWS_AS(extract_H(g, 0, {0.98, 0.93}), NonMeromorphicSuspected);
}

TEST_CASE("boundedness of the log factor by principal coefficients") {
    CHECK(classify_H_bounded(LaurentSeries::single(1, {1, 0})));
    CHECK_FALSE(classify_H_bounded(LaurentSeries::single(-1, {1, 0})));

    // below threshold relative to the largest coefficient: treated as zero
    CHECK(classify_H_bounded(LaurentSeries({{1, {1, 0}}, {-2, {1e-12, 0}}})));
    CHECK_FALSE(classify_H_bounded(LaurentSeries({{1, {1, 0}}, {-2, {1e-6, 0}}})));

    auto g = [](cplx z) {
        return z * std::exp(z - z * z * z / 6.0 + z * z * z * z * z / 120.0);
    };
    CHECK(classify_H_bounded(extract_H(g, 1, {0.7, 0.35})));
}

TEST_CASE("spherical area of the catenoid cap") {
    WeierstrassData data = catenoid_data();
    RadiusSchedule sched = RadiusSchedule::geometric(0.25, 1e-3, 12);
    CurvatureReport rep = total_curvature(data, RP, sched);

    CHECK(rep.verdict == CurvatureReport::Verdict::Finite);
    // exact partial integral down to the schedule bottom
    CHECK(std::abs(rep.value - identity_cap_area(1e-3, RP)) <= 5e-6);
    // and the full-disk limit to the coarser stated tolerance
    CHECK(std::abs(rep.value - 4.0 * PI * RP * RP / (1.0 + RP * RP)) <= 1e-4);
    CHECK(rep.spherical_multiplicity == doctest::Approx(rep.value / (4.0 * PI)));
    CHECK(rep.total_curvature == -rep.value);

    REQUIRE(rep.partial.size() == std::size_t(sched.count()));
    for (std::size_t k = 0; k + 1 < rep.partial.size(); ++k)
        CHECK(rep.partial[k + 1] >= rep.partial[k]);
}

TEST_CASE("constant gauss map sweeps no spherical area") {
    WeierstrassData data =
        make_weierstrass(0, LaurentSeries(), LaurentSeries::single(0, {1, 0}), RP);
    CurvatureReport rep =
        total_curvature(data, RP, RadiusSchedule::geometric(0.3, 0.01, 8));
    CHECK(rep.verdict == CurvatureReport::Verdict::Finite);
    CHECK(rep.value == 0.0);
    for (double p : rep.partial) CHECK(p == 0.0);
}

TEST_CASE("essential gauss factor accumulates spherical area") {
    WeierstrassData data = essential_data();
    CurvatureReport rep =
        total_curvature(data, RP, RadiusSchedule::geometric(0.3, 0.02, 10));
    CHECK(rep.verdict == CurvatureReport::Verdict::InfiniteSuspected);
    REQUIRE(rep.partial.size() >= 3);
    double first = rep.partial[1] - rep.partial[0];
    double last = rep.partial.back() - rep.partial[rep.partial.size() - 2];
    CHECK(last > 3.0 * first);
}

TEST_CASE("unresolvable angular spikes abort the quadrature") {
    WeierstrassData data = essential_data();
    CHECK_THROWS_AS(
        total_curvature(data, 0.05, RadiusSchedule::geometric(0.005, 5e-4, 4)),
        NumericalNonconvergence);
}

TEST_CASE("horizontal slice of the catenoid is a circle") {
    WeierstrassData data = catenoid_data();
    PolarGrid g(0.05, 64, 256, RP);
    SliceReport sr = plane_slice(data, Plane{{0, 0, 1}, -1.0}, g);

    CHECK(sr.ends.count == 0);
    REQUIRE(sr.curves.arcs.size() == 1);
    const LevelArc& arc = sr.curves.arcs[0];
    CHECK(arc.closed);
    CHECK(std::abs(arc.winding) == 1);
    double rho = RP * std::exp(-1.0);
    for (const auto& p : arc.pts) CHECK(std::abs(std::exp(p[0]) - rho) <= 1e-6);
}

TEST_CASE("cubic height differential slices into four ends at every height") {
    WeierstrassData data = enneper_like_data();
    PolarGrid g(0.02, 96, 512, RP);
    for (double d : {0.0, -0.4, 0.15}) {
        SliceReport sr = plane_slice(data, Plane{{0, 0, 1}, d}, g);
        CHECK(sr.ends.count == 4);
    }
}

TEST_CASE("vertical slice of the catenoid stays transverse") {
    WeierstrassData data = catenoid_data();
    PolarGrid g(0.05, 64, 256, RP);
    SliceReport sr = plane_slice(data, Plane{{1, 0, 0}, 0.0}, g);
    // oracle: x1 = d cuts each small circle twice (cos t = c / cosh s)
    CHECK(sr.ends.count == 2);
    CHECK(sr.ends.germs.size() == 2);
    CHECK_FALSE(sr.curves.has_warning("CriticalLevel"));
}

TEST_CASE("imaginary periods are rejected at load and at slice time") {
    // imaginary residue in dh itself: the height jumps around the core circle
    CHECK_THROWS_AS(
        make_weierstrass(1, LaurentSeries(), LaurentSeries::single(-1, {0, 0.3}), RP),
        SlicePeriodError);

    // dh passes the load check, but the x1 form picks up an imaginary residue
    LaurentSeries h({{-1, {1, 0}}, {-2, {0, 0.4}}});
    WeierstrassData data = make_weierstrass(1, LaurentSeries(), h, RP);
    PolarGrid g(0.05, 48, 256, RP);
    CHECK_THROWS_AS(plane_slice(data, Plane{{1, 0, 0}, 0.0}, g), SlicePeriodError);

    // the height itself stays single-valued: horizontal slicing still works
    SliceReport sr = plane_slice(data, Plane{{0, 0, 1}, -0.5}, g);
    CHECK(sr.ends.count == 2);
}

TEST_CASE("flux along a planar slice arc is its chart length") {
    WeierstrassData data = planar_data();
    PolarGrid g(0.01, 96, 256, RP);
    SliceReport sr = plane_slice(data, Plane{{0, 0, 1}, -0.3}, g);
    REQUIRE(sr.ends.count == 0);
    REQUIRE(!sr.curves.arcs.empty());
    // the chord Re z = 0.5: one open arc, |grad x3| = 1 along it
    const LevelArc* chord = &sr.curves.arcs[0];
    for (const auto& a : sr.curves.arcs)
        if (a.pts.size() > chord->pts.size()) chord = &a;
    REQUIRE(!chord->closed);
    ArcIntegralReport rep = vertical_flux(data, *chord);
    CHECK(rep.finite);
    CHECK(rep.value == doctest::Approx(chord->length_euclid()).epsilon(1e-9));
}

TEST_CASE("inverse-square height differential has infinite flux") {
    WeierstrassData data =
        make_weierstrass(1, LaurentSeries(), LaurentSeries::single(-2, {1, 0}), RP);
    PolarGrid g(0.008, 96, 512, RP);
    SliceReport sr = plane_slice(data, Plane{{0, 0, 1}, 0.0}, g);
    REQUIRE(sr.ends.count == 2);
    const LevelArc& arc = sr.curves.arcs[std::size_t(sr.ends.germs[0].first)];
    ArcIntegralReport rep = vertical_flux(data, arc);
    CHECK_FALSE(rep.finite);
    CHECK(rep.value > 50.0);
    REQUIRE(!rep.tail_ratios.empty());
    CHECK(*std::max_element(rep.tail_ratios.begin(), rep.tail_ratios.end()) >= 0.9);
}

TEST_CASE("closed slice arcs refuse flux") {
    WeierstrassData data = catenoid_data();
    PolarGrid g(0.05, 64, 256, RP);
    SliceReport sr = plane_slice(data, Plane{{0, 0, 1}, -1.0}, g);
    REQUIRE(!sr.curves.arcs.empty());
    CHECK_THROWS_AS(vertical_flux(data, sr.curves.arcs[0]), DomainError);
}

TEST_CASE("slice crossing counts match the closed forms") {
    WeierstrassData cat = catenoid_data();
    // x1 = -cosh(s) cos t + cosh(log R'): two transversal zeros per circle
    double c = std::cosh(std::log(RP));
    for (double r : {0.05, 0.025}) {
        double prof = std::cosh(std::log(r));
        auto u = [&](double t) { return -prof * std::cos(t) + c; };
        CHECK(circle_sign_changes(u, 4096, 1e-12) == 2);
        CHECK(slice_crossings(cat, Plane{{1, 0, 0}, 0.0}, r) == 2);
    }
    CHECK(slice_crossings(cat, Plane{{0, 0, 1}, -1.0}, 0.05) == 0);
}

TEST_CASE("three-way equivalence on the catalog") {
    Plane p1{{0, 0, 1}, -1.0};
    Plane p2{{1, 0, 0}, 0.0};

    {
        PolarGrid g(0.04, 64, 256, RP);
        EquivalenceReport rep = check_corollary_equivalence(catenoid_data(), p1, p2, g);
        CHECK(rep.pass);
        CHECK(rep.curvature.finite);
        CHECK(rep.h_bounded.finite);
        CHECK(rep.slices.finite);
    }
    {
        PolarGrid g(0.04, 64, 256, RP);
        Plane chord{{0, 0, 1}, -0.3};
        EquivalenceReport rep = check_corollary_equivalence(planar_data(), chord, p2, g);
        CHECK(rep.pass);
        CHECK(rep.curvature.finite);
        CHECK(std::abs(rep.curvature.value - identity_cap_area(0.04, RP)) <= 1e-4);
    }
    {
        PolarGrid g(0.04, 64, 512, RP);
        EquivalenceReport rep = check_corollary_equivalence(essential_data(), p1, p2, g);
        CHECK(rep.pass);
        CHECK_FALSE(rep.curvature.finite);
        CHECK_FALSE(rep.h_bounded.finite);
        CHECK_FALSE(rep.slices.finite);
    }

    // plane normals must come in unit length
    CHECK_THROWS_AS(check_corollary_equivalence(catenoid_data(), p1,
                                                Plane{{0, 0, 2}, 0.2},
                                                PolarGrid(0.04, 64, 256, RP)),
                    DomainError);
}

TEST_CASE("meshes are conformal and componentwise harmonic") {
    WeierstrassData data = catenoid_data();
    PolarGrid g(0.05, 64, 256, RP);
    MinimalImmersion imm = immerse(data, g);

    CHECK(*std::max_element(imm.conformality.begin(), imm.conformality.end()) <= 1e-6);

    // 5-point Laplacian in (s, theta) on interior vertices; truncation alone
    // is about (ds^2 + dt^2)/12 times the fourth-derivative scale (~10 here)
    double ds = g.ds(), dt = g.dtheta();
    double worst = 0.0;
    for (int i = 1; i + 1 < g.n_radial; ++i)
        for (int j = 0; j < g.n_angular; ++j) {
            int jl = (j + g.n_angular - 1) % g.n_angular, jr = (j + 1) % g.n_angular;
            for (int c = 0; c < 3; ++c) {
                double lap = (imm.at(i + 1, j)[c] + imm.at(i - 1, j)[c] -
                              2.0 * imm.at(i, j)[c]) / (ds * ds) +
                             (imm.at(i, jr)[c] + imm.at(i, jl)[c] -
                              2.0 * imm.at(i, j)[c]) / (dt * dt);
                worst = std::max(worst, std::abs(lap));
            }
        }
    CHECK(worst <= 1e-2);
}

TEST_CASE("parallel and serial meshes agree bitwise") {
    WeierstrassData data = enneper_like_data();
    PolarGrid g(0.1, 32, 128, RP);
    MinimalImmersion a = immerse(data, g, cplx(RP, 0.0), ExecMode::Serial);
    MinimalImmersion b = immerse(data, g, cplx(RP, 0.0), ExecMode::Parallel);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t k = 0; k < a.points.size(); ++k)
        for (int c = 0; c < 3; ++c) CHECK(a.points[k][c] == b.points[k][c]);
}

TEST_CASE("height pole order predicts slice ends at sampled heights") {
    // dh pole order p gives 2(p-1) ends of every horizontal slice
    struct Row {
        LaurentSeries h;
        int expect;
    };
    std::vector<Row> rows = {
        {LaurentSeries::single(-2, {1, 0}), 2},
        {LaurentSeries::single(-3, {-1, 0}), 4},
    };
    PolarGrid g(0.008, 96, 512, RP);
    for (const auto& row : rows) {
        WeierstrassData data = make_weierstrass(1, LaurentSeries(), row.h, RP);
        for (double d : {-0.35, 0.1, 0.4}) {
            SliceReport sr = plane_slice(data, Plane{{0, 0, 1}, d}, g);
            CHECK(sr.ends.count == row.expect);
        }
    }
}
