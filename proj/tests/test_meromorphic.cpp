#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "annlab/meromorphic.hpp"
#include "oracles.hpp"

using namespace annlab;

namespace {

// Empirical boundedness oracle: sup |f| on shrinking circles must stop
// growing for a field bounded near the puncture.
bool sup_nonincreasing_inward(const HarmonicField& f) {
    const double radii[] = {0.4, 0.2, 0.1, 0.05, 0.02};
    double prev = circle_sup(f, radii[0]);
    for (int k = 1; k < 5; ++k) {
        double cur = circle_sup(f, radii[k]);
        if (cur > prev * (1.0 + 1e-9) + 1e-12) return false;
        prev = cur;
    }
    return true;
}

}  // namespace

TEST_CASE("pole order reads the leading coefficient index of w dz") {
    // w = 1: holomorphic across 0
    OneForm flat{LaurentSeries::single(0, {1, 0})};
    auto r0 = pole_order_of(flat);
    CHECK(r0.pole_order == 0);
    CHECK(r0.predicted_end_count == 0);
    CHECK(r0.principal_coefficients.empty());

    // w = 1/z, the form of log|z|
    OneForm logform{LaurentSeries::single(-1, {1, 0})};
    auto r1 = pole_order_of(logform);
    CHECK(r1.pole_order == 1);
    CHECK(r1.predicted_end_count == 0);

    // f = Re(z^{-3}) gives w = -3 z^{-4}
    HarmonicField f = HarmonicField::closed_form(0.0, LaurentSeries::single(-3, {1, 0}));
    auto r4 = pole_order_of(omega_of(f));
    CHECK(r4.pole_order == 4);
    CHECK(r4.predicted_end_count == 6);
    REQUIRE(r4.principal_coefficients.size() == 1);
    CHECK(r4.principal_coefficients[0].first == -4);
    CHECK(std::abs(r4.principal_coefficients[0].second - cplx(-3, 0)) < 1e-14);
}

TEST_CASE("predicted end count follows 2(p-1) for every pole order") {
    for (int p = 0; p <= 6; ++p) {
        OneForm w{LaurentSeries::single(-p, {1, 0})};
        auto rep = pole_order_of(w);
        CHECK(rep.pole_order == p);
        CHECK(rep.predicted_end_count == (p >= 2 ? 2 * (p - 1) : 0));
    }
}

TEST_CASE("coefficients below the relative threshold do not open a pole") {
    OneForm nearly{LaurentSeries({{0, {1, 0}}, {-2, {1e-12, 0}}})};
    CHECK(pole_order_of(nearly).pole_order == 0);
    OneForm barely{LaurentSeries({{0, {1, 0}}, {-2, {1e-6, 0}}})};
    CHECK(pole_order_of(barely).pole_order == 2);
    // threshold scales with the largest coefficient
    OneForm loud{LaurentSeries({{0, {1e9, 0}}, {-2, {1e-2, 0}}})};
    CHECK(pole_order_of(loud).pole_order == 0);
}

TEST_CASE("pole order is invariant under shifts, scalings and bounded perturbations") {
    oracle::Rng rng(0xab12cd34u);
    for (int trial = 0; trial < 12; ++trial) {
        double c = rng.uniform(-2.0, 2.0);
        std::vector<std::pair<int, cplx>> terms;
        for (int m = -3; m <= 2; ++m) {
            if (m == 0) continue;
            if (rng.uniform(0.0, 1.0) < 0.4) continue;
            terms.push_back({m, cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0))});
        }
        HarmonicField f = HarmonicField::closed_form(c, LaurentSeries(terms));
        int p = pole_order_of(omega_of(f)).pole_order;

        // + constant: same one-form
        std::vector<std::pair<int, cplx>> shifted = terms;
        shifted.push_back({0, {17.5, 0}});
        CHECK(pole_order_of(omega_of(HarmonicField::closed_form(c, LaurentSeries(shifted))))
                  .pole_order == p);

        // * lambda: thresholds are scale-relative
        for (double lam : {2.0, -0.5, 1e3}) {
            std::vector<std::pair<int, cplx>> scaled;
            for (auto [m, a] : terms) scaled.push_back({m, a * lam});
            CHECK(pole_order_of(omega_of(HarmonicField::closed_form(c * lam, LaurentSeries(scaled))))
                      .pole_order == p);
        }

        // + bounded closed form (nonnegative indices only)
        std::vector<std::pair<int, cplx>> bumped = terms;
        bumped.push_back({1, {0.37, -0.2}});
        bumped.push_back({4, {-0.8, 0.1}});
        CHECK(pole_order_of(omega_of(HarmonicField::closed_form(c, LaurentSeries(bumped))))
                  .pole_order == p);
    }
}

TEST_CASE("end counts match the pole prediction for a second-order pole") {
    HarmonicField f = HarmonicField::closed_form(0.0, LaurentSeries::single(-1, {1, 0}));
    PolarGrid g(0.004, 96, 512);
    auto chk = check_end_pole_relation(f, {-1.0, 0.0, 0.7}, g);
    CHECK(chk.pass);
    CHECK(chk.judged);
    CHECK(chk.pole_order == 2);
    CHECK(chk.predicted == 2);
    REQUIRE(chk.counts.size() == 3);
    for (int n : chk.counts) CHECK(n == 2);
}

TEST_CASE("end counts match the pole prediction for a third-order pole with log part") {
    HarmonicField f = HarmonicField::closed_form(0.3, LaurentSeries::single(-2, {1, 0}));
    PolarGrid g(0.004, 128, 512);
    auto chk = check_end_pole_relation(f, {0.0, 1.0}, g);
    CHECK(chk.pass);
    CHECK(chk.judged);
    CHECK(chk.pole_order == 3);
    CHECK(chk.predicted == 4);
    for (int n : chk.counts) CHECK(n == 4);
}

TEST_CASE("a log-dominated field is judged to have no ends") {
    HarmonicField f = HarmonicField::closed_form(1.0, LaurentSeries());
    PolarGrid g(0.004, 96, 256);
    auto chk = check_end_pole_relation(f, {-1.0, -2.0}, g);
    CHECK(chk.pass);
    CHECK(chk.judged);
    CHECK(chk.pole_order == 1);
    for (int n : chk.counts) CHECK(n == 0);
}

TEST_CASE("a holomorphic one-form with ends is recorded, not judged") {
    // Re z has two ends at t = 0 yet p = 0: outside the law's hypothesis
    HarmonicField f = HarmonicField::closed_form(0.0, LaurentSeries::single(1, {1, 0}));
    PolarGrid g(0.01, 64, 256);
    auto chk = check_end_pole_relation(f, {0.0}, g);
    CHECK(chk.pass);
    CHECK(!chk.judged);
    CHECK(chk.pole_order == 0);
    REQUIRE(chk.counts.size() == 1);
    CHECK(chk.counts[0] == 2);
}

TEST_CASE("a critical level is nudged before counting") {
    // F = 1/z + 2z^2 has a saddle at z = 4^{-1/3} with critical value
    // 6 * 4^{-2/3} on the real axis
    HarmonicField f = HarmonicField::closed_form(
        0.0, LaurentSeries({{-1, {1, 0}}, {2, {2, 0}}}));
    double tstar = 6.0 * std::pow(4.0, -2.0 / 3.0);
    // r_min = 0.05 keeps the counting radius below the nudged petal's reach
    PolarGrid g(0.05, 96, 256);
    TraceOptions loose;
    loose.f_tol_rel = 2e-3;
    loose.g_tol_rel = 0.1;
    auto chk = check_end_pole_relation(f, {tstar}, g, loose);
    CHECK(!chk.notes.empty());
    REQUIRE(chk.levels.size() == 1);
    CHECK(chk.levels[0] > tstar);
    CHECK(chk.pole_order == 2);
    CHECK(chk.counts[0] == 2);
    CHECK(chk.pass);
}

TEST_CASE("boundedness classification against the sup oracle") {
    struct Case {
        HarmonicField f;
        BoundednessKind want;
        int order;
    };
    std::vector<Case> cases;
    cases.push_back({HarmonicField::closed_form(0.0, LaurentSeries::single(1, {1, 0})),
                     BoundednessKind::Bounded, 0});
    cases.push_back({HarmonicField::closed_form(0.0, LaurentSeries({{2, {1, 0}}, {1, {-0.5, 0.3}}})),
                     BoundednessKind::Bounded, 0});
    cases.push_back({HarmonicField::closed_form(0.0, LaurentSeries::single(-1, {1, 0})),
                     BoundednessKind::UnboundedPole, 2});
    cases.push_back({HarmonicField::closed_form(2.0, LaurentSeries()),
                     BoundednessKind::UnboundedPole, 1});
    for (const auto& cs : cases) {
        auto v = classify_boundedness(cs.f);
        CHECK(v.kind == cs.want);
        if (cs.want == BoundednessKind::UnboundedPole) CHECK(v.pole_order == cs.order);
        // empirical cross-check: bounded <=> sups settle going inward
        CHECK((v.kind == BoundednessKind::Bounded) == sup_nonincreasing_inward(cs.f));
    }
}

TEST_CASE("sampled fields classify through two-circle recovery") {
    PolarGrid g(0.045, 64, 512);
    auto bounded = HarmonicField::sampled_from(
        g, [](cplx z) { return std::real(z * z - 0.5 * z); });
    auto vb = classify_boundedness(bounded);
    CHECK(vb.kind == BoundednessKind::Bounded);

    auto dipole = HarmonicField::sampled_from(
        g, [](cplx z) { return std::real(1.0 / z); });
    auto vd = classify_boundedness(dipole);
    CHECK(vd.kind == BoundednessKind::UnboundedPole);
    CHECK(vd.pole_order == 2);

    // essential singularity: the window can never reproduce its circles
    auto essential = HarmonicField::sampled_from(
        g, [](cplx z) { return std::real(std::exp(1.0 / z)); });
    auto ve = classify_boundedness(essential);
    CHECK(ve.kind == BoundednessKind::EssentialSuspected);
    CHECK(ve.score > 1e-6);
}

TEST_CASE("arc integral of a bounded field is finite and equals the arc length here") {
    // |grad Re z| = 1, so the integral is the truncated length of the ray
    HarmonicField f = HarmonicField::closed_form(0.0, LaurentSeries::single(1, {1, 0}));
    PolarGrid g(0.004, 96, 512);
    auto c = trace_level(f, 0.0, g);
    auto schedule = RadiusSchedule::for_grid(g);
    auto ec = count_ends(c, schedule);
    REQUIRE(ec.count == 2);
    auto rep = arc_df_integral(f, c.arcs[ec.germs[0].first], schedule);
    CHECK(rep.finite);
    CHECK(rep.value == doctest::Approx(1.0).epsilon(0.02));
    for (double ratio : rep.tail_ratios) CHECK(ratio < 0.9);
}

TEST_CASE("arc integral of a dipole diverges like 1/r") {
    HarmonicField f = HarmonicField::closed_form(0.0, LaurentSeries::single(-1, {1, 0}));
    PolarGrid g(0.004, 96, 512);
    auto c = trace_level(f, 0.0, g);
    auto schedule = RadiusSchedule::for_grid(g);
    auto ec = count_ends(c, schedule);
    REQUIRE(ec.count == 2);
    auto rep = arc_df_integral(f, c.arcs[ec.germs[0].first], schedule);
    CHECK(!rep.finite);
    // closed form: int_rb^1 dr/r^2 = 1/rb - 1
    CHECK(rep.value == doctest::Approx(1.0 / schedule.bottom() - 1.0).epsilon(0.05));
    CHECK(rep.tail_ratios.back() > 1.0);
}

TEST_CASE("arc integral preconditions") {
    HarmonicField f = HarmonicField::closed_form(1.0, LaurentSeries());
    PolarGrid g(0.1, 48, 128);
    auto c = trace_level(f, std::log(0.5), g);
    auto schedule = RadiusSchedule::for_grid(g);
    REQUIRE(c.arcs.size() == 1);
    REQUIRE(c.arcs[0].closed);
    CHECK_THROWS_AS(arc_df_integral(f, c.arcs[0], schedule), DomainError);

    LevelArc stub;
    stub.pts = {{-1.0, 0.0}, {-0.9, 0.1}, {-0.8, 0.2}};
    CHECK_THROWS_AS(arc_df_integral(f, stub, schedule), InsufficientResolution);
}

TEST_CASE("a finite arc integral implies a bounded field") {
    std::vector<std::pair<HarmonicField, double>> with_ends;
    // bounded fields only reach the puncture at t = 0 here
    with_ends.push_back({HarmonicField::closed_form(0.0, LaurentSeries::single(1, {1, 0})), 0.0});
    with_ends.push_back({HarmonicField::closed_form(0.0, LaurentSeries::single(2, {1, 0})), 0.0});
    with_ends.push_back({HarmonicField::closed_form(0.0, LaurentSeries::single(-1, {1, 0})), 0.2});
    with_ends.push_back({HarmonicField::closed_form(0.0, LaurentSeries({{-2, {1, 0}}, {1, {0.3, 0}}})), 0.0});

    PolarGrid g(0.004, 96, 512);
    auto schedule = RadiusSchedule::for_grid(g);
    for (auto& [f, t] : with_ends) {
        auto c = trace_level(f, t, g);
        auto ec = count_ends(c, schedule);
        REQUIRE(ec.count > 0);
        bool any_finite = false;
        for (auto [id, at_finish] : ec.germs)
            if (arc_df_integral(f, c.arcs[id], schedule).finite) any_finite = true;
        if (any_finite)
            CHECK(classify_boundedness(f).kind == BoundednessKind::Bounded);
    }
}
