#include "annlab/meromorphic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace annlab {

PoleReport pole_order_of(const OneForm& form, double tau, double agreement_score) {
    PoleReport rep;
    rep.agreement_score = agreement_score;
    double scale = std::max(1.0, form.w.max_abs_coeff());
    int m_lead = 0;
    for (const auto& [m, a] : form.w.terms()) {
        if (std::abs(a) <= tau * scale) continue;
        if (m < 0) {
            rep.principal_coefficients.push_back({m, a});
            m_lead = std::min(m_lead, m);
        }
    }
    rep.pole_order = -m_lead;
    rep.predicted_end_count = rep.pole_order >= 2 ? 2 * (rep.pole_order - 1) : 0;
    return rep;
}

EndPoleCheck check_end_pole_relation(const HarmonicField& f,
                                     const std::vector<double>& t_values,
                                     const PolarGrid& g, const TraceOptions& topts) {
    if (!f.domain().punctured())
        throw DomainError("end/pole comparison needs a punctured domain");

    RecoveryDiagnostics diag;
    OneForm om = omega_of(f, {}, &diag);
    PoleReport pole = pole_order_of(om, 1e-8, diag.agreement_score);

    EndPoleCheck chk;
    chk.pole_order = pole.pole_order;
    chk.predicted = pole.predicted_end_count;
    // p = 1 with no other principal coefficients: log-dominated near 0,
    // every nearby level is a loop
    bool log_dominated = pole.pole_order == 1 && pole.principal_coefficients.size() == 1;
    chk.judged = pole.pole_order >= 2 || log_dominated;

    RadiusSchedule schedule = RadiusSchedule::for_grid(g);
    const double eps0 = 10.0 * std::max(topts.f_tol_rel, 1e-6) * f.scale();

    for (double t0 : t_values) {
        double t = t0;
        LevelSetComplex c = trace_level(f, t, g, topts);
        for (int tries = 0; c.has_warning("CriticalLevel") && tries < 3; ++tries) {
            t += eps0 * double(1 << tries);
            chk.notes.push_back("level " + std::to_string(t0) + " nudged to " +
                                std::to_string(t) + " off a critical value");
            c = trace_level(f, t, g, topts);
        }
        int n = count_ends(c, schedule).count;
        chk.levels.push_back(t);
        chk.counts.push_back(n);
        if (chk.judged && n != chk.predicted) chk.pass = false;
    }
    return chk;
}

BoundednessVerdict classify_boundedness(const HarmonicField& f, OmegaOptions opts) {
    if (!f.domain().punctured())
        throw DomainError("boundedness classification needs a punctured domain");

    if (!f.is_closed_form() && opts.r1 <= 0.0 && opts.r2 <= 0.0) {
        // circles far enough in for a hidden essential part to show up in
        // the reconstruction residual, clamped into the grid band
        double lo = f.grid().r_min, hi = f.r_outer();
        opts.r1 = std::max(0.05, 1.02 * lo);
        opts.r2 = std::min(std::max(0.5, std::min(2.0 * opts.r1, 0.9)), 0.98 * hi);
        opts.r1 = std::min(opts.r1, 0.5 * opts.r2);
    }

    RecoveryDiagnostics diag;
    try {
        OneForm om = omega_of(f, opts, &diag);
        PoleReport pole = pole_order_of(om, 1e-8, diag.agreement_score);
        if (pole.pole_order == 0) return {BoundednessKind::Bounded, 0, diag.agreement_score};
        return {BoundednessKind::UnboundedPole, pole.pole_order, diag.agreement_score};
    } catch (const NonMeromorphicSuspected& e) {
        return {BoundednessKind::EssentialSuspected, 0, e.score};
    }
}

ArcIntegralReport arc_df_integral(const HarmonicField& f, const LevelArc& arc,
                                  const RadiusSchedule& schedule) {
    if (arc.closed) throw DomainError("arc integral needs an open end representative");
    if (arc.pts.size() < 4)
        throw InsufficientResolution("arc too short for quadrature");

    const int J = schedule.count();
    ArcIntegralReport rep;
    rep.per_annulus.assign(J - 1, 0.0);
    const double r_floor = schedule.bottom();

    for (std::size_t k = 0; k + 1 < arc.pts.size(); ++k) {
        double sm = 0.5 * (arc.pts[k][0] + arc.pts[k + 1][0]);
        double thm = 0.5 * (arc.pts[k][1] + arc.pts[k + 1][1]);
        double rm = std::exp(sm);
        if (rm < r_floor) continue;
        double seg = std::abs(arc.point(k + 1) - arc.point(k));
        double term = f.gradient_norm(std::polar(rm, thm)) * seg;
        rep.value += term;
        // annulus j spans [radii[j+1], radii[j]]
        if (rm <= schedule.top()) {
            int j = int(std::upper_bound(schedule.radii.begin(), schedule.radii.end(), rm,
                                         std::greater<double>()) -
                        schedule.radii.begin()) -
                    1;
            if (j >= 0 && j < J - 1) rep.per_annulus[j] += term;
        }
    }

    const int tail = std::min(6, J - 1);
    bool finite = true;
    for (int j = J - 1 - tail; j + 1 < J - 1; ++j) {
        double a = rep.per_annulus[j], b = rep.per_annulus[j + 1];
        if (a <= 0.0 && b <= 0.0) continue;  // arc left the band: nothing to grow
        double ratio = a > 0.0 ? b / a : std::numeric_limits<double>::infinity();
        rep.tail_ratios.push_back(ratio);
        if (!(ratio < 0.9)) finite = false;
    }
    rep.finite = finite;
    return rep;
}

}  // namespace annlab
