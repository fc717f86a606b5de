#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "annlab/geometry.hpp"
#include "annlab/kernels.hpp"
#include "annlab/laurent.hpp"

namespace annlab {

// Holomorphic one-form w(z) dz on a punctured neighborhood, kept as the
// coefficient window of w.  For a harmonic f = c log|z| + Re F it is
// w = c/z + F', i.e. df + i d(conjugate f): the conjugate differential is
// carried implicitly, never a materialized conjugate function.
struct OneForm {
    LaurentSeries w;

    cplx eval(cplx z) const { return w.evaluate(z); }
    cplx residue() const { return w.coeff(-1); }
};

/// Harmonic function on an annulus { R < |z| <= r_outer }, either in closed
/// form (log coefficient + analytic Laurent part) or sampled on a polar grid.
/// A sampled field may carry the exact point sampler it was built from; when
/// present it is used for off-grid evaluation, otherwise evaluation falls back
/// to bilinear interpolation in (log r, theta).
class HarmonicField {
public:
    static HarmonicField closed_form(double log_coeff, LaurentSeries analytic,
                                     AnnulusDomain domain = AnnulusDomain(0.0),
                                     double r_outer = 1.0);

    static HarmonicField sampled(PolarGrid grid, std::vector<double> values,
                                 AnnulusDomain domain = AnnulusDomain(0.0));

    // Fill the grid by evaluating `sampler` at every node (row-parallel) and
    // keep the sampler for off-grid queries.
    static HarmonicField sampled_from(PolarGrid grid, std::function<double(cplx)> sampler,
                                      AnnulusDomain domain = AnnulusDomain(0.0),
                                      ExecMode mode = ExecMode::Parallel);

    bool is_closed_form() const { return closed_; }
    bool has_exact_sampler() const { return bool(sampler_); }
    const AnnulusDomain& domain() const { return domain_; }
    double r_outer() const { return r_outer_; }

    double log_coeff() const;              // closed form only
    const LaurentSeries& analytic() const; // closed form only
    const PolarGrid& grid() const;         // sampled only
    const std::vector<double>& values() const;

    double eval(cplx z) const;
    // Bilinear path regardless of any stored sampler (interpolation contract check).
    double eval_interpolated(cplx z) const;

    // |grad f| = |w| for closed forms; finite differences otherwise.
    double gradient_norm(cplx z) const;

    // max(1, sup |f| on the outer sampling circle): the reference scale for
    // level/gradient tolerances.
    double scale() const { return scale_; }

    // Max of the 5-point (log r, theta) Laplacian over interior grid nodes
    // (sampled fields; closed forms are sampled onto `g` first).  Truncation
    // alone contributes ~ (ds^2 + dtheta^2)/12 times the 4th-derivative scale.
    double discrete_laplacian_residual(const PolarGrid& g, ExecMode mode = ExecMode::Parallel) const;

private:
    HarmonicField() = default;

    bool closed_ = true;
    AnnulusDomain domain_;
    double r_outer_ = 1.0;
    double scale_ = 1.0;

    double c_ = 0.0;
    LaurentSeries F_;
    LaurentSeries dF_;  // cached derivative

    std::shared_ptr<const PolarGrid> grid_;
    std::shared_ptr<const std::vector<double>> values_;
    std::function<double(cplx)> sampler_;

    void finish_scale();
};

struct OmegaOptions {
    // Recovery circles for sampled fields (ignored for closed forms).
    double r1 = 0.0, r2 = 0.0;  // 0 = pick defaults inside the domain
    int n = 1024;
    RecoveryOptions recovery;
    // Interpolated (sampler-less) fields carry O(h^2) evaluation error, far
    // above the closed-form tolerances; loosen unless the caller overrides.
    bool auto_loosen = true;
};

/// The one-form df + i df* as a coefficient window.  Closed forms are exact
/// (coefficient arithmetic).  Sampled fields are differentiated pointwise
/// (w = f_x - i f_y, fourth-order stencils) and run through two-circle
/// recovery; NonMeromorphicSuspected propagates.
OneForm omega_of(const HarmonicField& f, const OmegaOptions& opts = {},
                 RecoveryDiagnostics* diag = nullptr);

/// Flux of f through |z| = r with outward normal: closed trapezoid of
/// (df/d log r) dtheta.  Node count max(1024, 8 * n_angular) for sampled
/// fields, 1024 for closed forms.
double flux(const HarmonicField& f, double r);

/// sup |f| over n samples of the circle |z| = r.
double circle_sup(const HarmonicField& f, double r, int n = 1024);

}  // namespace annlab
