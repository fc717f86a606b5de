#include "annlab/harmonic.hpp"

#include <algorithm>
#include <cmath>

namespace annlab {

HarmonicField HarmonicField::closed_form(double log_coeff, LaurentSeries analytic,
                                         AnnulusDomain domain, double r_outer) {
    HarmonicField f;
    f.closed_ = true;
    f.domain_ = domain;
    f.r_outer_ = r_outer;
    f.c_ = log_coeff;
    f.F_ = std::move(analytic);
    f.dF_ = f.F_.derivative();
    f.finish_scale();
    return f;
}

HarmonicField HarmonicField::sampled(PolarGrid grid, std::vector<double> values,
                                     AnnulusDomain domain) {
    if (values.size() != grid.size()) throw DomainError("value array does not match grid");
    HarmonicField f;
    f.closed_ = false;
    f.domain_ = domain;
    f.r_outer_ = grid.r_outer;
    f.grid_ = std::make_shared<PolarGrid>(grid);
    f.values_ = std::make_shared<std::vector<double>>(std::move(values));
    f.finish_scale();
    return f;
}

HarmonicField HarmonicField::sampled_from(PolarGrid grid, std::function<double(cplx)> sampler,
                                          AnnulusDomain domain, ExecMode mode) {
    HarmonicField f = sampled(grid, eval_scalar_grid(sampler, grid, mode), domain);
    f.sampler_ = std::move(sampler);
    f.finish_scale();
    return f;
}

void HarmonicField::finish_scale() {
    double sup = 0.0;
    if (closed_) {
        double r = std::min(r_outer_, F_.r_hi() * 0.9999);
        for (int j = 0; j < 1024; ++j) {
            cplx z = std::polar(r, TWO_PI * j / 1024);
            sup = std::max(sup, std::abs(c_ * std::log(r) + std::real(F_.evaluate(z))));
        }
    } else {
        const PolarGrid& g = *grid_;
        for (int j = 0; j < g.n_angular; ++j)
            sup = std::max(sup, std::abs((*values_)[g.index(g.n_radial - 1, j)]));
    }
    scale_ = std::max(1.0, sup);
}

double HarmonicField::log_coeff() const {
    if (!closed_) throw DomainError("log coefficient requires a closed form");
    return c_;
}

const LaurentSeries& HarmonicField::analytic() const {
    if (!closed_) throw DomainError("analytic part requires a closed form");
    return F_;
}

const PolarGrid& HarmonicField::grid() const {
    if (closed_) throw DomainError("no grid on a closed form");
    return *grid_;
}

const std::vector<double>& HarmonicField::values() const {
    if (closed_) throw DomainError("no sample array on a closed form");
    return *values_;
}

double HarmonicField::eval(cplx z) const {
    if (closed_) {
        double r = std::abs(z);
        if (r <= domain_.inner_radius * (1.0 - 1e-12) || r > r_outer_ * (1.0 + 1e-9))
            throw DomainError("evaluation point outside the annulus");
        return c_ * std::log(r) + std::real(F_.evaluate(z));
    }
    if (sampler_) return sampler_(z);
    return eval_interpolated(z);
}

double HarmonicField::eval_interpolated(cplx z) const {
    if (closed_) throw DomainError("interpolation requires a sampled field");
    const PolarGrid& g = *grid_;
    const std::vector<double>& v = *values_;
    double r = std::abs(z);
    double s = std::log(std::max(r, 1e-300));
    if (s < g.s_min() - 1e-9 || s > g.s_max() + 1e-9)
        throw DomainError("evaluation point outside the sampled grid");
    s = std::clamp(s, g.s_min(), g.s_max());
    double th = std::arg(z);
    if (th < 0) th += TWO_PI;

    double fi = (s - g.s_min()) / g.ds();
    int i0 = std::min(int(fi), g.n_radial - 2);
    double wi = fi - i0;
    double fj = th / g.dtheta();
    int j0 = int(fj) % g.n_angular;
    double wj = fj - int(fj);
    int j1 = (j0 + 1) % g.n_angular;

    double a = v[g.index(i0, j0)] * (1 - wj) + v[g.index(i0, j1)] * wj;
    double b = v[g.index(i0 + 1, j0)] * (1 - wj) + v[g.index(i0 + 1, j1)] * wj;
    return a * (1 - wi) + b * wi;
}

double HarmonicField::gradient_norm(cplx z) const {
    if (closed_) {
        cplx w = c_ / z + dF_.evaluate(z);
        return std::abs(w);
    }
    // central differences; sampler path gets a tighter step
    double r = std::abs(z);
    double h = (sampler_ ? 1e-6 : 1e-3) * r;
    auto f = [&](cplx p) { return eval(p); };
    double fx = (f(z + cplx(h, 0)) - f(z - cplx(h, 0))) / (2 * h);
    double fy = (f(z + cplx(0, h)) - f(z - cplx(0, h))) / (2 * h);
    return std::hypot(fx, fy);
}

double HarmonicField::discrete_laplacian_residual(const PolarGrid& g, ExecMode mode) const {
    std::vector<double> v;
    const std::vector<double>* pv = nullptr;
    if (!closed_ && grid_->n_radial == g.n_radial && grid_->n_angular == g.n_angular &&
        grid_->r_min == g.r_min && grid_->r_outer == g.r_outer) {
        pv = values_.get();
    } else {
        v = eval_scalar_grid([this](cplx z) { return eval(z); }, g, mode);
        pv = &v;
    }
    const std::vector<double>& u = *pv;
    const double cs = 1.0 / (g.ds() * g.ds()), ct = 1.0 / (g.dtheta() * g.dtheta());
    double worst = 0.0;
    for (int i = 1; i < g.n_radial - 1; ++i) {
        for (int j = 0; j < g.n_angular; ++j) {
            int jl = (j == 0) ? g.n_angular - 1 : j - 1;
            int jr = (j == g.n_angular - 1) ? 0 : j + 1;
            double lap = cs * (u[g.index(i + 1, j)] - 2 * u[g.index(i, j)] + u[g.index(i - 1, j)]) +
                         ct * (u[g.index(i, jr)] - 2 * u[g.index(i, j)] + u[g.index(i, jl)]);
            worst = std::max(worst, std::abs(lap));
        }
    }
    return worst;
}

namespace {

// w = f_x - i f_y by fourth-order central differences of the scalar field.
cplx differentiate_pointwise(const HarmonicField& f, cplx z) {
    double h = 1e-3 * std::abs(z);
    auto d = [&](cplx e) {
        return (-f.eval(z + 2.0 * h * e) + 8.0 * f.eval(z + h * e) - 8.0 * f.eval(z - h * e) +
                f.eval(z - 2.0 * h * e)) /
               (12.0 * h);
    };
    double fx = d(cplx(1, 0));
    double fy = d(cplx(0, 1));
    return {fx, -fy};
}

}  // namespace

OneForm omega_of(const HarmonicField& f, const OmegaOptions& opts, RecoveryDiagnostics* diag) {
    if (f.is_closed_form()) {
        if (diag) *diag = {};  // coefficient arithmetic is exact
        const LaurentSeries& F = f.analytic();
        std::vector<std::pair<int, cplx>> t;
        if (f.log_coeff() != 0.0) t.push_back({-1, cplx(f.log_coeff(), 0.0)});
        LaurentSeries dF = F.derivative();
        for (const auto& [m, a] : dF.terms()) t.push_back({m, a});
        return {LaurentSeries(t, F.r_lo(), F.r_hi())};
    }

    double r1 = opts.r1, r2 = opts.r2;
    if (r1 <= 0.0 || r2 <= 0.0) {
        double lo = f.grid().r_min, hi = f.r_outer();
        r1 = std::exp(0.55 * std::log(lo) + 0.45 * std::log(hi));
        r2 = std::exp(0.10 * std::log(lo) + 0.90 * std::log(hi));
    }
    RecoveryOptions rec = opts.recovery;
    if (opts.auto_loosen && !f.has_exact_sampler()) {
        rec.agreement_tol = std::max(rec.agreement_tol, 0.2);
        rec.reconstruction_tol = std::max(rec.reconstruction_tol, 0.05);
        rec.zero_threshold_rel = std::max(rec.zero_threshold_rel, 1e-4);
        rec.m_lo = std::max(rec.m_lo, -16);
        rec.m_hi = std::min(rec.m_hi, 8);
    }
    auto w_point = [&](cplx z) { return differentiate_pointwise(f, z); };
    return {laurent_from_circles(w_point, r1, r2, opts.n, rec, diag)};
}

double flux(const HarmonicField& f, double r) {
    if (!(r > f.domain().inner_radius && r <= f.r_outer() * (1 + 1e-12)))
        throw DomainError("flux contour outside the annulus");

    if (f.is_closed_form()) {
        // d f / d log r = c + Re(w z); trapezoid over one period is exact for
        // the finite coefficient window
        const int n = 1024;
        OneForm om = omega_of(f);
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            cplx z = std::polar(r, TWO_PI * j / n);
            acc += std::real(om.eval(z) * z);
        }
        return acc * (TWO_PI / n);
    }

    const int n = std::max(1024, 8 * f.grid().n_angular);
    double h = 0.5 * f.grid().ds();
    // keep the difference stencil inside the sampled band
    double s = std::log(r);
    double slo = f.grid().s_min(), shi = f.grid().s_max();
    if (s - h < slo) s = slo + h;
    if (s + h > shi) s = shi - h;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        double th = TWO_PI * j / n;
        double up = f.eval(std::polar(std::exp(s + h), th));
        double dn = f.eval(std::polar(std::exp(s - h), th));
        acc += (up - dn) / (2 * h);
    }
    return acc * (TWO_PI / n);
}

double circle_sup(const HarmonicField& f, double r, int n) {
    double sup = 0.0;
    for (int j = 0; j < n; ++j) sup = std::max(sup, std::abs(f.eval(std::polar(r, TWO_PI * j / n))));
    return sup;
}

}  // namespace annlab
