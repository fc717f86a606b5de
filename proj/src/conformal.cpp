#include "annlab/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace annlab {

namespace {

constexpr std::uint8_t R_INT = std::uint8_t(NodeRole::Interior);
constexpr std::uint8_t R_SURF = std::uint8_t(NodeRole::SurfaceBoundary);
constexpr std::uint8_t R_IDEAL = std::uint8_t(NodeRole::IdealBoundary);
constexpr std::uint8_t R_EXT = std::uint8_t(NodeRole::Exterior);

std::pair<int, int> nearest_node(const PolarGrid& g, cplx z) {
    double s = std::log(std::abs(z));
    int i = int(std::lround((s - g.s_min()) / g.ds()));
    i = std::clamp(i, 0, g.n_radial - 1);
    double th = std::arg(z);
    if (th < 0.0) th += TWO_PI;
    int j = int(std::lround(th / g.dtheta())) % g.n_angular;
    return {i, j};
}

void flood(const PolarGrid& g, const std::function<bool(std::size_t)>& pass, int i0,
           int j0, std::vector<std::uint8_t>& vis) {
    const int nr = g.n_radial, na = g.n_angular;
    std::vector<std::pair<int, int>> stack{{i0, j0}};
    vis[g.index(i0, j0)] = 1;
    while (!stack.empty()) {
        auto [i, j] = stack.back();
        stack.pop_back();
        const int di[4] = {1, -1, 0, 0};
        for (int q = 0; q < 4; ++q) {
            int ni = i + di[q];
            int nj = q < 2 ? j : (q == 2 ? (j + 1) % na : (j + na - 1) % na);
            if (ni < 0 || ni >= nr) continue;
            std::size_t k = g.index(ni, nj);
            if (vis[k] || !pass(k)) continue;
            vis[k] = 1;
            stack.push_back({ni, nj});
        }
    }
}

SubdomainMask roles_from_region(const PolarGrid& g, const std::vector<std::uint8_t>& vis,
                                cplx basepoint, int i0, int j0) {
    const int nr = g.n_radial, na = g.n_angular;
    SubdomainMask m;
    m.grid = g;
    m.role.assign(g.size(), R_EXT);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < na; ++j) {
            std::size_t k = g.index(i, j);
            if (!vis[k]) continue;
            m.role[k] = i == 0 ? R_IDEAL : (i == nr - 1 ? R_SURF : R_INT);
        }
    // out-of-region nodes walling the interior carry the ground condition
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < na; ++j) {
            std::size_t k = g.index(i, j);
            if (m.role[k] != R_EXT) continue;
            const int di[4] = {1, -1, 0, 0};
            for (int q = 0; q < 4; ++q) {
                int ni = i + di[q];
                int nj = q < 2 ? j : (q == 2 ? (j + 1) % na : (j + na - 1) % na);
                if (ni < 0 || ni >= nr) continue;
                if (m.role[g.index(ni, nj)] == R_INT) {
                    m.role[k] = R_SURF;
                    break;
                }
            }
        }
    m.basepoint = basepoint;
    m.seed_i = i0;
    m.seed_j = j0;
    if (m.role[m.seed_index()] != R_INT)
        throw DomainError("basepoint must land on an interior node");
    return m;
}

}  // namespace

SubdomainMask full_mask(const PolarGrid& g, cplx z0) {
    std::vector<std::uint8_t> vis(g.size(), 1);
    auto [i0, j0] = nearest_node(g, z0);
    return roles_from_region(g, vis, z0, i0, j0);
}

SubdomainMask mask_from_level(const HarmonicField& f, double t, Side side,
                              cplx component_seed, const PolarGrid& g) {
    double sv = f.eval(component_seed);
    bool strict = side == Side::GreaterEqual ? sv > t : sv < t;
    if (!strict) throw DomainError("seed does not satisfy the side condition strictly");

    std::vector<double> v(g.size());
    for (int i = 0; i < g.n_radial; ++i)
        for (int j = 0; j < g.n_angular; ++j) v[g.index(i, j)] = f.eval(g.node(i, j));

    auto pass = [&](std::size_t k) {
        return side == Side::GreaterEqual ? v[k] >= t : v[k] <= t;
    };
    auto [i0, j0] = nearest_node(g, component_seed);
    if (!pass(g.index(i0, j0)))
        throw DomainError("node nearest the seed falls outside the level region");

    std::vector<std::uint8_t> vis(g.size(), 0);
    flood(g, pass, i0, j0, vis);
    return roles_from_region(g, vis, component_seed, i0, j0);
}

std::vector<double> dirichlet_solve(const SubdomainMask& mask, double tol,
                                    std::int64_t max_iters, ExecMode mode) {
    const PolarGrid& g = mask.grid;
    if (mask.role.size() != g.size()) throw DomainError("mask does not match its grid");
    std::vector<double> u(g.size(), 0.0);
    for (std::size_t k = 0; k < u.size(); ++k)
        if (mask.role[k] == R_IDEAL) u[k] = 1.0;
    double res = std::numeric_limits<double>::infinity();
    for (std::int64_t it = 0; it < max_iters; ++it) {
        double r0 = sor_halfsweep(u, mask.role, g, 0, 1.9, mode);
        double r1 = sor_halfsweep(u, mask.role, g, 1, 1.9, mode);
        res = std::max(r0, r1);
        if (res < tol) return u;
    }
    throw NumericalNonconvergence("relaxation still moving at the iteration cap", res);
}

McEstimate mc_harmonic_measure(const SubdomainMask& mask, std::int64_t walks,
                               std::uint64_t seed, ExecMode mode) {
    if (walks < 10000) throw DomainError("walker needs at least 10000 walks");
    if (mask.role[mask.seed_index()] != R_INT)
        throw DomainError("walker must start on an interior node");
    WalkOutcome o = random_walk_batch(mask.role, mask.grid, mask.seed_i, mask.seed_j,
                                      walks, seed, 10000000, mode);
    McEstimate est;
    est.walks = walks;
    est.censored = o.censored;
    est.flagged = o.censored * 100 > walks;
    std::int64_t n = o.absorbed_one + o.absorbed_zero;
    if (n > 0) {
        double p = double(o.absorbed_one) / double(n);
        const double zc = 1.959963984540054;
        double z2n = zc * zc / double(n);
        est.p = p;
        est.half_width =
            zc * std::sqrt(p * (1.0 - p) / double(n) + z2n / (4.0 * double(n))) /
            (1.0 + z2n);
    } else {
        est.flagged = true;
    }
    return est;
}

HarmonicMeasureReport classify_type(const MaskBuilder& build, const PolarGrid& g,
                                    const ClassifyOptions& opts) {
    SubdomainMask coarse = build(g);
    std::vector<double> uc = dirichlet_solve(coarse, opts.tol, opts.max_iters, opts.mode);
    double u_n = uc[coarse.seed_index()];

    PolarGrid g2 = g.refined();
    SubdomainMask fine = build(g2);
    std::vector<double> uf = dirichlet_solve(fine, opts.tol, opts.max_iters, opts.mode);
    // read the fine solve at the coarse seed's own node (refinement keeps
    // every coarse node), so the resolution drift is discretization alone and
    // never basepoint re-rounding
    std::size_t k2 = g2.index(2 * coarse.seed_i, 2 * coarse.seed_j);
    double u_2n = fine.role[k2] == R_INT ? uf[k2] : uf[fine.seed_index()];

    McEstimate mc = mc_harmonic_measure(coarse, opts.walks, opts.seed, opts.mode);

    HarmonicMeasureReport rep;
    rep.u_solver = u_2n;
    rep.u_solver_coarse = u_n;
    rep.u_mc = mc.p;
    rep.half_width = mc.half_width;
    rep.mc_censored = mc.censored;
    rep.mc_flagged = mc.flagged;
    rep.resolutions = {g.n_radial, g2.n_radial};
    rep.delta = 10.0 * std::abs(u_n - u_2n) + 1e-3;
    if (u_n > rep.delta && u_2n > rep.delta) {
        rep.verdict = TypeVerdict::Hyperbolic;
    } else if (u_n < rep.delta && u_2n < rep.delta && u_2n <= u_n + 0.1 * rep.delta) {
        rep.verdict = TypeVerdict::Parabolic;
    } else {
        rep.verdict = TypeVerdict::Indeterminate;
    }
    return rep;
}

PunctureTrendReport classify_puncture_trend(cplx z0, const std::vector<double>& inner_radii,
                                            int n_radial, int n_angular) {
    if (inner_radii.size() < 2) throw DomainError("trend needs at least two radii");
    std::vector<double> eps(inner_radii);
    std::sort(eps.begin(), eps.end(), std::greater<double>());
    double a0 = std::abs(z0);
    if (!(eps.front() < a0) || !(a0 < 1.0))
        throw DomainError("z0 must sit between the largest inner radius and the outer circle");

    PunctureTrendReport rep;
    rep.inner_radii = eps;
    rep.expected_constant = std::log(1.0 / a0);
    double c_sum = 0.0;
    for (double e : eps) {
        PolarGrid g(e, n_radial, n_angular, 1.0);
        SubdomainMask m = full_mask(g, z0);
        std::vector<double> u = dirichlet_solve(m);
        double val = u[m.seed_index()];
        rep.u_values.push_back(val);
        c_sum += val * std::log(1.0 / e);
    }
    rep.fitted_constant = c_sum / double(eps.size());
    rep.monotone_decreasing = true;
    for (std::size_t k = 0; k + 1 < rep.u_values.size(); ++k)
        if (!(rep.u_values[k + 1] < rep.u_values[k])) rep.monotone_decreasing = false;
    rep.parabolic_trend =
        rep.monotone_decreasing &&
        std::abs(rep.fitted_constant / rep.expected_constant - 1.0) <= 0.2;
    return rep;
}

HalfspaceReport halfspace_cross_check(const WeierstrassData& data, double t,
                                      const PolarGrid& g, std::vector<double> shrink) {
    if (g.r_outer > data.r_prime * (1.0 + 1e-12))
        throw DomainError("grid extends past the working radius");
    HarmonicField x3 = height_field(data);
    const int nr = g.n_radial, na = g.n_angular;
    std::vector<double> v(g.size());
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < na; ++j) v[g.index(i, j)] = x3.eval(g.node(i, j));

    if (shrink.empty()) shrink = {g.r_min, 0.25 * g.r_min, 0.0625 * g.r_min};
    std::sort(shrink.begin(), shrink.end(), std::greater<double>());
    if (shrink.front() > g.r_min * (1.0 + 1e-12))
        throw DomainError("shrink radii must start at or below the grid inner radius");

    HalfspaceReport rep;
    rep.level = t;
    rep.shrink = shrink;

    for (int side_i = 0; side_i < 2; ++side_i) {
        const bool below = side_i == 0;
        const Side side = below ? Side::LessEqual : Side::GreaterEqual;
        auto pass = [&](std::size_t k) { return below ? v[k] <= t : v[k] >= t; };

        std::vector<int> label(g.size(), -1);
        int n_comp = 0;
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < na; ++j) {
                std::size_t k0 = g.index(i, j);
                if (!pass(k0) || label[k0] >= 0) continue;
                std::vector<std::pair<int, int>> stack{{i, j}};
                label[k0] = n_comp;
                while (!stack.empty()) {
                    auto [ci, cj] = stack.back();
                    stack.pop_back();
                    const int di[4] = {1, -1, 0, 0};
                    for (int q = 0; q < 4; ++q) {
                        int nni = ci + di[q];
                        int nnj = q < 2 ? cj : (q == 2 ? (cj + 1) % na : (cj + na - 1) % na);
                        if (nni < 0 || nni >= nr) continue;
                        std::size_t k = g.index(nni, nnj);
                        if (label[k] >= 0 || !pass(k)) continue;
                        label[k] = n_comp;
                        stack.push_back({nni, nnj});
                    }
                }
                ++n_comp;
            }
        if (n_comp == 0) {
            (below ? rep.below_vacuous : rep.above_vacuous) = true;
            continue;
        }

        // distance (in grid steps) from each in-region node to the nearest
        // out-of-region node: the trend basepoint goes to an inradius center,
        // far from the level wall, so its nearest node on every shrink grid
        // stays strictly inside the same component
        std::vector<int> wall(g.size(), -1);
        std::vector<std::size_t> frontier;
        for (std::size_t k = 0; k < g.size(); ++k)
            if (!pass(k)) {
                wall[k] = 0;
                frontier.push_back(k);
            }
        for (std::size_t head = 0; head < frontier.size(); ++head) {
            std::size_t k = frontier[head];
            int i = int(k) / na, j = int(k) % na;
            const int di[4] = {1, -1, 0, 0};
            for (int q = 0; q < 4; ++q) {
                int ni = i + di[q];
                int nj = q < 2 ? j : (q == 2 ? (j + 1) % na : (j + na - 1) % na);
                if (ni < 0 || ni >= nr) continue;
                std::size_t kk = g.index(ni, nj);
                if (wall[kk] >= 0) continue;
                wall[kk] = wall[k] + 1;
                frontier.push_back(kk);
            }
        }

        for (int c = 0; c < n_comp; ++c) {
            HalfspaceComponent comp;
            comp.below = below;
            int best = -1, best_depth = -1;
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (int i = 0; i < nr; ++i)
                for (int j = 0; j < na; ++j) {
                    std::size_t k = g.index(i, j);
                    if (label[k] != c) continue;
                    lo = std::min(lo, v[k]);
                    hi = std::max(hi, v[k]);
                    if (i == 0) comp.touches_ideal = true;
                    bool strict = below ? v[k] < t : v[k] > t;
                    int from_wall = wall[k] < 0 ? nr : wall[k];  // -1: side fills the grid
                    int depth = std::min(from_wall, std::min(i, nr - 1 - i));
                    if (i > 0 && i < nr - 1 && strict && depth > best_depth) {
                        best_depth = depth;
                        best = int(k);
                    }
                }
            comp.extreme = below ? lo : hi;
            comp.confined = below ? hi <= t + 1e-9 : lo >= t - 1e-9;
            if (best < 0) {
                comp.verdict = TypeVerdict::Indeterminate;
                comp.note = "component has no strict interior node";
                rep.components.push_back(comp);
                continue;
            }
            comp.seed = g.node(best / na, best % na);

            for (double e : shrink) {
                PolarGrid ge(e, nr, na, g.r_outer);
                SubdomainMask m = mask_from_level(x3, t, side, comp.seed, ge);
                std::vector<double> u = dirichlet_solve(m);
                comp.u_trend.push_back(u[m.seed_index()]);
            }

            bool tiny = true, down = true;
            double umin = std::numeric_limits<double>::infinity();
            for (double uv : comp.u_trend) {
                tiny = tiny && uv <= 1e-3;
                umin = std::min(umin, uv);
            }
            for (std::size_t k = 0; k + 1 < comp.u_trend.size(); ++k)
                if (!(comp.u_trend[k] - comp.u_trend[k + 1] > 1e-3)) down = false;
            if (tiny) {
                comp.verdict = TypeVerdict::Parabolic;
                comp.note = "ideal boundary carries no measure";
            } else if (down) {
                comp.verdict = TypeVerdict::Parabolic;
                comp.note = "measure decays as the inner radius shrinks";
            } else if (umin > 0.05) {
                comp.verdict = TypeVerdict::Hyperbolic;
                comp.note = "measure stays put under shrinking";
            } else {
                comp.verdict = TypeVerdict::Indeterminate;
                comp.note = "measure neither decays cleanly nor stabilizes";
            }
            comp.contradiction = comp.confined && comp.verdict == TypeVerdict::Hyperbolic;
            rep.any_contradiction = rep.any_contradiction || comp.contradiction;
            rep.components.push_back(comp);
        }
    }
    return rep;
}

}  // namespace annlab
