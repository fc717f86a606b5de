#include "annlab/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>

namespace annlab {

double LevelArc::length_euclid() const {
    double len = 0.0;
    for (std::size_t k = 1; k < pts.size(); ++k) len += std::abs(point(k) - point(k - 1));
    if (closed && pts.size() > 2) len += std::abs(point(0) - point(pts.size() - 1));
    return len;
}

bool LevelSetComplex::has_warning(const std::string& prefix) const {
    for (const auto& w : warnings)
        if (w.rfind(prefix, 0) == 0) return true;
    return false;
}

namespace {

struct Seg {
    std::int64_t ea, eb;
};

// Cell (i, j) spans radial rows i..i+1 and angular columns j..j+1 (mod na).
// Edge ids: horizontal H(i, j) = i*na + j joins nodes (i,j)-(i,j+1);
// vertical V(i, j) = hbase + i*na + j joins (i,j)-(i+1,j).
struct March {
    const PolarGrid& g;
    const std::vector<double>& v;  // f - t at nodes
    int nr, na;
    std::int64_t hbase;

    March(const PolarGrid& grid, const std::vector<double>& vals)
        : g(grid), v(vals), nr(grid.n_radial), na(grid.n_angular),
          hbase(std::int64_t(grid.n_radial) * grid.n_angular) {}

    double val(int i, int j) const { return v[g.index(i, j)]; }

    std::int64_t edge_h(int i, int j) const { return std::int64_t(i) * na + j; }
    std::int64_t edge_v(int i, int j) const { return hbase + std::int64_t(i) * na + j; }

    std::size_t cell(int i, int j) const { return std::size_t(i) * na + j; }

    // Interpolated crossing of an edge, as (s, raw theta).  Only called on
    // edges whose endpoint values straddle zero, so the divisor is nonzero.
    std::array<double, 2> edge_point(std::int64_t e) const {
        if (e < hbase) {
            int i = int(e / na), j = int(e % na);
            double v0 = val(i, j), v1 = val(i, (j + 1) % na);
            double tau = std::clamp(v0 / (v0 - v1), 0.0, 1.0);
            return {g.s_of(i), (j + tau) * g.dtheta()};
        }
        std::int64_t e2 = e - hbase;
        int i = int(e2 / na), j = int(e2 % na);
        double v0 = val(i, j), v1 = val(i + 1, j);
        double tau = std::clamp(v0 / (v0 - v1), 0.0, 1.0);
        return {g.s_of(i) + tau * g.ds(), j * g.dtheta()};
    }

    cplx cell_center(int i, int j) const {
        double s = g.s_of(i) + 0.5 * g.ds();
        double th = (j + 0.5) * g.dtheta();
        return std::polar(std::exp(s), th);
    }
};

void append_point(LevelArc& arc, const March& m, std::int64_t e) {
    auto p = m.edge_point(e);
    double th = p[1];
    if (!arc.pts.empty()) {
        double prev = arc.pts.back()[1];
        th += TWO_PI * std::round((prev - th) / TWO_PI);
        arc.min_s = std::min(arc.min_s, p[0]);
        arc.max_s = std::max(arc.max_s, p[0]);
    } else {
        arc.min_s = arc.max_s = p[0];
    }
    arc.pts.push_back({p[0], th});
}

}  // namespace

LevelSetComplex trace_level(const HarmonicField& f, double t, const PolarGrid& g,
                            const TraceOptions& opts) {
    if (g.r_min <= f.domain().inner_radius)
        throw DomainError("trace grid must sit strictly inside the field domain");
    if (g.r_outer > f.r_outer() + 1e-12)
        throw DomainError("trace grid exceeds the field's outer radius");

    const double scale = f.scale();
    const double f_tol = opts.f_tol_rel * scale;
    const double g_tol = opts.g_tol_rel * scale;

    std::vector<double> vals =
        eval_scalar_grid([&](cplx z) { return f.eval(z) - t; }, g, opts.mode);

    March m(g, vals);
    const int nr = m.nr, na = m.na;
    const std::size_t ncells = std::size_t(nr - 1) * na;

    LevelSetComplex out;
    out.level = t;
    out.s_min = g.s_min();
    out.s_max = g.s_max();

    // Cells where the level passes through a near-critical point collapse to
    // crossing nodes; marching squares would otherwise split the crossing
    // into disconnected hyperbola branches.
    std::vector<std::uint8_t> node_cell(ncells, 0);
    std::vector<int> cluster(ncells, -1);
    if (opts.scan_critical_values) {
        const double slack = f_tol + g_tol * std::max(g.ds(), g.dtheta());
        for (int i = 0; i < nr - 1; ++i) {
            for (int j = 0; j < na; ++j) {
                double a = std::abs(m.val(i, j)), b = std::abs(m.val(i, (j + 1) % na));
                double c = std::abs(m.val(i + 1, j)), d = std::abs(m.val(i + 1, (j + 1) % na));
                if (std::min(std::min(a, b), std::min(c, d)) >= slack) continue;
                cplx zc = m.cell_center(i, j);
                if (std::abs(f.eval(zc) - t) > f_tol) continue;
                if (f.gradient_norm(zc) > g_tol) continue;
                node_cell[m.cell(i, j)] = 1;
            }
        }
        for (std::size_t c0 = 0; c0 < ncells; ++c0) {
            if (!node_cell[c0] || cluster[c0] >= 0) continue;
            int id = int(out.nodes.size());
            std::vector<std::size_t> stack{c0};
            cluster[c0] = id;
            double ssum = 0.0, csum = 0.0, sinsum = 0.0;
            int count = 0;
            while (!stack.empty()) {
                std::size_t c = stack.back();
                stack.pop_back();
                int i = int(c / na), j = int(c % na);
                ssum += g.s_of(i) + 0.5 * g.ds();
                double th = (j + 0.5) * g.dtheta();
                csum += std::cos(th);
                sinsum += std::sin(th);
                ++count;
                const int di[4] = {1, -1, 0, 0};
                const int dj[4] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k) {
                    int ni = i + di[k], nj = (j + dj[k] + na) % na;
                    if (ni < 0 || ni >= nr - 1) continue;
                    std::size_t nc = m.cell(ni, nj);
                    if (node_cell[nc] && cluster[nc] < 0) {
                        cluster[nc] = id;
                        stack.push_back(nc);
                    }
                }
            }
            double th = std::atan2(sinsum, csum);
            if (th < 0) th += TWO_PI;
            out.nodes.push_back({id, ssum / count, th, 0});
        }
        if (!out.nodes.empty())
            out.warnings.push_back("CriticalLevel: level lies within tolerance of a critical value (" +
                                   std::to_string(out.nodes.size()) + " crossing node(s))");
    }

    // Segment table.  Corner bit order: bit0 = (i,j), bit1 = (i,j+1),
    // bit2 = (i+1,j+1), bit3 = (i+1,j); a bit is set where f - t >= 0.
    std::vector<Seg> segs;
    std::unordered_map<std::int64_t, std::array<int, 2>> at_edge;
    bool nonmanifold = false;
    auto add_seg = [&](std::int64_t a, std::int64_t b) {
        int id = int(segs.size());
        segs.push_back({a, b});
        for (std::int64_t e : {a, b}) {
            auto& slot = at_edge.try_emplace(e, std::array<int, 2>{-1, -1}).first->second;
            if (slot[0] < 0)
                slot[0] = id;
            else if (slot[1] < 0)
                slot[1] = id;
            else
                nonmanifold = true;
        }
    };

    for (int i = 0; i < nr - 1; ++i) {
        for (int j = 0; j < na; ++j) {
            if (opts.scan_critical_values && node_cell[m.cell(i, j)]) continue;
            int jn = (j + 1) % na;
            unsigned cfg = 0;
            if (m.val(i, j) >= 0.0) cfg |= 1;
            if (m.val(i, jn) >= 0.0) cfg |= 2;
            if (m.val(i + 1, jn) >= 0.0) cfg |= 4;
            if (m.val(i + 1, j) >= 0.0) cfg |= 8;
            if (cfg == 0 || cfg == 15) continue;
            std::int64_t B = m.edge_h(i, j), T = m.edge_h(i + 1, j);
            std::int64_t L = m.edge_v(i, j), R = m.edge_v(i, jn);
            switch (cfg) {
                case 1: case 14: add_seg(L, B); break;
                case 2: case 13: add_seg(B, R); break;
                case 4: case 11: add_seg(R, T); break;
                case 8: case 7: add_seg(T, L); break;
                case 3: case 12: add_seg(L, R); break;
                case 6: case 9: add_seg(B, T); break;
                case 5:
                    // both diagonals positive: the center sample decides how
                    // the two hyperbola branches pair up
                    if (f.eval(m.cell_center(i, j)) - t >= 0.0) {
                        add_seg(L, T);
                        add_seg(B, R);
                    } else {
                        add_seg(L, B);
                        add_seg(R, T);
                    }
                    break;
                case 10:
                    if (f.eval(m.cell_center(i, j)) - t >= 0.0) {
                        add_seg(L, B);
                        add_seg(R, T);
                    } else {
                        add_seg(B, R);
                        add_seg(T, L);
                    }
                    break;
                default: break;
            }
        }
    }
    if (nonmanifold) out.warnings.push_back("NonManifold: an edge met more than two segments");

    auto partner = [&](std::int64_t e, int sid) -> int {
        auto it = at_edge.find(e);
        if (it == at_edge.end()) return -1;
        return it->second[0] == sid ? it->second[1] : it->second[0];
    };

    bool dangling = false;
    auto classify = [&](std::int64_t e) -> ArcEndpoint {
        if (e < m.hbase) {
            int i = int(e / na), j = int(e % na);
            if (i == 0) return {EndpointKind::InnerLimit, -1};
            if (i == nr - 1) return {EndpointKind::OuterBoundary, -1};
            std::size_t below = m.cell(i - 1, j), above = m.cell(i, j);
            if (node_cell[below]) return {EndpointKind::CrossingNode, cluster[below]};
            if (node_cell[above]) return {EndpointKind::CrossingNode, cluster[above]};
        } else {
            std::int64_t e2 = e - m.hbase;
            int i = int(e2 / na), j = int(e2 % na);
            std::size_t left = m.cell(i, (j - 1 + na) % na), right = m.cell(i, j);
            if (node_cell[left]) return {EndpointKind::CrossingNode, cluster[left]};
            if (node_cell[right]) return {EndpointKind::CrossingNode, cluster[right]};
        }
        dangling = true;
        return {EndpointKind::CrossingNode, -1};
    };

    std::vector<std::uint8_t> visited(segs.size(), 0);

    // Open chains first, started from edges with a single incident segment
    // (domain boundary or the rim of a collapsed node cluster), in edge order.
    std::vector<std::pair<std::int64_t, int>> starts;
    for (int sid = 0; sid < int(segs.size()); ++sid)
        for (std::int64_t e : {segs[sid].ea, segs[sid].eb})
            if (at_edge[e][1] < 0) starts.push_back({e, sid});
    std::sort(starts.begin(), starts.end());

    for (auto [e0, s0] : starts) {
        if (visited[s0]) continue;
        LevelArc arc;
        arc.id = int(out.arcs.size());
        arc.start = classify(e0);
        append_point(arc, m, e0);
        int cur = s0;
        std::int64_t in_e = e0;
        while (true) {
            visited[cur] = 1;
            std::int64_t out_e = segs[cur].ea == in_e ? segs[cur].eb : segs[cur].ea;
            append_point(arc, m, out_e);
            int nxt = partner(out_e, cur);
            if (nxt < 0 || visited[nxt]) {
                arc.finish = classify(out_e);
                break;
            }
            in_e = out_e;
            cur = nxt;
        }
        out.arcs.push_back(std::move(arc));
    }

    // Everything left is a closed loop.
    for (int sid = 0; sid < int(segs.size()); ++sid) {
        if (visited[sid]) continue;
        LevelArc arc;
        arc.id = int(out.arcs.size());
        arc.closed = true;
        arc.start = arc.finish = {EndpointKind::Loop, -1};
        std::int64_t start_e = segs[sid].ea;
        append_point(arc, m, start_e);
        int cur = sid;
        std::int64_t in_e = start_e;
        while (true) {
            visited[cur] = 1;
            std::int64_t out_e = segs[cur].ea == in_e ? segs[cur].eb : segs[cur].ea;
            if (out_e == start_e) break;
            append_point(arc, m, out_e);
            int nxt = partner(out_e, cur);
            if (nxt < 0 || visited[nxt]) {
                out.warnings.push_back("BrokenLoop: arc " + std::to_string(arc.id) +
                                       " did not close");
                break;
            }
            in_e = out_e;
            cur = nxt;
        }
        arc.winding = int(std::lround((arc.pts.back()[1] - arc.pts[0][1]) / TWO_PI));
        out.arcs.push_back(std::move(arc));
    }

    if (dangling) out.warnings.push_back("Dangling: a chain ended away from any boundary or node");

    for (const auto& a : out.arcs) {
        for (const ArcEndpoint* ep : {&a.start, &a.finish})
            if (ep->kind == EndpointKind::CrossingNode && ep->node_id >= 0)
                out.nodes[ep->node_id].incident_arcs++;
    }
    return out;
}

EndCount count_ends(const LevelSetComplex& complex, const RadiusSchedule& schedule) {
    double s_top = std::log(schedule.top());
    double s_bot = std::log(schedule.bottom());
    if (s_top > complex.s_max + 1e-12 || s_bot < complex.s_min - 1e-12)
        throw DomainError("radius schedule leaves the traced band");

    EndCount ec;
    for (const auto& arc : complex.arcs) {
        if (arc.closed) continue;
        struct Germ {
            const ArcEndpoint* self;
            const ArcEndpoint* other;
            bool at_finish;
        };
        for (const Germ& g : {Germ{&arc.start, &arc.finish, false}, Germ{&arc.finish, &arc.start, true}}) {
            if (g.self->kind != EndpointKind::InnerLimit) continue;
            if (arc.max_s >= s_top - 1e-12) {
                ec.count++;
                ec.germs.push_back({arc.id, g.at_finish});
            } else if (g.other->kind == EndpointKind::CrossingNode) {
                // the continuation through the node is unresolved at this
                // resolution, so the germ can't be judged either way
                throw UndeterminedEnd(
                    "arc " + std::to_string(arc.id) +
                        " ends on a crossing node below the schedule top",
                    arc.id);
            }
            // short excursion returning to the inner boundary: not an end
        }
    }
    return ec;
}

EndLimitReport end_limit_point(const AnnulusDomain& domain, const LevelArc& arc,
                               const RadiusSchedule& schedule,
                               bool germ_at_finish, double angle_tol) {
    if (arc.closed) throw DomainError("closed arc carries no end germ");
    EndLimitReport rep;
    const auto& P = arc.pts;
    const int n = int(P.size());
    const int J = schedule.count();
    rep.angles.assign(J, std::numeric_limits<double>::quiet_NaN());
    if (n < 2) return rep;

    auto at = [&](int k) { return germ_at_finish ? P[n - 1 - k] : P[k]; };
    std::vector<double> sj(J);
    for (int j = 0; j < J; ++j) sj[j] = std::log(schedule.radii[j]);

    // first crossing of each schedule circle, walking outward from the germ
    std::vector<char> seen(J, 0);
    int remaining = J;
    for (int k = 0; k + 1 < n && remaining > 0; ++k) {
        auto a = at(k), b = at(k + 1);
        for (int j = 0; j < J; ++j) {
            if (seen[j]) continue;
            double da = a[0] - sj[j], db = b[0] - sj[j];
            if (da == 0.0) {
                rep.angles[j] = a[1];
            } else if (da * db <= 0.0 && a[0] != b[0]) {
                double tau = da / (a[0] - b[0]);
                rep.angles[j] = a[1] + tau * (b[1] - a[1]);
            } else {
                continue;
            }
            seen[j] = 1;
            --remaining;
        }
    }
    if (remaining > 0) return rep;  // arc does not span the schedule

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int j = J / 2; j < J; ++j) {
        lo = std::min(lo, rep.angles[j]);
        hi = std::max(hi, rep.angles[j]);
    }
    rep.tail_oscillation = hi - lo;

    if (domain.punctured()) {
        rep.verdict = LimitVerdict::PunctureLimit;
        rep.limit_point = {0.0, 0.0};
    } else if (rep.tail_oscillation < angle_tol) {
        rep.verdict = LimitVerdict::InnerPointLimit;
        rep.limit_point = std::polar(domain.inner_radius, rep.angles[J - 1]);
    } else {
        rep.verdict = LimitVerdict::NonConvergent;
    }
    return rep;
}

AngularLimitReport angular_limit(const HarmonicField& f, const AngularSector& sector,
                                 int depth, double limit_tol_rel) {
    if (depth < 6) throw DomainError("angular limit needs depth >= 6");
    double R = std::abs(sector.xi);
    if (!(R > 0.0)) throw DomainError("sector vertex must lie on a positive inner circle");
    if (std::abs(R - f.domain().inner_radius) > 1e-9 * std::max(1.0, R))
        throw DomainError("sector vertex must lie on the domain's inner circle");
    if (!(sector.half_angle > 0.0 && sector.half_angle < PI / 2))
        throw DomainError("sector half-angle must lie in (0, pi/2)");
    if (!(sector.reach > 0.0)) throw DomainError("sector reach must be positive");

    const double beta = std::arg(sector.xi);
    const double tol = limit_tol_rel * f.scale();
    const int fan = 9;

    AngularLimitReport rep;
    for (int k = 1; k <= depth; ++k) {
        double d = sector.reach * std::ldexp(1.0, -k);
        double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
        for (int mfan = 0; mfan < fan; ++mfan) {
            double phi = -sector.half_angle + 2.0 * sector.half_angle * mfan / (fan - 1);
            cplx z = sector.xi + std::polar(d, beta + phi);
            if (k == 1 && !f.domain().contains(z))
                throw DomainError("sector reach leaves the domain");
            double v = f.eval(z);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            sum += v;
        }
        rep.generation_means.push_back(sum / fan);
        rep.generation_oscillations.push_back(hi - lo);
    }

    const int tail = std::min(5, depth);
    bool ok = true;
    for (int k = depth - tail; k < depth; ++k) {
        if (!(rep.generation_oscillations[k] <= tol)) ok = false;
        if (k > depth - tail && !(std::abs(rep.generation_means[k] - rep.generation_means[k - 1]) <= tol))
            ok = false;
    }
    rep.convergent = ok;
    rep.value = rep.generation_means.back();
    return rep;
}

CompactBoundingReport check_no_compact_bounding(const LevelSetComplex& complex) {
    for (const auto& arc : complex.arcs) {
        if (arc.closed && arc.winding == 0) return {false, arc.id};
    }
    return {true, -1};
}

}  // namespace annlab
