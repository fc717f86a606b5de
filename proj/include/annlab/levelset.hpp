#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "annlab/harmonic.hpp"

namespace annlab {

enum class EndpointKind { OuterBoundary, InnerLimit, CrossingNode, Loop };

struct ArcEndpoint {
    EndpointKind kind = EndpointKind::Loop;
    int node_id = -1;  // CrossingNode only
};

// Polyline component of a level set, in (s = log r, theta) with theta
// unrolled along the walk (crossing the periodic seam keeps incrementing).
struct LevelArc {
    int id = 0;
    std::vector<std::array<double, 2>> pts;
    ArcEndpoint start, finish;
    bool closed = false;
    int winding = 0;  // closed arcs: net theta turns
    double min_s = 0.0, max_s = 0.0;

    cplx point(std::size_t k) const {
        return std::polar(std::exp(pts[k][0]), pts[k][1]);
    }
    double length_euclid() const;  // polyline length in the z chart
};

struct CrossingNodeInfo {
    int id = 0;
    double s = 0.0, theta = 0.0;
    int incident_arcs = 0;
};

struct LevelSetComplex {
    double level = 0.0;
    double s_min = 0.0, s_max = 0.0;  // traced band in log r
    std::vector<LevelArc> arcs;
    std::vector<CrossingNodeInfo> nodes;
    std::vector<std::string> warnings;

    bool has_warning(const std::string& prefix) const;
};

struct TraceOptions {
    double f_tol_rel = 1e-9;  // level tolerance, relative to field scale
    double g_tol_rel = 1e-6;  // gradient tolerance, relative to field scale
    bool scan_critical_values = true;
    ExecMode mode = ExecMode::Parallel;
};

/// March the level { f = t } over the grid cells in (log r, theta), stitch
/// across the periodic seam, and collapse near-critical cells (|f - t| and
/// |grad f| both under tolerance) into crossing nodes.  Saddle-ambiguous
/// cells are resolved by the sign of f - t at the cell center.  Emits a
/// CriticalLevel warning when t sits within tolerance of a detected critical
/// value.
LevelSetComplex trace_level(const HarmonicField& f, double t, const PolarGrid& g,
                            const TraceOptions& opts = {});

struct EndCount {
    int count = 0;
    // one entry per counted germ: (arc id, true when the germ is the arc's
    // `finish` endpoint)
    std::vector<std::pair<int, bool>> germs;
};

/// Count ends: inner-boundary endpoint germs whose arc climbs past the top
/// of the radius schedule (so the germ crosses every schedule circle).  An
/// arc with both endpoints on the inner boundary contributes two germs.
/// Short returning excursions count zero.  An inner germ whose arc stops at
/// a crossing node before reaching the schedule top throws UndeterminedEnd.
EndCount count_ends(const LevelSetComplex& complex, const RadiusSchedule& schedule);

enum class LimitVerdict { PunctureLimit, InnerPointLimit, NonConvergent };

struct EndLimitReport {
    LimitVerdict verdict = LimitVerdict::NonConvergent;
    cplx limit_point = {0.0, 0.0};       // InnerPointLimit only
    std::vector<double> angles;          // unrolled angle at each schedule radius
    double tail_oscillation = 0.0;
};

/// Track one end germ down the schedule and decide where it lands on the
/// inner boundary.  R = 0: the puncture (a single point by definition).
/// R > 0: the recorded crossing angles must settle (tail oscillation under
/// angle_tol) for a point verdict at R e^{i theta}.
EndLimitReport end_limit_point(const AnnulusDomain& domain, const LevelArc& arc,
                               const RadiusSchedule& schedule,
                               bool germ_at_finish, double angle_tol = 1e-2);

// Stoltz-style approach region: vertex xi on the inner circle, opening
// half-angle around the outward radial direction, reach along the median.
struct AngularSector {
    cplx xi;
    double half_angle = PI / 6;
    double reach = 0.3;
};

struct AngularLimitReport {
    bool convergent = false;
    double value = 0.0;
    std::vector<double> generation_means;
    std::vector<double> generation_oscillations;
};

/// Sample f on dyadic generations marching into the sector vertex and test
/// the generation statistics for a Cauchy tail.  limit_tol is relative to
/// the field scale.
AngularLimitReport angular_limit(const HarmonicField& f, const AngularSector& sector,
                                 int depth = 24, double limit_tol_rel = 1e-6);

struct CompactBoundingReport {
    bool ok = true;        // no null-homotopic closed level loop found
    int offending_arc = -1;
};

/// A closed level loop with winding number zero around the annulus core
/// would bound a compact region where f is constant on the boundary: flag it.
CompactBoundingReport check_no_compact_bounding(const LevelSetComplex& complex);

}  // namespace annlab
