#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "annlab/levelset.hpp"
#include "annlab/meromorphic.hpp"

namespace annlab {

// Oriented affine plane { x . normal = offset }.  normal must be unit length.
struct Plane {
    std::array<double, 3> normal{0.0, 0.0, 1.0};
    double offset = 0.0;
};

// Surface data on the punctured working annulus 0 < |z| <= r_prime: Gauss map
// g = z^n e^{H(z)} (zero- and pole-free away from the puncture by
// construction) and height differential h(z) dz.
struct WeierstrassData {
    int gauss_winding = 0;
    LaurentSeries H;
    LaurentSeries height_form;
    double r_prime = 1.0;
};

/// Validate and assemble the data.  The residue of the height form must be
/// real: an imaginary part would make the height multivalued around the core
/// circle (SlicePeriodError at load, not at first use).  A real residue is
/// fine; it only adds a log term to the height.
WeierstrassData make_weierstrass(int n, LaurentSeries H, LaurentSeries height_form,
                                 double r_prime);

// Mesh image of the surface over a polar grid.  Positions integrate the
// one-forms radially along theta = 0 first, then around each grid circle, so
// every vertex value is independent of traversal interleaving.  theta is a
// single cover: any real period of a coordinate one-form shows up as
// seam_period instead of being smeared around the circle.
struct MinimalImmersion {
    PolarGrid grid;
    std::vector<std::array<double, 3>> points;
    std::vector<double> conformality;  // per vertex: |sum phi_k^2| / sum |phi_k|^2

    std::array<double, 3> seam_period{};   // real period of one full theta loop
    double x3_log_coefficient = 0.0;       // real residue of the height form
    double max_plaquette_residual = 0.0;   // worst cell closure of the edge integrals
    double mesh_scale = 0.0;               // max vertex distance from the basepoint image

    const std::array<double, 3>& at(int i, int j) const {
        return points[grid.index(i, j)];
    }
};

/// Integrate the representation over the grid.  The basepoint must lie on the
/// positive real axis within the working annulus and maps to the origin.
/// Throws DegenerateMetric naming the first grid vertex (in index order) where
/// the conformal factor (|g| + 1/|g|) |h| / 2 falls below 1e-12.
MinimalImmersion immerse(const WeierstrassData& data, const PolarGrid& g,
                         cplx basepoint, ExecMode mode = ExecMode::Parallel);
MinimalImmersion immerse(const WeierstrassData& data, const PolarGrid& g);

/// Winding of g around the circle |z| = r from summed principal-branch phase
/// increments.  Throws WindingUnresolved on a zero or nonfinite sample, or
/// when the total increment lands more than 0.01 turns from an integer.
int gauss_winding_of(const std::function<cplx(cplx)>& g, double r,
                     int n_samples = 4096);

/// Recover H from samples of g on the given circles (at least two), assuming
/// g = z^n e^H.  Each circle's phase is unwrapped from its theta = 0 anchor;
/// anchors are folded onto a common branch working inward from the largest
/// radius.  Throws BranchError when a circle's winding disagrees with n, when
/// the branches cannot be reconciled between circles, or when a middle circle
/// disagrees with the recovery from the extreme ones; NonMeromorphicSuspected
/// when the coefficient window cannot reproduce the samples; and
/// NumericalNonconvergence when the rebuilt map misses g by more than 1e-8
/// (relative) on a probe circle.
LaurentSeries extract_H(const std::function<cplx(cplx)>& g, int n,
                        const std::vector<double>& radii, int n_samples = 2048,
                        const RecoveryOptions& opts = {});

/// True when every negative-index coefficient of H is below tau times the
/// largest coefficient magnitude: e^H then stays bounded near the puncture.
bool classify_H_bounded(const LaurentSeries& H, double tau = 1e-8);

// Spherical area swept by the Gauss map, integrated outermost annulus first.
// partial[j] covers [radii[j], r_prime], so it is nondecreasing by
// construction; the verdict applies the same geometric-tail test as the arc
// integrals (per-annulus increments must decay below ratio 0.9).
struct CurvatureReport {
    enum class Verdict { Finite, InfiniteSuspected };
    Verdict verdict = Verdict::Finite;
    std::vector<double> partial;
    double value = 0.0;                   // partial integral down to the schedule bottom
    double spherical_multiplicity = 0.0;  // value / 4 pi
    double total_curvature = 0.0;         // -value
};

/// Integrate 4 |g'|^2 / (1 + |g|^2)^2 over the bands of the schedule (plus
/// the band from the schedule top up to r_prime).  Angular resolution doubles
/// until the band integral settles to 1e-7 relative; past 65536 nodes the
/// refinement gives up with NumericalNonconvergence.
CurvatureReport total_curvature(const WeierstrassData& data, double r_prime,
                                const RadiusSchedule& schedule);

struct SliceReport {
    LevelSetComplex curves;
    EndCount ends;
};

/// Intersect the surface with a plane: trace { X . normal = offset } in the
/// parameter annulus and count its ends.  The normal component of the
/// position must be single-valued, so a real period of the corresponding
/// one-form raises SlicePeriodError before any tracing.
SliceReport plane_slice(const WeierstrassData& data, const Plane& plane,
                        const PolarGrid& g, const TraceOptions& opts = {});

/// Third coordinate as a harmonic field on the chart, zero at (r_prime, 0):
/// c log r + Re F with c the (real) residue of the height form and F its
/// residue-free antiderivative.  Valid on the whole punctured disk up to
/// r_prime, so shrinking-radius studies can reuse one field.
HarmonicField height_field(const WeierstrassData& data);

/// Height-gradient arc length along an open slice arc, bucketed by a radius
/// schedule reaching past the arc's own depth (bottom a third of the arc
/// minimum, so a tangency annulus never sits in the deepest bucket).
ArcIntegralReport vertical_flux(const WeierstrassData& data, const LevelArc& arc);

/// Sign changes of X . normal - offset around the circle |z| = r, built from
/// a cumulative loop integral anchored by a radial integral from the
/// basepoint.  Throws SlicePeriodError when the loop fails to close.
int slice_crossings(const WeierstrassData& data, const Plane& plane, double r,
                    int n_samples = 4096);

struct EquivalenceLeg {
    bool ok = false;      // the computation itself completed
    bool finite = false;  // this criterion's verdict
    double value = 0.0;
    std::string note;
};

// The three finiteness criteria, which must agree: total curvature settles,
// H stays bounded, and plane-slice end counts are stable under halving the
// probe radius (for both planes).
struct EquivalenceReport {
    EquivalenceLeg curvature, h_bounded, slices;
    bool pass = false;
};

/// Run all three criteria and compare their verdicts.  A leg that throws is
/// recorded (ok = false, note = message) and fails the comparison; pass means
/// every leg completed and all verdicts agree.
EquivalenceReport check_corollary_equivalence(const WeierstrassData& data,
                                              const Plane& plane1, const Plane& plane2,
                                              const PolarGrid& g);

}  // namespace annlab
