#pragma once

#include <string>
#include <vector>

#include "annlab/harmonic.hpp"
#include "annlab/levelset.hpp"

namespace annlab {

// Pole of the one-form w dz at z = 0, read off the coefficient window:
// w ~ a_m z^m with leading index m_min gives order max(0, -m_min).
// p = 0 means the form is holomorphic across the puncture.
struct PoleReport {
    int pole_order = 0;
    std::vector<std::pair<int, cplx>> principal_coefficients;  // m < 0 terms
    double agreement_score = 0.0;  // two-circle recovery score; 0 when exact
    // 2(p - 1) for p >= 2; a first-order pole or less predicts no ends
    int predicted_end_count = 0;
};

PoleReport pole_order_of(const OneForm& form, double tau = 1e-8,
                         double agreement_score = 0.0);

struct EndPoleCheck {
    bool pass = true;
    // p >= 2 fields are judged against 2(p - 1); so is p = 1 when the field
    // is a log term plus a function holomorphic across the puncture (level
    // sets near 0 are loops, so zero ends).  A holomorphic one-form with
    // nonconstant bounded field can still have ends; those runs only record.
    bool judged = true;
    int pole_order = 0;
    int predicted = 0;
    std::vector<double> levels;  // possibly nudged off critical values
    std::vector<int> counts;
    std::vector<std::string> notes;
};

/// Trace each level, count ends, and compare with the pole-order prediction.
/// A CriticalLevel warning nudges that level upward and retries.
EndPoleCheck check_end_pole_relation(const HarmonicField& f,
                                     const std::vector<double>& t_values,
                                     const PolarGrid& g,
                                     const TraceOptions& topts = {});

enum class BoundednessKind { Bounded, UnboundedPole, EssentialSuspected };

struct BoundednessVerdict {
    BoundednessKind kind = BoundednessKind::Bounded;
    int pole_order = 0;  // UnboundedPole only
    double score = 0.0;  // EssentialSuspected: the failing recovery score
};

/// f bounded near the puncture <=> its one-form extends holomorphically.
/// Sampled fields run through two-circle recovery; a recovery that cannot
/// reconcile its circles is reported as EssentialSuspected, a heuristic
/// verdict rather than an error (finite data cannot certify an essential
/// singularity).
BoundednessVerdict classify_boundedness(const HarmonicField& f, OmegaOptions opts = {});

struct ArcIntegralReport {
    bool finite = false;
    double value = 0.0;               // quadrature down to the schedule bottom
    std::vector<double> per_annulus;  // contribution per schedule annulus, outermost first
    std::vector<double> tail_ratios;  // consecutive ratios over the last annuli
};

/// Integrate |grad f| arc length along an end representative, bucketed by
/// schedule annulus.  Finite iff the per-annulus contributions decay
/// geometrically (every tail ratio < 0.9 over the last 6 annuli); growth or
/// a flat tail reads as divergence.
ArcIntegralReport arc_df_integral(const HarmonicField& f, const LevelArc& arc,
                                  const RadiusSchedule& schedule);

}  // namespace annlab
