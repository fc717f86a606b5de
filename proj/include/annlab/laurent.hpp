#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <vector>

#include "annlab/geometry.hpp"

namespace annlab {

// Finite window of a Laurent series  sum_m a_m z^m  together with the annulus
// r_lo < |z| < r_hi on which it is trusted.  Immutable after construction;
// copies are cheap enough to share across threads by value.
class LaurentSeries {
public:
    LaurentSeries() = default;

    // terms: list of (index, coefficient).  Duplicate indices accumulate.
    LaurentSeries(const std::vector<std::pair<int, cplx>>& terms,
                  double r_lo = 0.0,
                  double r_hi = std::numeric_limits<double>::infinity());

    static LaurentSeries single(int m, cplx a,
                                double r_lo = 0.0,
                                double r_hi = std::numeric_limits<double>::infinity());

    bool empty() const { return coeffs_.empty(); }
    // Support bounds (trimmed to nonzero coefficients); m_min() > m_max() when empty.
    int m_min() const { return m0_; }
    int m_max() const { return m0_ + int(coeffs_.size()) - 1; }

    cplx coeff(int m) const {
        if (m < m0_ || m > m_max()) return {0.0, 0.0};
        return coeffs_[std::size_t(m - m0_)];
    }

    double r_lo() const { return r_lo_; }
    double r_hi() const { return r_hi_; }
    LaurentSeries with_validity(double r_lo, double r_hi) const;

    double max_abs_coeff() const;

    /// Evaluate by Horner's rule (separately on the polynomial and principal
    /// parts).  Throws DomainError when |z| falls outside the validity annulus.
    cplx evaluate(cplx z) const;

    // Term-by-term d/dz.
    LaurentSeries derivative() const;

    // Term-by-term antiderivative.  The z^-1 coefficient has no single-valued
    // primitive; it must be zero unless drop_residue is set, in which case it
    // is silently skipped (callers account for the log term themselves).
    LaurentSeries antiderivative(bool drop_residue = false) const;

    std::vector<std::pair<int, cplx>> terms() const;

private:
    int m0_ = 0;
    std::vector<cplx> coeffs_;
    double r_lo_ = 0.0;
    double r_hi_ = std::numeric_limits<double>::infinity();

    void trim();
};

/// Sample a complex-valued function on n equally spaced points of the circle
/// |z| = r.  n must be a power of two.
CircleSamples circle_sample(const std::function<cplx(cplx)>& field, double r, int n);

/// Fourier coefficients c_m = (1/n) sum_j values[j] e^{-i m theta_j} for
/// m in [m_lo, m_hi].  Requires |m| < n/2 (anti-aliasing) and power-of-two n.
std::vector<cplx> fourier_coefficients(const CircleSamples& samples, int m_lo, int m_hi);

struct RecoveryOptions {
    int m_lo = -32;
    int m_hi = 32;
    double agreement_tol = 1e-6;       // two-radius mismatch above this is fatal
    double reconstruction_tol = 1e-6;  // relative residual of the fitted window
    double zero_threshold_rel = 1e-8;  // coefficients below this * scale are dropped
};

struct RecoveryDiagnostics {
    double agreement_score = 0.0;
    double reconstruction_residual = 0.0;
    double scale = 0.0;  // max estimated |a_m|, floored at 1 for thresholding
};

/// Recover Laurent coefficients of `field` from two sampled circles
/// r1 < r2.  Estimates a_m = c_m r^-m at both radii; coefficients indistinguishable
/// from sampling noise at both radii are zeroed.  Throws NonMeromorphicSuspected
/// when the surviving estimates disagree between radii, or when the fitted
/// window fails to reproduce the samples (essential singularity, or window /
/// sample count too small for the field).  The returned series carries the r1
/// estimates and validity (r1, r2).
LaurentSeries laurent_from_circles(const std::function<cplx(cplx)>& field,
                                   double r1, double r2, int n,
                                   const RecoveryOptions& opts = {},
                                   RecoveryDiagnostics* diag = nullptr);

/// Same recovery, from already-sampled circles (samples1.radius < samples2.radius).
LaurentSeries laurent_from_sample_sets(const CircleSamples& samples1,
                                       const CircleSamples& samples2,
                                       const RecoveryOptions& opts = {},
                                       RecoveryDiagnostics* diag = nullptr);

}  // namespace annlab
