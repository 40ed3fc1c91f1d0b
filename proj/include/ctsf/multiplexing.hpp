// Non-orthogonal multiplexing model: inter-band correlation coefficients as a
// function of the multiplexing factor alpha, and the safeguarded Newton fit
// that recovers alpha from a vector of per-band correlation targets.

#pragma once

#include <vector>

namespace ctsf {

// Correlation coefficient between bands i and k at multiplexing factor alpha:
//   c(i,k) = (sinc(alpha*(i-k)) / sinc(alpha*(i-k)/K))^2
// with sinc(x) = sin(pi*x)/(pi*x), sinc(0) = 1. Symmetric in (i,k), equal to
// one on the diagonal, and in [0,1] for alpha in (0,1]. alpha = 1 gives zero
// off-diagonal correlation (orthogonal carriers).
// Throws std::domain_error for alpha outside (0,1] and std::invalid_argument
// for band indices outside [0,K).
double correlation(double alpha, int i, int k, int K);

// Dense K x K correlation structure consumed by the SINR evaluators. Not
// necessarily generated from an alpha: recovered allocations use a
// column-constant matrix whose entry (i,k) is the interferer coefficient c_i.
struct CorrelationMatrix {
    int K = 0;
    std::vector<double> m;  // row-major, m[i*K + k] = c(i,k)

    double at(int i, int k) const { return m[static_cast<std::size_t>(i) * K + k]; }

    static CorrelationMatrix identity(int K);
    // Entry (i,k) = coeffs[i] off the diagonal, 1 on it.
    static CorrelationMatrix from_interferer_coeffs(const std::vector<double>& coeffs);
};

CorrelationMatrix correlation_matrix(double alpha, int K);

// Sum of squared residuals between targets and the model coefficients
// relative to reference band k_ref, at the given alpha.
double fit_objective(double alpha, const std::vector<double>& targets, int K, int k_ref);

struct AlphaFitResult {
    double alpha_star = 1.0;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Newton iteration on the fit objective with finite-difference derivatives
// (central, h = 1e-5*max(1,|alpha|)). A coarse scan around alpha0 (radius
// 0.25, step 2.5e-3) picks the basin first, which makes the fit reliable
// whenever alpha0 lies within 0.2 of the best-fit value. Degenerate
// curvature falls back to a damped gradient step; iterates are clamped to
// (0,1] and steps halved until the residual does not increase. Stops on
// |f'| < eps1, step < eps2 or max_iter; the last two leave converged=false
// only if max_iter was hit or the halving safeguard was exhausted. The
// reported alpha_star is the best iterate seen, so its residual never
// exceeds the residual at alpha0.
AlphaFitResult fit_alpha(const std::vector<double>& targets, int K, int k_ref,
                         double alpha0 = 0.5, double eps1 = 1e-8, double eps2 = 1e-10,
                         int max_iter = 100);

// As above, with per-band nonnegative weights; weight 0 excludes a band from
// the residual. Used by the power recovery where some bands carry no power.
AlphaFitResult fit_alpha_weighted(const std::vector<double>& targets,
                                  const std::vector<double>& weights, int K, int k_ref,
                                  double alpha0 = 0.5, double eps1 = 1e-8,
                                  double eps2 = 1e-10, int max_iter = 100);

}  // namespace ctsf
