#include "ctsf/multiplexing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ctsf {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kAlphaMin = 1e-6;

double sinc(double x) {
    const double px = kPi * x;
    if (std::abs(px) < 1e-8) return 1.0 - px * px / 6.0;
    return std::sin(px) / px;
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0 || !std::isfinite(alpha))
        throw std::domain_error("alpha must lie in (0, 1]");
}

// Model coefficient at offset d = i - k_ref. Shared by correlation() and the
// fit objective so both always agree.
double model_coeff(double alpha, int d, int K) {
    if (d == 0) return 1.0;
    const double r = sinc(alpha * d) / sinc(alpha * d / K);
    return r * r;
}

}  // namespace

double correlation(double alpha, int i, int k, int K) {
    check_alpha(alpha);
    if (K < 1 || i < 0 || i >= K || k < 0 || k >= K)
        throw std::invalid_argument("band index outside [0, K)");
    return model_coeff(alpha, i - k, K);
}

CorrelationMatrix correlation_matrix(double alpha, int K) {
    check_alpha(alpha);
    if (K < 1) throw std::invalid_argument("K must be at least 1");
    CorrelationMatrix cm;
    cm.K = K;
    cm.m.resize(static_cast<std::size_t>(K) * K);
    for (int i = 0; i < K; ++i)
        for (int k = 0; k <= i; ++k) {
            const double c = model_coeff(alpha, i - k, K);
            cm.m[static_cast<std::size_t>(i) * K + k] = c;
            cm.m[static_cast<std::size_t>(k) * K + i] = c;
        }
    return cm;
}

CorrelationMatrix CorrelationMatrix::identity(int K) {
    CorrelationMatrix cm;
    cm.K = K;
    cm.m.assign(static_cast<std::size_t>(K) * K, 0.0);
    for (int i = 0; i < K; ++i) cm.m[static_cast<std::size_t>(i) * K + i] = 1.0;
    return cm;
}

CorrelationMatrix CorrelationMatrix::from_interferer_coeffs(const std::vector<double>& coeffs) {
    const int K = static_cast<int>(coeffs.size());
    CorrelationMatrix cm;
    cm.K = K;
    cm.m.resize(static_cast<std::size_t>(K) * K);
    for (int i = 0; i < K; ++i)
        for (int k = 0; k < K; ++k)
            cm.m[static_cast<std::size_t>(i) * K + k] = (i == k) ? 1.0 : coeffs[i];
    return cm;
}

namespace {

double weighted_objective(double alpha, const std::vector<double>& targets,
                          const std::vector<double>& weights, int K, int k_ref) {
    double s = 0.0;
    for (int i = 0; i < K; ++i) {
        if (weights[i] == 0.0) continue;
        const double r = targets[i] - model_coeff(alpha, i - k_ref, K);
        s += weights[i] * r * r;
    }
    return s;
}

}  // namespace

double fit_objective(double alpha, const std::vector<double>& targets, int K, int k_ref) {
    check_alpha(alpha);
    if (static_cast<int>(targets.size()) != K)
        throw std::invalid_argument("targets must have K entries");
    if (k_ref < 0 || k_ref >= K) throw std::invalid_argument("k_ref outside [0, K)");
    return weighted_objective(alpha, targets, std::vector<double>(K, 1.0), K, k_ref);
}

AlphaFitResult fit_alpha_weighted(const std::vector<double>& targets,
                                  const std::vector<double>& weights, int K, int k_ref,
                                  double alpha0, double eps1, double eps2, int max_iter) {
    check_alpha(alpha0);
    if (static_cast<int>(targets.size()) != K || static_cast<int>(weights.size()) != K)
        throw std::invalid_argument("targets and weights must have K entries");
    if (k_ref < 0 || k_ref >= K) throw std::invalid_argument("k_ref outside [0, K)");

    auto f = [&](double a) { return weighted_objective(a, targets, weights, K, k_ref); };
    auto clamp = [](double a) { return std::min(1.0, std::max(kAlphaMin, a)); };

    AlphaFitResult res;
    double a = clamp(alpha0);
    double fa = f(a);

    // The residual ripples with the sinc zeros, so a Newton run started up to
    // 0.2 away from the best fit can settle on a side lobe. A coarse scan
    // around alpha0 brackets the right basin first; alpha0 itself stays in
    // the candidate set, so the result never regresses past the caller's
    // starting point.
    for (int j = -100; j <= 100; ++j) {
        const double cand = alpha0 + 2.5e-3 * j;
        if (cand < kAlphaMin || cand > 1.0) continue;
        const double fc = f(cand);
        if (fc < fa) {
            a = cand;
            fa = fc;
        }
    }

    double best_a = a, best_f = fa;
    bool safeguard_exhausted = false;

    int t = 0;
    for (; t < max_iter; ++t) {
        // Central differences; the probes may step just outside (0,1], where
        // the model is still well defined numerically.
        const double h = 1e-5 * std::max(1.0, std::abs(a));
        const double fph = f(a + h);
        const double fmh = f(a - h);
        const double g = (fph - fmh) / (2.0 * h);
        const double H = (fph - 2.0 * fa + fmh) / (h * h);

        if (std::abs(g) < eps1) {
            res.converged = true;
            break;
        }

        // Newton step when the local curvature is usable, damped gradient
        // descent otherwise.
        double step;
        if (H > 1e-12)
            step = -g / H;
        else
            step = (g > 0.0 ? -0.1 : 0.1);

        double cand = clamp(a + step);
        double fc = f(cand);
        int halvings = 0;
        while (fc > fa && halvings < 40) {
            cand = a + 0.5 * (cand - a);
            fc = f(cand);
            ++halvings;
        }
        if (fc > fa) {
            safeguard_exhausted = true;
            ++t;
            break;
        }
        const double moved = std::abs(cand - a);
        a = cand;
        fa = fc;
        if (fa < best_f) {
            best_f = fa;
            best_a = a;
        }
        if (moved < eps2) {
            res.converged = true;
            ++t;
            break;
        }
    }
    if (t >= max_iter || safeguard_exhausted) res.converged = false;

    res.alpha_star = best_a;
    res.residual = best_f;
    res.iterations = t;
    return res;
}

AlphaFitResult fit_alpha(const std::vector<double>& targets, int K, int k_ref, double alpha0,
                         double eps1, double eps2, int max_iter) {
    return fit_alpha_weighted(targets, std::vector<double>(K, 1.0), K, k_ref, alpha0, eps1,
                              eps2, max_iter);
}

}  // namespace ctsf
