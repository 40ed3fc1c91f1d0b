#include "ctsf/selfcheck.hpp"

#include <cmath>
#include <cstdio>

#include "ctsf/model.hpp"
#include "ctsf/multiplexing.hpp"
#include "ctsf/optimizer.hpp"
#include "ctsf/rng.hpp"

namespace ctsf {

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

BandPlan interleaved_plan(int K, double alpha) {
    BandPlan plan;
    plan.num_bands = K;
    plan.alpha = alpha;
    for (int i = 0; i < K; ++i) (i % 2 == 0 ? plan.true_bands : plan.fake_bands).push_back(i);
    return plan;
}

// Objective recomputed from scratch: explicit per-band SINRs with unit noise.
double direct_objective(const std::vector<double>& xi, const ChannelSet& ch,
                        const BandPlan& plan) {
    double total = 0.0;
    for (int k : plan.true_bands) {
        double bob_den = 1.0, eve_den = 1.0;
        for (int i = 0; i < plan.num_bands; ++i) {
            if (i == k) continue;
            if (plan.is_true(i)) bob_den += xi[i] * ch.bob_gain[i];
            eve_den += xi[i] * ch.eve_gain[i];
        }
        const double gb = xi[k] * ch.bob_gain[k] / bob_den;
        const double ge = xi[k] * ch.eve_gain[k] / eve_den;
        total += std::log2(1.0 + gb) - std::log2(1.0 + ge);
    }
    return total;
}

CheckResult check_substitution_identity() {
    CheckResult res{"substitution identity", true, ""};
    double worst = 0.0;
    for (int K : {2, 4, 8}) {
        const BandPlan plan = interleaved_plan(K, 0.8);
        for (int rep = 0; rep < 50; ++rep) {
            Rng rng = Rng::keyed(11, static_cast<std::uint64_t>(K * 1000 + rep));
            std::vector<double> bob(K), eve(K), xi(K);
            for (int i = 0; i < K; ++i) bob[i] = 0.1 + 3.0 * rng.next_unit();
            for (int i = 0; i < K; ++i) eve[i] = 0.1 + 3.0 * rng.next_unit();
            for (int i = 0; i < K; ++i) xi[i] = 2.0 * rng.next_unit();
            const ChannelSet ch = make_channels(bob, eve);
            worst = std::max(worst,
                             std::abs(secrecy_objective(xi, ch, plan) -
                                      direct_objective(xi, ch, plan)));
        }
    }
    res.pass = worst <= 1e-9;
    res.detail = "max deviation " + num(worst);
    return res;
}

CheckResult check_alpha_round_trip() {
    CheckResult res{"alpha fit round trip", true, ""};
    double worst = 0.0;
    for (int K : {2, 4, 8}) {
        for (int rep = 0; rep < 10; ++rep) {
            Rng rng = Rng::keyed(12, static_cast<std::uint64_t>(K * 1000 + rep));
            const double alpha = 0.15 + 0.8 * rng.next_unit();
            std::vector<double> targets(K);
            for (int i = 0; i < K; ++i) targets[i] = correlation(alpha, i, 0, K);
            const double start = std::min(1.0, std::max(0.05, alpha + 0.15 * (rng.next_unit() - 0.5)));
            const AlphaFitResult fit = fit_alpha(targets, K, 0, start);
            worst = std::max(worst, std::abs(fit.alpha_star - alpha));
        }
    }
    res.pass = worst <= 1e-6;
    res.detail = "max |alpha error| " + num(worst);
    return res;
}

CheckResult check_grid_equivalence() {
    CheckResult res{"two-band grid-search equivalence", true, ""};
    BandPlan plan;
    plan.num_bands = 2;
    plan.true_bands = {0};
    plan.fake_bands = {1};
    plan.alpha = 0.8;
    const ChannelSet ch = make_channels({2.1, 0.7}, {0.5, 1.3});
    const double budget = 4.0, threshold = 0.4;

    double best = -1e300;
    const int steps = 700;
    for (int a = 0; a <= steps; ++a) {
        const double x0 = budget * a / steps;
        for (int b = 0; b <= steps; ++b) {
            const double x1 = budget * b / steps;
            if (x0 + x1 > budget) break;
            if (x1 < x0) continue;
            if (x1 * ch.eve_gain[1] < threshold * (x0 * ch.eve_gain[0] + 1.0)) continue;
            std::vector<double> xi{x0, x1};
            best = std::max(best, secrecy_objective(xi, ch, plan));
        }
    }
    const OptResult opt = bado_multistart(ch, plan, threshold, budget);
    const double rel = (best - opt.objective) / std::max(1e-12, std::abs(best));
    res.pass = rel <= 0.02;
    res.detail = "grid " + num(best) + " vs optimizer " + num(opt.objective);
    return res;
}

}  // namespace

std::vector<CheckResult> run_selfchecks() {
    return {check_substitution_identity(), check_alpha_round_trip(), check_grid_equivalence()};
}

}  // namespace ctsf
