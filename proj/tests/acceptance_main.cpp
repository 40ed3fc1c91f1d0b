// Release gate: one numbered check per core guarantee, each printing a
// single PASS/FAIL line with its measured margin. Run with no arguments for
// the full battery or pass check numbers to run a subset. Exit code 0 only
// if every selected check passes.
//
// Oracles here are deliberately independent of the library internals:
// exhaustive grid searches in the original variables, raw-loop rate
// formulas, dense residual scans and finite differences.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "ctsf/model.hpp"
#include "ctsf/multiplexing.hpp"
#include "ctsf/optimizer.hpp"
#include "ctsf/rng.hpp"
#include "ctsf/simulation.hpp"
#include "ctsf/sinr.hpp"

using namespace ctsf;

namespace {

// ---------------------------------------------------------------- helpers

ChannelSet rician_channels(int K, std::uint64_t seed, std::uint64_t stream) {
    RicianParams par;
    par.k_factor = db_to_linear(10.0);
    par.mean_gain = 1.0;
    Rng rng = Rng::keyed(seed, stream);
    ChannelSet ch;
    ch.bob_gain = draw_channels(par, K, rng);
    ch.eve_gain = draw_channels(par, K, rng);
    ch.bob_noise.assign(K, 1.0);
    ch.eve_noise.assign(K, 1.0);
    return ch;
}

// Sum secrecy rate written out directly from the per-band log ratios.
double direct_rate(const std::vector<double>& xi, const ChannelSet& ch, const BandPlan& plan) {
    double R = 0.0;
    for (int k : plan.true_bands) {
        double Sb = 0.0, Se = 0.0;
        for (int i : plan.true_bands)
            if (i != k) Sb += xi[i] * ch.bob_gain[i];
        for (int i = 0; i < plan.num_bands; ++i)
            if (i != k) Se += xi[i] * ch.eve_gain[i];
        R += std::log2(1.0 + xi[k] * ch.bob_gain[k] / (Sb + 1.0)) -
             std::log2(1.0 + xi[k] * ch.eve_gain[k] / (Se + 1.0));
    }
    return R;
}

// The same rate assembled through the aggregate substitutions at their caps.
double substituted_rate(const std::vector<double>& xi, const ChannelSet& ch,
                        const BandPlan& plan) {
    double eve_all = 0.0;
    for (int i = 0; i < plan.num_bands; ++i) eve_all += xi[i] * ch.eve_gain[i];
    const double tau = 1.0 / (eve_all + 1.0);
    double bob_all = 0.0;
    for (int k : plan.true_bands) bob_all += xi[k] * ch.bob_gain[k];

    double R = static_cast<double>(plan.true_bands.size()) * std::log2(tau * (bob_all + 1.0));
    for (int k : plan.true_bands) {
        double bob_rest = 0.0;
        for (int i : plan.true_bands)
            if (i != k) bob_rest += xi[i] * ch.bob_gain[i];
        const double mu_k = 1.0 / (bob_rest + 1.0);
        double eve_rest = 0.0;
        for (int i = 0; i < plan.num_bands; ++i)
            if (i != k) eve_rest += xi[i] * ch.eve_gain[i];
        R += std::log2(mu_k * (eve_rest + 1.0));
    }
    return R;
}

Scenario demo_scenario() {
    Scenario sc;
    sc.plan.num_bands = 4;
    sc.plan.true_bands = {0, 2};
    sc.plan.fake_bands = {1, 3};
    sc.plan.alpha = 0.8;
    sc.set_total_power_db(10.0);
    sc.threshold = 0.5;
    sc.set_rician_k_db(10.0, 10.0);
    sc.trials = 100;
    sc.seed = 42;
    return sc;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

// -------------------------------------------------------------- check 1

// Optimizer vs exhaustive grid search in the original effective powers.
// For three bands the innermost coordinate is resolved analytically: the
// rate is strictly increasing in the decoy's effective power, so only the
// largest on-grid value can be the row maximum.
bool check_grid_optimality(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 1e300;
    for (int inst = 0; inst < 30; ++inst) {
        const int K = inst < 15 ? 2 : 3;
        BandPlan plan;
        plan.alpha = 0.8;
        plan.num_bands = K;
        if (K == 2) {
            plan.true_bands = {0};
            plan.fake_bands = {1};
        } else {
            plan.true_bands = {0, 1};
            plan.fake_bands = {2};
        }
        const ChannelSet ch = rician_channels(K, 101, inst);
        Rng prng = Rng::keyed(102, inst);
        const double Th = 0.1 + 0.5 * prng.next_unit();
        const double Ps = db_to_linear(6.0 + 6.0 * prng.next_unit());
        const double h = 1e-3 * Ps;
        const int N = 1000;

        double best = -1e300;
        if (K == 2) {
            const double e0 = ch.eve_gain[0], e1 = ch.eve_gain[1];
            for (int i = 0; i <= N; ++i) {
                const double x0 = i * h;
                for (int j = 0; j <= N; ++j) {
                    const double x1 = j * h;
                    if (x0 + x1 > Ps + 1e-12) break;
                    if (x1 < x0) continue;
                    if (x1 * e1 < Th * (x0 * e0 + 1.0)) continue;
                    best = std::max(best, direct_rate({x0, x1}, ch, plan));
                }
            }
        } else {
            const double e0 = ch.eve_gain[0], e1 = ch.eve_gain[1], e2 = ch.eve_gain[2];
            for (int i = 0; i <= N; ++i) {
                const double x0 = i * h;
                for (int j = 0; j <= N; ++j) {
                    const double x1 = j * h;
                    if (x0 + x1 > Ps + 1e-12) break;
                    const double x2 = h * std::floor((Ps - x0 - x1) / h + 1e-9);
                    if (x2 < x0 || x2 < x1) continue;
                    if (x2 * e2 < Th * (x0 * e0 + x1 * e1 + 1.0)) continue;
                    best = std::max(best, direct_rate({x0, x1, x2}, ch, plan));
                }
            }
        }
        if (best <= -1e300) continue;  // empty feasible grid: nothing to compare

        double opt = -1e300;
        try {
            opt = bado_multistart(ch, plan, Th, Ps).objective;
        } catch (const Infeasible&) {
        }
        const double margin = (opt - best) / std::max(1e-9, std::abs(best));
        worst = std::min(worst, margin);
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    detail = fmt("worst margin %+.3f%%, %.1f s", 100.0 * worst, secs);
    return worst >= -0.02 && secs < 300.0;
}

// -------------------------------------------------------------- check 2

// The aggregate-substitution form of the rate must agree with the direct
// per-band log formula on random nonnegative allocations.
bool check_substitution_identity(std::string& detail) {
    double dev = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        Rng rng = Rng::keyed(202, rep);
        const int K = std::vector<int>{2, 4, 8}[rep % 3];
        BandPlan plan;
        plan.num_bands = K;
        plan.alpha = 0.8;
        for (int i = 0; i < K / 2; ++i) plan.true_bands.push_back(i);
        for (int i = K / 2; i < K; ++i) plan.fake_bands.push_back(i);

        std::vector<double> g(K), e(K), xi(K);
        for (int i = 0; i < K; ++i) {
            g[i] = 0.1 + 3.0 * rng.next_unit();
            e[i] = 0.1 + 3.0 * rng.next_unit();
            xi[i] = 5.0 * rng.next_unit();
        }
        const ChannelSet ch = make_channels(g, e);
        dev = std::max(dev, std::abs(substituted_rate(xi, ch, plan) - direct_rate(xi, ch, plan)));
        dev = std::max(dev, std::abs(secrecy_objective(xi, ch, plan) - direct_rate(xi, ch, plan)));
    }
    detail = fmt("max deviation %.3g", dev);
    return dev <= 1e-9;
}

// -------------------------------------------------------------- check 3

// Every alternation trace must ascend (within solver tolerance) and end at
// a point feasible in all original constraints. An instance reported
// infeasible is accepted only when a closed form certifies it: with two
// decoy bands the floors intersect at effective power w = Th/(1-Th) per
// band, true powers only raise the floors, so w*(1/e_1 + 1/e_3) is the
// least budget any feasible point can spend.
bool check_ascent_and_feasibility(std::string& detail) {
    int done = 0, certified = 0;
    double worst_dip = 0.0, worst_viol = -1e300;
    BandPlan plan;
    plan.num_bands = 4;
    plan.true_bands = {0, 2};
    plan.fake_bands = {1, 3};
    plan.alpha = 0.8;
    const double budget = 10.0;
    for (int inst = 0; inst < 100; ++inst) {
        const ChannelSet ch = rician_channels(4, 303, inst);
        Rng prng = Rng::keyed(304, inst);
        const double Th = 0.1 + 0.5 * prng.next_unit();
        try {
            const OptResult r = bado_multistart(ch, plan, Th, budget);
            ++done;
            for (std::size_t t = 1; t < r.trace.size(); ++t)
                worst_dip = std::max(worst_dip, r.trace[t - 1] - r.trace[t]);
            const auto [viol, name] = max_constraint_violation(r.xi_star, ch, plan, Th, budget);
            worst_viol = std::max(worst_viol, viol);
        } catch (const Infeasible&) {
            const double w = Th / (1.0 - Th);
            const double least_budget = w * (1.0 / ch.eve_gain[1] + 1.0 / ch.eve_gain[3]);
            if (least_budget > budget * (1.0 - 1e-9)) ++certified;
        }
    }
    detail = fmt("worst dip %.2g, worst violation %.2g", worst_dip, worst_viol) + ", solved " +
             std::to_string(done) + "/100, certified infeasible " + std::to_string(certified);
    return done + certified == 100 && worst_dip <= 1e-7 && worst_viol <= 1e-7;
}

// -------------------------------------------------------------- check 4

// Fitting the multiplexing factor recovers the generator from clean
// targets, and lands near the dense-scan minimizer on noisy ones.
bool check_alpha_round_trip(std::string& detail) {
    double worst_clean = 0.0, worst_noisy = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        Rng rng = Rng::keyed(404, rep);
        const int K = std::vector<int>{2, 4, 8}[rep % 3];
        const double alpha = 0.1 + 0.9 * rng.next_unit();
        double a0 = alpha + 0.4 * (rng.next_unit() - 0.5);
        a0 = std::min(1.0, std::max(0.05, a0));

        std::vector<double> targets(K);
        for (int i = 0; i < K; ++i) targets[i] = correlation(alpha, i, 0, K);

        const AlphaFitResult clean = fit_alpha(targets, K, 0, a0);
        worst_clean = std::max(worst_clean, std::abs(clean.alpha_star - alpha));

        std::vector<double> noisy = targets;
        for (auto& v : noisy) v += 0.005 * rng.next_normal();
        const AlphaFitResult nf = fit_alpha(noisy, K, 0, a0);
        double best_a = 1.0, best_f = fit_objective(1.0, noisy, K, 0);
        for (double a = 1e-4; a < 1.0; a += 1e-4) {
            const double f = fit_objective(a, noisy, K, 0);
            if (f < best_f) {
                best_f = f;
                best_a = a;
            }
        }
        worst_noisy = std::max(worst_noisy, std::abs(nf.alpha_star - best_a));
    }
    detail = fmt("clean error %.2g, noisy offset %.3g", worst_clean, worst_noisy);
    return worst_clean <= 1e-6 && worst_noisy <= 0.05;
}

// -------------------------------------------------------------- check 5

// Per-band secrecy rate as a function of own power: positive slope with
// diminishing returns wherever the legitimate gain-to-interference ratio
// exceeds the interceptor's.
bool check_rate_shape(std::string& detail) {
    BandPlan plan;
    plan.num_bands = 4;
    plan.true_bands = {0, 2};
    plan.fake_bands = {1, 3};
    plan.alpha = 0.8;
    const CorrelationMatrix C = correlation_matrix(plan.alpha, 4);

    int accepted = 0, bad = 0;
    std::uint64_t stream = 0;
    while (accepted < 50 && stream < 5000) {
        Rng rng = Rng::keyed(505, stream++);
        std::vector<double> g(4), e(4), pw(4);
        for (int i = 0; i < 4; ++i) {
            g[i] = 0.2 + 3.0 * rng.next_unit();
            e[i] = 0.2 + 3.0 * rng.next_unit();
            pw[i] = 0.5 + 2.0 * rng.next_unit();
        }
        const ChannelSet ch = make_channels(g, e);
        const int k = plan.true_bands[accepted % 2];

        double Ck = 1.0, Cke = 1.0;
        for (int i : plan.true_bands)
            if (i != k) Ck += C.at(i, k) * pw[i] * g[i];
        for (int i = 0; i < 4; ++i)
            if (i != k) Cke += C.at(i, k) * pw[i] * e[i];
        if (g[k] / Ck <= e[k] / Cke * (1.0 + 1e-3)) continue;
        ++accepted;

        auto rate_at = [&](double x) {
            PowerAllocation q;
            q.p = pw;
            q.p[k] = x;
            return std::log2(1.0 + bob_sinr(k, q, ch, C, plan)) -
                   std::log2(1.0 + eve_intercept_sinr(k, q, ch, C, plan));
        };
        double prev_slope = 1e300;
        for (int j = 0; j < 20; ++j) {
            const double x = 0.25 + 0.5 * j;
            const double h = 1e-4 * x;
            const double slope = (rate_at(x + h) - rate_at(x - h)) / (2.0 * h);
            if (!(slope > 0.0) || !(slope < prev_slope + 1e-9)) ++bad;
            prev_slope = slope;
        }
    }
    detail = "counterexamples " + std::to_string(bad) + " over " + std::to_string(accepted) +
             " instances";
    return accepted == 50 && bad == 0;
}

// -------------------------------------------------------------- check 6

// Raising the decoy floor along one solution branch never lowers the total
// recovered decoy power. Each grid point warm-starts from the previous
// solution so the comparison follows a single branch rather than hopping
// between distant optima.
bool check_decoy_power_trend(std::string& detail) {
    BandPlan plan;
    plan.num_bands = 4;
    plan.true_bands = {0, 2};
    plan.fake_bands = {1, 3};
    plan.alpha = 0.8;

    int bad = 0, series = 0;
    for (int inst = 0; inst < 20; ++inst) {
        const ChannelSet ch = rician_channels(4, 606, inst);
        double prev_fake = -1.0;
        XiVector warm;
        bool have_warm = false;
        for (double th = 0.05; th <= 0.901; th += 0.05) {
            OptResult r;
            bool ok = false;
            if (have_warm) {
                try {
                    r = bado(ch, plan, th, 10.0, warm);
                    ok = true;
                } catch (const Infeasible&) {
                }
            }
            if (!ok) {
                try {
                    r = bado_multistart(ch, plan, th, 10.0);
                    ok = true;
                } catch (const Infeasible&) {
                }
            }
            if (!ok) break;
            warm = r.xi_star;
            have_warm = true;
            const RecoveredAllocation rec = recover_powers(r, ch, plan, th);
            double fake = 0.0;
            for (int n : plan.fake_bands) fake += rec.powers.p[n];
            if (prev_fake > 0.0 && fake < prev_fake * (1.0 - 1e-6)) ++bad;
            prev_fake = fake;
            ++series;
        }
    }
    detail = "violations " + std::to_string(bad) + " over " + std::to_string(series) +
             " grid points";
    return bad == 0 && series > 0;
}

// -------------------------------------------------------------- check 7

// Power sweep, paired across methods on a shared batch: the optimized mean
// sum secrecy rises with the budget and stays above the equal split, both
// within twice the combined standard errors.
bool check_power_sweep_trend(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    Scenario sc = demo_scenario();
    sc.threshold = 0.2;
    sc.trials = 500;

    std::vector<double> grid;
    for (int db = 0; db <= 20; db += 2) grid.push_back(db_to_linear(db));
    const std::vector<MetricsRecord> rows =
        sweep_power(sc, grid, {Method::bado, Method::equal_power});

    double worst_step = 1e300, worst_gap = 1e300;
    for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
        const MetricsRecord& opt = rows[i];
        const MetricsRecord& eq = rows[i + 1];
        const double gap_tol = 2.0 * std::sqrt(opt.stderr_secrecy * opt.stderr_secrecy +
                                               eq.stderr_secrecy * eq.stderr_secrecy);
        worst_gap = std::min(worst_gap, opt.mean_sum_secrecy - eq.mean_sum_secrecy + gap_tol);
        if (i + 2 < rows.size()) {
            const MetricsRecord& next = rows[i + 2];
            const double step_tol =
                2.0 * std::sqrt(opt.stderr_secrecy * opt.stderr_secrecy +
                                next.stderr_secrecy * next.stderr_secrecy);
            worst_step =
                std::min(worst_step, next.mean_sum_secrecy - opt.mean_sum_secrecy + step_tol);
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    detail = fmt("worst ascent slack %.3g, worst pairing slack %.3g, %.0f s", worst_step,
                 worst_gap, secs);
    return worst_step >= 0.0 && worst_gap >= 0.0 && secs < 900.0;
}

// -------------------------------------------------------------- check 8

// On every feasible optimized realization the decoys dominate: their mean
// SINR at the interceptor is at least the true-band mean, and every decoy
// clears the floor.
bool check_dominance(std::string& detail) {
    Scenario sc = demo_scenario();
    sc.trials = 250;
    const RealizationBatch batch = make_batch(sc);

    int feasible = 0, mean_bad = 0, floor_bad = 0;
    double worst_floor = 1e300;
    for (const ChannelSet& raw : batch.realizations) {
        const ChannelSet nch = normalized(raw);
        OptResult r;
        try {
            r = bado_multistart(nch, sc.plan, sc.threshold, sc.total_power);
        } catch (const Infeasible&) {
            continue;
        }
        ++feasible;
        const RecoveredAllocation rec = recover_powers(r, nch, sc.plan, sc.threshold);
        const CorrelationMatrix C = CorrelationMatrix::from_interferer_coeffs(rec.coefficients);
        const SinrReport sr = sinr_report(rec.powers, nch, C, sc.plan);

        double mi = 0.0, md = 0.0;
        for (double v : sr.eve_intercept) mi += v;
        mi /= sr.eve_intercept.size();
        for (double v : sr.eve_decoy) {
            md += v;
            worst_floor = std::min(worst_floor, v);
        }
        md /= sr.eve_decoy.size();
        if (md < mi) ++mean_bad;
        for (double v : sr.eve_decoy)
            if (v < sc.threshold * (1.0 - 1e-6)) ++floor_bad;
    }
    detail = fmt("min decoy SINR %.6f, ", worst_floor) + std::to_string(mean_bad) +
             " mean inversions, " + std::to_string(floor_bad) + " floor misses over " +
             std::to_string(feasible) + " feasible";
    return feasible > 0 && mean_bad == 0 && floor_bad == 0;
}

// -------------------------------------------------------------- check 9

// Threshold sweep of the default scenario: full deception in the low-floor
// region, interception probability falling as the floor rises, and the two
// curves crossing somewhere on the grid.
bool check_threshold_sweep_trend(std::string& detail) {
    Scenario sc = demo_scenario();
    sc.trials = 500;
    std::vector<double> grid;
    for (int i = 0; i <= 12; ++i) grid.push_back(0.1 * i);
    const std::vector<MetricsRecord> rows = sweep_threshold(sc, grid, {Method::bado});

    bool low_region_full = rows.size() >= 2 && rows[0].deception_prob == 1.0 &&
                           rows[1].deception_prob == 1.0;
    bool monotone = true, strict = true, crossing = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].interception_prob <= rows[i].deception_prob) crossing = true;
        if (i == 0) continue;
        const double prev = rows[i - 1].interception_prob;
        const double cur = rows[i].interception_prob;
        if (cur > prev) monotone = false;
        if (prev >= 0.01 && !(cur < prev)) strict = false;
    }
    detail = fmt("interception %.3f -> %.3f", rows.front().interception_prob,
                 rows.back().interception_prob) +
             (crossing ? ", curves cross" : ", no crossing");
    return low_region_full && monotone && strict && crossing;
}

// -------------------------------------------------------------- check 10

// Identical sweeps serialize byte-identically.
bool check_determinism(std::string& detail) {
    Scenario sc = demo_scenario();
    sc.trials = 40;
    const std::vector<double> grid = {0.0, 0.3, 0.6};
    const std::vector<Method> methods = {Method::bado, Method::equal_power, Method::ofdm,
                                         Method::bado_unconstrained};
    const std::string a = metrics_csv(sweep_threshold(sc, grid, methods));
    Scenario again = demo_scenario();
    again.trials = 40;
    const std::string b = metrics_csv(sweep_threshold(again, grid, methods));
    detail = a == b ? "byte-identical CSV" : "CSV mismatch";
    return a == b;
}

}  // namespace

int main(int argc, char** argv) {
    struct Check {
        int id;
        const char* label;
        std::function<bool(std::string&)> run;
    };
    const std::vector<Check> checks = {
        {1, "optimizer matches exhaustive grid search", check_grid_optimality},
        {2, "substituted rate equals the direct formula", check_substitution_identity},
        {3, "alternation ascends and ends feasible", check_ascent_and_feasibility},
        {4, "multiplexing factor fit round-trips", check_alpha_round_trip},
        {5, "secrecy rate rises with diminishing returns", check_rate_shape},
        {6, "decoy power grows with the floor", check_decoy_power_trend},
        {7, "power sweep: rising mean, beats equal split", check_power_sweep_trend},
        {8, "decoys dominate on every feasible run", check_dominance},
        {9, "threshold sweep: deception holds, interception falls", check_threshold_sweep_trend},
        {10, "repeated sweeps are byte-identical", check_determinism},
    };

    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

    bool all_pass = true;
    for (const Check& c : checks) {
        if (!selected.empty() &&
            std::find(selected.begin(), selected.end(), c.id) == selected.end())
            continue;
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("%s  %2d  %s (%s)\n", ok ? "PASS" : "FAIL", c.id, c.label, detail.c_str());
        std::fflush(stdout);
        all_pass = all_pass && ok;
    }
    return all_pass ? 0 : 1;
}
