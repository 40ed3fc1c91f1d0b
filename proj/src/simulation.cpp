#include "ctsf/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "ctsf/optimizer.hpp"
#include "ctsf/sinr.hpp"

namespace ctsf {

std::vector<double> draw_channels(const RicianParams& params, int K, Rng& rng) {
    const double kf = params.k_factor;
    const double mu = params.mean_gain;
    const double los = std::sqrt(kf / (kf + 1.0) * mu);
    const double scatter = std::sqrt(mu / (kf + 1.0) / 2.0);  // per-component std dev
    std::vector<double> gains(K);
    for (int i = 0; i < K; ++i) {
        const double theta = 2.0 * 3.141592653589793238462643383279502884 * rng.next_unit();
        const double re = los * std::cos(theta) + scatter * rng.next_normal();
        const double im = los * std::sin(theta) + scatter * rng.next_normal();
        gains[i] = re * re + im * im;
    }
    return gains;
}

RealizationBatch make_batch(const Scenario& sc) {
    RealizationBatch batch;
    batch.seed = sc.seed;
    batch.bob = sc.rician_bob;
    batch.eve = sc.rician_eve;
    batch.realizations.reserve(sc.trials);
    const int K = sc.plan.num_bands;
    for (int t = 0; t < sc.trials; ++t) {
        Rng rng = Rng::keyed(sc.seed, static_cast<std::uint64_t>(t));
        std::vector<double> bob = draw_channels(sc.rician_bob, K, rng);
        std::vector<double> eve = draw_channels(sc.rician_eve, K, rng);
        batch.realizations.push_back(
            make_channels(std::move(bob), std::move(eve), sc.bob_noise_power, sc.eve_noise_power));
    }
    return batch;
}

std::string method_token(Method m) {
    switch (m) {
        case Method::bado: return "bado";
        case Method::equal_power: return "equal";
        case Method::ofdm: return "ofdm";
        case Method::bado_unconstrained: return "bado-unconstrained";
    }
    throw std::logic_error("unknown method");
}

Method method_from_token(const std::string& token) {
    if (token == "bado") return Method::bado;
    if (token == "equal" || token == "equal_power") return Method::equal_power;
    if (token == "ofdm") return Method::ofdm;
    if (token == "bado-unconstrained" || token == "bado_unconstrained")
        return Method::bado_unconstrained;
    throw std::invalid_argument("unknown method '" + token +
                                "' (expected bado, equal, ofdm or bado-unconstrained)");
}

namespace {

struct TrialOutcome {
    bool feasible = false;
    double sum_secrecy = 0.0;
    double mean_intercept = 0.0;
    double mean_decoy = 0.0;
    int intercepted = 0;  // true bands with interceptor SINR at or above threshold
    int deceived = 0;     // fake bands deceiving the interceptor
};

// Evaluates one allocation through the SINR module and applies the threshold
// events of the scenario. xi_dominance carries the effective-power dominance
// state used for optimizer-produced allocations; the equal-power baseline
// passes received-power dominance instead.
TrialOutcome evaluate(const PowerAllocation& p, const ChannelSet& nch,
                      const CorrelationMatrix& C, const BandPlan& plan, double threshold,
                      bool dominance) {
    TrialOutcome out;
    out.feasible = true;
    const RateReport rr = sum_secrecy_rate(p, nch, C, plan);
    const SinrReport sr = sinr_report(p, nch, C, plan);
    out.sum_secrecy = rr.sum;
    for (double v : sr.eve_intercept) {
        out.mean_intercept += v;
        if (v >= threshold) ++out.intercepted;
    }
    if (!sr.eve_intercept.empty()) out.mean_intercept /= sr.eve_intercept.size();
    for (double v : sr.eve_decoy) {
        out.mean_decoy += v;
        if (dominance && v >= threshold * (1.0 - 1e-9)) ++out.deceived;
    }
    if (!sr.eve_decoy.empty()) out.mean_decoy /= sr.eve_decoy.size();
    return out;
}

bool xi_dominates(const XiVector& xi, const BandPlan& plan) {
    double max_true = 0.0, min_fake = std::numeric_limits<double>::infinity();
    for (int k : plan.true_bands) max_true = std::max(max_true, xi[k]);
    for (int n : plan.fake_bands) min_fake = std::min(min_fake, xi[n]);
    return min_fake >= max_true * (1.0 - 1e-9);
}

TrialOutcome run_trial(const Scenario& sc, Method method, const ChannelSet& raw,
                       double total_power) {
    const BandPlan& plan = sc.plan;
    const ChannelSet nch = normalized(raw);
    const int K = plan.num_bands;

    if (method == Method::equal_power) {
        const PowerAllocation p = equal_power_baseline(plan, nch, total_power);
        const CorrelationMatrix C = correlation_matrix(plan.alpha, K);
        const bool dom = decoy_dominates(p, nch, plan);
        return evaluate(p, nch, C, plan, sc.threshold, dom);
    }

    SolveOptions opts;
    double opt_threshold = sc.threshold;
    if (method == Method::ofdm) opts.orthogonal = true;
    if (method == Method::bado_unconstrained) {
        opts.enforce_dominance = false;
        opt_threshold = 0.0;
    }

    try {
        const OptResult result =
            bado_multistart(nch, plan, opt_threshold, total_power, 1e-6, 100, opts);

        PowerAllocation p;
        CorrelationMatrix C;
        if (opt_threshold == 0.0 && !result.orthogonal) {
            // Nothing pins down decoy power at a zero floor; report the
            // effective powers as-is (fully coupled view) so the evaluated
            // rate stays equal to the optimizer objective.
            p.p = result.xi_star;
            p.budget = total_power;
            C = CorrelationMatrix::from_interferer_coeffs(std::vector<double>(K, 1.0));
        } else {
            const RecoveredAllocation rec = recover_powers(result, nch, plan, opt_threshold);
            p = rec.powers;
            C = result.orthogonal ? CorrelationMatrix::identity(K)
                                  : CorrelationMatrix::from_interferer_coeffs(rec.coefficients);
        }
        const bool dom = xi_dominates(result.xi_star, plan);
        return evaluate(p, nch, C, plan, sc.threshold, dom);
    } catch (const Infeasible&) {
        return TrialOutcome{};
    } catch (const RecoveryFailure&) {
        return TrialOutcome{};
    }
}

}  // namespace

MetricsRecord run_point_on_batch(const Scenario& sc, Method method,
                                 const RealizationBatch& batch, double sweep_value) {
    MetricsRecord rec;
    rec.sweep_value = sweep_value;
    rec.method = method_token(method);
    rec.trials = static_cast<long>(batch.realizations.size());

    const std::size_t n_true = sc.plan.true_bands.size();
    const std::size_t n_fake = sc.plan.fake_bands.size();
    std::vector<double> secrecy;
    secrecy.reserve(batch.realizations.size());
    double sum_int = 0.0, sum_dec = 0.0;
    long intercepted = 0, deceived = 0, feasible = 0;

    for (const ChannelSet& raw : batch.realizations) {
        const TrialOutcome t = run_trial(sc, method, raw, sc.total_power);
        if (!t.feasible) continue;
        ++feasible;
        secrecy.push_back(t.sum_secrecy);
        sum_int += t.mean_intercept;
        sum_dec += t.mean_decoy;
        intercepted += t.intercepted;
        deceived += t.deceived;
    }

    if (feasible > 0) {
        double mean = 0.0;
        for (double v : secrecy) mean += v;
        mean /= feasible;
        rec.mean_sum_secrecy = mean;
        rec.mean_intercept_sinr = sum_int / feasible;
        rec.mean_decoy_sinr = sum_dec / feasible;
        if (feasible > 1) {
            double ss = 0.0;
            for (double v : secrecy) ss += (v - mean) * (v - mean);
            rec.stderr_secrecy = std::sqrt(ss / (feasible - 1) / feasible);
        }
    }
    if (rec.trials > 0) {
        rec.feasible_fraction = static_cast<double>(feasible) / rec.trials;
        if (n_true > 0)
            rec.interception_prob = static_cast<double>(intercepted) / (rec.trials * n_true);
        if (n_fake > 0)
            rec.deception_prob = static_cast<double>(deceived) / (rec.trials * n_fake);
    }
    return rec;
}

MetricsRecord run_point(const Scenario& sc, Method method) {
    return run_point_on_batch(sc, method, make_batch(sc), sc.total_power);
}

std::vector<MetricsRecord> sweep_power(const Scenario& sc, const std::vector<double>& ps_grid,
                                       const std::vector<Method>& methods) {
    if (ps_grid.empty() || !std::is_sorted(ps_grid.begin(), ps_grid.end()))
        throw std::invalid_argument("power grid must be non-empty and ascending");
    const RealizationBatch batch = make_batch(sc);
    std::vector<MetricsRecord> out;
    out.reserve(ps_grid.size() * methods.size());
    for (double ps : ps_grid)
        for (Method m : methods) {
            Scenario point = sc;
            point.total_power = ps;
            out.push_back(run_point_on_batch(point, m, batch, ps));
        }
    return out;
}

std::vector<MetricsRecord> sweep_threshold(const Scenario& sc, const std::vector<double>& th_grid,
                                           const std::vector<Method>& methods) {
    if (th_grid.empty() || !std::is_sorted(th_grid.begin(), th_grid.end()))
        throw std::invalid_argument("threshold grid must be non-empty and ascending");
    const RealizationBatch batch = make_batch(sc);
    std::vector<MetricsRecord> out;
    out.reserve(th_grid.size() * methods.size());
    for (double th : th_grid)
        for (Method m : methods) {
            Scenario point = sc;
            point.threshold = th;
            out.push_back(run_point_on_batch(point, m, batch, th));
        }
    return out;
}

namespace {

std::string fmt9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

}  // namespace

std::string metrics_csv(const std::vector<MetricsRecord>& records) {
    std::string out =
        "sweep_value,method,mean_sum_secrecy,mean_intercept_sinr,mean_decoy_sinr,"
        "interception_prob,deception_prob,feasible_fraction,trials,stderr_secrecy\n";
    for (const auto& r : records) {
        out += fmt9(r.sweep_value);
        out += ',';
        out += r.method;
        out += ',';
        out += fmt9(r.mean_sum_secrecy);
        out += ',';
        out += fmt9(r.mean_intercept_sinr);
        out += ',';
        out += fmt9(r.mean_decoy_sinr);
        out += ',';
        out += fmt9(r.interception_prob);
        out += ',';
        out += fmt9(r.deception_prob);
        out += ',';
        out += fmt9(r.feasible_fraction);
        out += ',';
        out += std::to_string(r.trials);
        out += ',';
        out += fmt9(r.stderr_secrecy);
        out += '\n';
    }
    return out;
}

}  // namespace ctsf
