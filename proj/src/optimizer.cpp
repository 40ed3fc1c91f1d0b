#include "ctsf/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ctsf/barrier.hpp"

namespace ctsf {

namespace {

constexpr double kLn2 = 0.6931471805599453;

void check_inputs(const XiVector& xi, const ChannelSet& ch, const BandPlan& plan) {
    if (ch.size() != plan.num_bands || static_cast<int>(xi.size()) != plan.num_bands)
        throw std::invalid_argument("xi/channel/plan size mismatch");
    if (!ch.unit_noise(1e-9))
        throw std::invalid_argument("channels must be normalized to unit noise");
}

// The aggregate caps are anchored at the previous iterate, which therefore
// sits exactly on them. Inflating the bound by a relative hair keeps that
// point strictly interior without disturbing the ascent property: the old
// iterate stays admissible, so the stage-two optimum can only improve on it.
double cap_slack(double cap) { return cap * (1.0 + 1e-9) + 1e-9; }

// Constraint rows shared by the stage-two solve and the feasibility checker.
// The aggregate caps depend on the fixed substitutions and are appended only
// inside solve_T2.
std::vector<LinConstraint> base_rows(const ChannelSet& ch, const BandPlan& plan,
                                     double threshold, double budget,
                                     const SolveOptions& opts) {
    const int K = plan.num_bands;
    std::vector<LinConstraint> rows;

    for (int n : plan.fake_bands) {
        LinConstraint c;
        c.a.assign(K, 0.0);
        if (opts.orthogonal) {
            c.a[n] = -ch.eve_gain[n];
        } else {
            for (int i = 0; i < K; ++i) c.a[i] = threshold * ch.eve_gain[i];
            c.a[n] = -ch.eve_gain[n];
        }
        c.b = -threshold;
        c.name = "decoy floor band " + std::to_string(n);
        rows.push_back(std::move(c));
    }
    if (opts.enforce_dominance) {
        for (int n : plan.fake_bands)
            for (int k : plan.true_bands) {
                LinConstraint c;
                c.a.assign(K, 0.0);
                c.a[k] = 1.0;
                c.a[n] = -1.0;
                c.b = 0.0;
                c.name = "dominance band " + std::to_string(n) + " over band " + std::to_string(k);
                rows.push_back(std::move(c));
            }
    }
    {
        LinConstraint c;
        c.a.assign(K, 1.0);
        c.b = budget;
        c.name = "power budget";
        rows.push_back(std::move(c));
    }
    for (int i = 0; i < K; ++i) {
        LinConstraint c;
        c.a.assign(K, 0.0);
        c.a[i] = -1.0;
        c.b = 0.0;
        c.name = "nonnegativity band " + std::to_string(i);
        rows.push_back(std::move(c));
    }
    return rows;
}

OptResult run_alternation(const ChannelSet& ch, const BandPlan& plan, double threshold,
                          double budget, const XiVector& xi_init, double tol, int max_iter,
                          const SolveOptions& opts);

}  // namespace

double secrecy_objective(const XiVector& xi, const ChannelSet& ch, const BandPlan& plan,
                         bool orthogonal) {
    check_inputs(xi, ch, plan);
    double r = 0.0;
    if (orthogonal) {
        for (int k : plan.true_bands)
            r += std::log2(1.0 + xi[k] * ch.bob_gain[k]) -
                 std::log2(1.0 + xi[k] * ch.eve_gain[k]);
        return r;
    }
    for (int k : plan.true_bands) {
        double bob_int = 0.0, eve_int = 0.0;
        for (int i : plan.true_bands)
            if (i != k) bob_int += xi[i] * ch.bob_gain[i];
        for (int i = 0; i < plan.num_bands; ++i)
            if (i != k) eve_int += xi[i] * ch.eve_gain[i];
        r += std::log2(1.0 + xi[k] * ch.bob_gain[k] / (bob_int + 1.0)) -
             std::log2(1.0 + xi[k] * ch.eve_gain[k] / (eve_int + 1.0));
    }
    return r;
}

Substitutions substitutions_of(const XiVector& xi, const ChannelSet& ch, const BandPlan& plan) {
    check_inputs(xi, ch, plan);
    Substitutions s;
    double eve_sum = 0.0;
    for (int i = 0; i < plan.num_bands; ++i) eve_sum += xi[i] * ch.eve_gain[i];
    s.tau = 1.0 / (eve_sum + 1.0);
    s.mu.reserve(plan.true_bands.size());
    for (int k : plan.true_bands) {
        double bob_sum = 0.0;
        for (int i : plan.true_bands)
            if (i != k) bob_sum += xi[i] * ch.bob_gain[i];
        s.mu.push_back(1.0 / (bob_sum + 1.0));
    }
    return s;
}

Substitutions solve_T1(const XiVector& xi_current, const ChannelSet& ch, const BandPlan& plan) {
    return substitutions_of(xi_current, ch, plan);
}

XiVector solve_T2(const Substitutions& subs, const ChannelSet& ch, const BandPlan& plan,
                  double threshold, double budget, const XiVector& xi_warm,
                  const SolveOptions& opts) {
    check_inputs(xi_warm, ch, plan);
    const int K = plan.num_bands;
    if (budget < 0.0 || threshold < 0.0)
        throw std::invalid_argument("budget and threshold must be nonnegative");
    if (!(subs.tau > 0.0) || subs.mu.size() != plan.true_bands.size())
        throw std::invalid_argument("substitutions out of range");
    for (double m : subs.mu)
        if (!(m > 0.0)) throw std::invalid_argument("substitutions out of range");

    if (budget == 0.0) {
        if (threshold > 0.0 && !plan.fake_bands.empty())
            throw Infeasible("no admissible point: zero budget cannot meet the decoy floor",
                             "decoy floor band " + std::to_string(plan.fake_bands.front()),
                             threshold);
        return XiVector(K, 0.0);
    }

    LogProgram prog;
    prog.dim = K;
    {
        LogTerm bob;
        bob.weight = static_cast<double>(plan.true_bands.size());
        bob.offset = subs.tau;
        bob.coeffs.assign(K, 0.0);
        for (int i : plan.true_bands) bob.coeffs[i] = subs.tau * ch.bob_gain[i];
        prog.terms.push_back(std::move(bob));
    }
    for (std::size_t t = 0; t < plan.true_bands.size(); ++t) {
        const int k = plan.true_bands[t];
        LogTerm eve;
        eve.weight = 1.0;
        eve.offset = subs.mu[t];
        eve.coeffs.assign(K, 0.0);
        for (int i = 0; i < K; ++i)
            if (i != k) eve.coeffs[i] = subs.mu[t] * ch.eve_gain[i];
        prog.terms.push_back(std::move(eve));
    }

    prog.cons = base_rows(ch, plan, threshold, budget, opts);
    {
        LinConstraint c;
        c.a.assign(K, 0.0);
        for (int i = 0; i < K; ++i) c.a[i] = ch.eve_gain[i];
        c.b = cap_slack(1.0 / subs.tau - 1.0);
        c.name = "eavesdropper aggregate cap";
        prog.cons.push_back(std::move(c));
    }
    for (std::size_t t = 0; t < plan.true_bands.size(); ++t) {
        const int k = plan.true_bands[t];
        LinConstraint c;
        c.a.assign(K, 0.0);
        for (int i : plan.true_bands)
            if (i != k) c.a[i] = ch.bob_gain[i];
        c.b = cap_slack(1.0 / subs.mu[t] - 1.0);
        c.name = "legitimate interference cap band " + std::to_string(k);
        prog.cons.push_back(std::move(c));
    }

    XiVector warm = xi_warm;
    for (double& v : warm) v = std::max(0.0, v);

    BarrierResult br = maximize_log_program(prog, &warm);
    if (!br.feasible)
        throw Infeasible("no admissible point: " + br.worst_constraint +
                             " violated by " + std::to_string(br.max_violation),
                         br.worst_constraint, br.max_violation);
    return br.x;
}

XiVector initial_xi(const ChannelSet& ch, const BandPlan& plan, double threshold, double budget) {
    const int K = plan.num_bands;
    XiVector xi(K, budget / (2.0 * K));
    if (plan.fake_bands.empty() || budget == 0.0) return xi;

    const double x = budget / (2.0 * K);
    double true_sum = 0.0;
    for (int k : plan.true_bands) true_sum += x * ch.eve_gain[k];
    double beta = 1.0;
    for (int n : plan.fake_bands) {
        double other_fake = 0.0;
        for (int m : plan.fake_bands)
            if (m != n) other_fake += x * ch.eve_gain[m];
        const double lhs = x * ch.eve_gain[n] - threshold * other_fake;
        if (lhs <= 0.0) return xi;  // no finite scale-up; leave repair to stage two
        beta = std::max(beta, threshold * (true_sum + 1.0) / lhs);
    }
    for (int n : plan.fake_bands) xi[n] *= beta;
    double total = 0.0;
    for (double v : xi) total += v;
    if (total > budget)
        for (double& v : xi) v *= budget / total;
    return xi;
}

namespace {

// Orthogonal stage: exact logs on the legitimate side, first-order tangent of
// the (convex) eavesdropper penalty taken at the current iterate. The
// surrogate never overestimates the true objective, so each solve ascends.
XiVector solve_orthogonal_stage(const XiVector& xi0, const ChannelSet& ch, const BandPlan& plan,
                                double threshold, double budget, const SolveOptions& opts) {
    const int K = plan.num_bands;
    if (budget == 0.0) {
        if (threshold > 0.0 && !plan.fake_bands.empty())
            throw Infeasible("no admissible point: zero budget cannot meet the decoy floor",
                             "decoy floor band " + std::to_string(plan.fake_bands.front()),
                             threshold);
        return XiVector(K, 0.0);
    }

    LogProgram prog;
    prog.dim = K;
    prog.linear.assign(K, 0.0);
    for (int k : plan.true_bands) {
        LogTerm bob;
        bob.weight = 1.0;
        bob.offset = 1.0;
        bob.coeffs.assign(K, 0.0);
        bob.coeffs[k] = ch.bob_gain[k];
        prog.terms.push_back(std::move(bob));
        prog.linear[k] = -ch.eve_gain[k] / (1.0 + std::max(0.0, xi0[k]) * ch.eve_gain[k]);
    }
    prog.cons = base_rows(ch, plan, threshold, budget, opts);

    XiVector warm = xi0;
    for (double& v : warm) v = std::max(0.0, v);
    BarrierResult br = maximize_log_program(prog, &warm);
    if (!br.feasible)
        throw Infeasible("no admissible point: " + br.worst_constraint +
                             " violated by " + std::to_string(br.max_violation),
                         br.worst_constraint, br.max_violation);
    return br.x;
}

OptResult run_alternation(const ChannelSet& ch, const BandPlan& plan, double threshold,
                          double budget, const XiVector& xi_init, double tol, int max_iter,
                          const SolveOptions& opts) {
    check_inputs(xi_init, ch, plan);
    OptResult res;
    res.orthogonal = opts.orthogonal;
    XiVector xi = xi_init;
    double prev = -std::numeric_limits<double>::infinity();
    bool any_feasible = false;

    for (int it = 0; it < max_iter; ++it) {
        XiVector next;
        try {
            if (opts.orthogonal) {
                next = solve_orthogonal_stage(xi, ch, plan, threshold, budget, opts);
            } else {
                const Substitutions subs = solve_T1(xi, ch, plan);
                next = solve_T2(subs, ch, plan, threshold, budget, xi, opts);
            }
        } catch (const Infeasible&) {
            // After at least one feasible iterate the ratcheted polytope can
            // lose its interior; the current point is then the fixed point.
            if (!any_feasible) throw;
            res.converged = true;
            break;
        }
        any_feasible = true;
        const double r = secrecy_objective(next, ch, plan, opts.orthogonal);
        if (r + 1e-9 < prev) {  // numerically stalled; keep the better point
            res.converged = true;
            break;
        }
        xi = std::move(next);
        res.trace.push_back(r);
        ++res.iterations;
        if (std::abs(r - prev) / std::max(1.0, std::abs(r)) <= tol) {
            res.converged = true;
            break;
        }
        prev = r;
    }
    res.xi_star = xi;
    res.subs_star = opts.orthogonal ? Substitutions{1.0, std::vector<double>(
                                                             plan.true_bands.size(), 1.0)}
                                    : substitutions_of(xi, ch, plan);
    res.objective = secrecy_objective(xi, ch, plan, opts.orthogonal);
    return res;
}

}  // namespace

OptResult bado(const ChannelSet& ch, const BandPlan& plan, double threshold, double budget,
               const XiVector& xi_init, double tol, int max_iter, const SolveOptions& opts) {
    return run_alternation(ch, plan, threshold, budget, xi_init, tol, max_iter, opts);
}

OptResult bado_multistart(const ChannelSet& ch, const BandPlan& plan, double threshold,
                          double budget, double tol, int max_iter, const SolveOptions& opts) {
    const int K = plan.num_bands;
    std::vector<XiVector> starts;
    starts.push_back(initial_xi(ch, plan, threshold, budget));
    starts.emplace_back(K, budget / K);
    const std::size_t nf = plan.fake_bands.size();
    const std::size_t nt = plan.true_bands.size();
    for (int k : plan.true_bands) {
        XiVector s(K, 0.0);
        s[k] = budget / 2.0;
        for (int n : plan.fake_bands) s[n] = nf ? budget / (2.0 * nf) : 0.0;
        starts.push_back(std::move(s));
    }
    if (nf) {
        XiVector s(K, 0.0);
        for (int n : plan.fake_bands) s[n] = budget / nf;
        starts.push_back(std::move(s));
    }
    // The stage-one caps anchor at the current iterate and only ever ratchet
    // down, so no trajectory can raise the interference aggregates above
    // their values at its start. Sweeping the true/decoy budget split (and,
    // with several true bands, a lopsided variant per band) spreads the
    // anchors widely enough that some start dominates the good region.
    if (nf && nt) {
        for (int w8 = 1; w8 <= 7; w8 += 2) {
            const double w = w8 / 8.0;
            XiVector s(K, 0.0);
            for (int k : plan.true_bands) s[k] = w * budget / static_cast<double>(nt);
            for (int n : plan.fake_bands) s[n] = (1.0 - w) * budget / static_cast<double>(nf);
            starts.push_back(std::move(s));
            if (nt > 1) {
                for (int k : plan.true_bands) {
                    XiVector d(K, 0.0);
                    for (int i : plan.true_bands)
                        d[i] = w * budget *
                               (i == k ? 0.75 : 0.25 / static_cast<double>(nt - 1));
                    for (int n : plan.fake_bands)
                        d[n] = (1.0 - w) * budget / static_cast<double>(nf);
                    starts.push_back(std::move(d));
                }
            }
        }
    }

    OptResult best;
    bool have = false;
    std::string first_what, first_worst;
    double first_viol = 0.0;
    for (const auto& s : starts) {
        try {
            OptResult r = run_alternation(ch, plan, threshold, budget, s, tol, max_iter, opts);
            if (!have || r.objective > best.objective) {
                best = std::move(r);
                have = true;
            }
        } catch (const Infeasible& e) {
            if (first_what.empty()) {
                first_what = e.what();
                first_worst = e.worst_constraint;
                first_viol = e.violation;
            }
        }
    }
    if (!have) throw Infeasible(first_what, first_worst, first_viol);

    // Restart polish. A converged point often leaves budget slack because the
    // ratcheted caps bind first; scaling it back up to the budget (feasible:
    // the floors and the dominance rows survive upscaling) or refilling the
    // decoy bands re-anchors the caps higher, and a rerun from there can only
    // keep or improve the incumbent.
    const double improve = 1e-9;
    for (int round = 0; round < 10; ++round) {
        std::vector<XiVector> cands;
        double total = 0.0, true_total = 0.0;
        for (double v : best.xi_star) total += v;
        for (int k : plan.true_bands) true_total += best.xi_star[k];
        if (total > 0.0 && total < budget * (1.0 - 1e-9)) {
            XiVector c = best.xi_star;
            for (double& v : c) v *= budget / total;
            cands.push_back(std::move(c));
        }
        if (nf && budget > true_total) {
            XiVector c(K, 0.0);
            for (int k : plan.true_bands) c[k] = best.xi_star[k];
            for (int n : plan.fake_bands)
                c[n] = (budget - true_total) / static_cast<double>(nf);
            cands.push_back(std::move(c));
        }
        bool improved = false;
        for (const auto& c : cands) {
            try {
                OptResult r = run_alternation(ch, plan, threshold, budget, c, tol, max_iter, opts);
                if (r.objective >
                    best.objective + improve * std::max(1.0, std::abs(best.objective))) {
                    best = std::move(r);
                    improved = true;
                }
            } catch (const Infeasible&) {}
        }
        if (!improved) break;
    }
    return best;
}

RecoveredAllocation recover_powers(const OptResult& result, const ChannelSet& ch,
                                   const BandPlan& plan, double threshold) {
    check_inputs(result.xi_star, ch, plan);
    const int K = plan.num_bands;
    const XiVector& xi = result.xi_star;
    RecoveredAllocation out;
    out.powers.p.assign(K, 0.0);
    out.coefficients.assign(K, 0.0);

    if (result.orthogonal) {
        out.powers.p = xi;
        out.powers.budget = out.powers.total();
        out.coefficients.assign(K, 1.0);
        out.alpha_fit.alpha_star = 1.0;
        out.alpha_fit.residual = 0.0;
        out.alpha_fit.iterations = 0;
        out.alpha_fit.converged = true;
        return out;
    }

    std::vector<double> weights(K, 0.0);
    for (int k : plan.true_bands) {
        // True-band power solves the scalar rate relation at the realized
        // per-band rate: with rho = (1 + xi_k a_k/C_k)/(1 + xi_k a_ke/C_ke)
        // the closed form p = C_k C_ke (1 - rho)/(rho C_k a_ke - C_ke a_k)
        // carries the common factor (a_ke C_k - a_k C_ke); cancelling it
        // analytically leaves p = xi_k exactly (and when the factor is zero
        // the relation holds for every p, xi_k included). Evaluating the
        // factored form sidesteps the 0/0 cancellation of the raw quotient.
        if (!std::isfinite(xi[k]) || xi[k] < 0.0)
            throw RecoveryFailure("rate relation for band " + std::to_string(k) +
                                  " has no nonnegative root");
        out.powers.p[k] = xi[k];
        if (out.powers.p[k] > 0.0) {
            out.coefficients[k] = 1.0;
            weights[k] = 1.0;
        }
    }

    for (int n : plan.fake_bands) {
        if (threshold == 0.0) continue;  // silent decoys, p_n = 0
        double eve_int = 0.0;
        for (int i = 0; i < K; ++i)
            if (i != n) eve_int += xi[i] * ch.eve_gain[i];
        const double Cne = eve_int + 1.0;
        if (ch.eve_gain[n] <= 0.0)
            throw RecoveryFailure("decoy band " + std::to_string(n) +
                                  " has zero gain toward the eavesdropper");
        // Floor that reproduces the decoy SINR threshold exactly; never below
        // xi_n, which would push the coefficient above one.
        out.powers.p[n] = std::max(threshold * Cne / ch.eve_gain[n], xi[n]);
        if (out.powers.p[n] > 0.0) {
            out.coefficients[n] = xi[n] / out.powers.p[n];
            weights[n] = 1.0;
        }
    }

    for (int i = 0; i < K; ++i) {
        if (out.coefficients[i] < -1e-6 || out.coefficients[i] > 1.0 + 1e-6)
            throw RecoveryFailure("recovered coefficient out of range on band " +
                                  std::to_string(i));
        out.coefficients[i] = std::clamp(out.coefficients[i], 0.0, 1.0);
    }
    out.powers.budget = out.powers.total();

    const int k_ref = plan.true_bands.empty() ? 0 : plan.true_bands.front();
    out.alpha_fit = fit_alpha_weighted(out.coefficients, weights, K, k_ref);
    return out;
}

PowerAllocation equal_power_baseline(const BandPlan& plan, const ChannelSet& ch, double budget) {
    if (plan.num_bands < 1) throw std::invalid_argument("plan has no bands");
    (void)ch;
    PowerAllocation pa;
    pa.p.assign(plan.num_bands, budget / plan.num_bands);
    pa.budget = budget;
    return pa;
}

OptResult ofdm_baseline(const ChannelSet& ch, const BandPlan& plan, double threshold,
                        double budget, double tol, int max_iter) {
    SolveOptions opts;
    opts.orthogonal = true;
    return bado_multistart(ch, plan, threshold, budget, tol, max_iter, opts);
}

std::pair<double, std::string> max_constraint_violation(const XiVector& xi, const ChannelSet& ch,
                                                        const BandPlan& plan, double threshold,
                                                        double budget, const SolveOptions& opts) {
    check_inputs(xi, ch, plan);
    double worst = -std::numeric_limits<double>::infinity();
    std::string name;
    for (const auto& c : base_rows(ch, plan, threshold, budget, opts)) {
        double v = -c.b;
        for (int i = 0; i < plan.num_bands; ++i) v += c.a[i] * xi[i];
        if (v > worst) {
            worst = v;
            name = c.name;
        }
    }
    return {worst, name};
}

}  // namespace ctsf
