// Secrecy-rate maximization under deception constraints. The physical powers
// p_i and per-band correlation coefficients c_i enter the rate expressions
// only through the products xi_i = p_i * c_i, so the search runs over xi with
// auxiliary aggregates (tau, mu_k) held fixed in one stage and re-fitted in
// the other. Both stages are exact coordinate maximizations of the same
// objective, which makes the alternation a monotone ascent. Physical powers
// and a fitted multiplexing factor are recovered from xi afterwards.
//
// Channels handed to anything in this header must be normalized (unit noise);
// use normalized() from model.hpp.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ctsf/model.hpp"
#include "ctsf/multiplexing.hpp"

namespace ctsf {

// Effective per-band power xi_i = p_i * c_i, indexed like the band plan.
using XiVector = std::vector<double>;

// Aggregate interference substitutions: tau against the eavesdropper's full
// received sum, mu_k against the legitimate receiver's leave-one-out sum over
// true bands. mu is indexed by position in plan.true_bands.
struct Substitutions {
    double tau = 1.0;
    std::vector<double> mu;
};

struct SolveOptions {
    // Keep every decoy band's effective power at or above every true band's
    // (the dominance constraint). Disabled for the unconstrained variant.
    bool enforce_dominance = true;
    // Treat bands as fully orthogonal (identity correlation): cross-band
    // interference terms vanish and the decoy floor involves only the band's
    // own gain.
    bool orthogonal = false;
};

// Thrown when no nonnegative xi satisfies the constraint set. Carries the
// most-violated constraint at the least-infeasible point found.
struct Infeasible : std::runtime_error {
    Infeasible(const std::string& what, std::string worst, double viol)
        : std::runtime_error(what), worst_constraint(std::move(worst)), violation(viol) {}
    std::string worst_constraint;
    double violation = 0.0;
};

// Thrown by recover_powers when the rate relation has no nonnegative root or
// a recovered coefficient falls outside [0, 1].
struct RecoveryFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OptResult {
    XiVector xi_star;
    Substitutions subs_star;
    double objective = 0.0;      // sum secrecy rate in bits/s/Hz at xi_star
    int iterations = 0;
    bool converged = false;      // false when the iteration cap was reached
    std::vector<double> trace;   // objective after each outer iteration
    bool orthogonal = false;     // result lives in the orthogonal model
};

struct RecoveredAllocation {
    PowerAllocation powers;
    std::vector<double> coefficients;  // c_i = xi_i / p_i, 0 where p_i = 0
    AlphaFitResult alpha_fit;
};

// Sum secrecy rate over true bands as a function of xi (unit noise,
// numerator xi_k * gain, interference sums over the appropriate sets).
// With orthogonal = true all cross-band terms vanish.
double secrecy_objective(const XiVector& xi, const ChannelSet& ch, const BandPlan& plan,
                         bool orthogonal = false);

// tau = 1/(sum_i xi_i*|h_e,i|^2 + 1); mu_k = 1/(sum over true i != k of
// xi_i*|h_i|^2 + 1). Throws std::invalid_argument on non-normalized channels
// or a size mismatch.
Substitutions substitutions_of(const XiVector& xi, const ChannelSet& ch, const BandPlan& plan);

// Stage one: with xi fixed, the objective is strictly increasing in tau and
// in each mu_k, so their caps bind and the maximizer is substitutions_of.
Substitutions solve_T1(const XiVector& xi_current, const ChannelSet& ch, const BandPlan& plan);

// Stage two: with (tau, mu) fixed, maximizes the substituted rate over the
// polytope {decoy SINR floors, aggregate caps from the fixed substitutions,
// dominance, budget, xi >= 0}. Throws Infeasible when the polytope has no
// interior point.
XiVector solve_T2(const Substitutions& subs, const ChannelSet& ch, const BandPlan& plan,
                  double threshold, double budget, const XiVector& xi_warm,
                  const SolveOptions& opts = {});

// Deterministic starting point: equal split of half the budget, decoy
// entries scaled up toward the SINR floors, projected back onto the budget.
// May be infeasible for tight thresholds; the first stage-two solve then
// repairs it (or certifies infeasibility).
XiVector initial_xi(const ChannelSet& ch, const BandPlan& plan, double threshold, double budget);

// Alternates the two stages from xi_init until the relative objective change
// drops below tol or max_iter is hit (converged = false, result still
// returned). The trace is non-decreasing up to solver tolerance. Throws
// Infeasible only if no feasible point is ever found.
OptResult bado(const ChannelSet& ch, const BandPlan& plan, double threshold, double budget,
               const XiVector& xi_init, double tol = 1e-6, int max_iter = 100,
               const SolveOptions& opts = {});

// Runs bado from a small set of deterministic starts and keeps the best
// objective. The aggregate caps inherited from a start can fence off part of
// the feasible set, so distinct starts genuinely reach distinct optima.
OptResult bado_multistart(const ChannelSet& ch, const BandPlan& plan, double threshold,
                          double budget, double tol = 1e-6, int max_iter = 100,
                          const SolveOptions& opts = {});

// Physical powers from xi: true-band p_k solves the per-band rate relation
// in closed form, decoy p_n sits at the SINR floor (or at xi_n when the
// floor would drive c_n above one); threshold 0 silences the decoys
// entirely. c_i = xi_i/p_i where p_i > 0, and alpha is fitted to the c_i
// with zero-power bands excluded. Orthogonal results recover p = xi, c = 1,
// alpha = 1 directly.
RecoveredAllocation recover_powers(const OptResult& result, const ChannelSet& ch,
                                   const BandPlan& plan, double threshold);

// p_i = budget / K on every band.
PowerAllocation equal_power_baseline(const BandPlan& plan, const ChannelSet& ch, double budget);

// Orthogonal-carrier benchmark: the alternating optimizer with correlation
// fixed to the identity. Cross terms vanish, so each outer iteration
// maximizes the exact Bob-side logs plus a tangent minorant of the concave
// eavesdropper penalty, which keeps the ascent property.
OptResult ofdm_baseline(const ChannelSet& ch, const BandPlan& plan, double threshold,
                        double budget, double tol = 1e-6, int max_iter = 100);

// Largest constraint violation of xi in original units (<= 0 means feasible)
// together with the offending constraint's name. For tests and diagnostics.
std::pair<double, std::string> max_constraint_violation(const XiVector& xi, const ChannelSet& ch,
                                                        const BandPlan& plan, double threshold,
                                                        double budget,
                                                        const SolveOptions& opts = {});

}  // namespace ctsf
