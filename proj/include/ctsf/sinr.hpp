// SINR evaluation at the legitimate receiver and the interceptor, secrecy
// rates, and the interception/deception indicator events. The correlation
// structure is passed in explicitly so the same evaluators serve both
// alpha-generated pairwise matrices and interferer-indexed coefficient
// vectors recovered from the optimizer.

#pragma once

#include <vector>

#include "ctsf/model.hpp"
#include "ctsf/multiplexing.hpp"

namespace ctsf {

// SINR on true band k at the legitimate receiver. Interference comes from the
// other true bands; the decoys are assumed cancelled (they are known there)
// unless residual_decoy is set, which adds the fake-band leakage terms.
// k must be a true band.
double bob_sinr(int k, const PowerAllocation& p, const ChannelSet& ch,
                const CorrelationMatrix& C, const BandPlan& plan,
                bool residual_decoy = false);

// Interceptor SINR on true band k; every other band interferes. k must be a
// true band.
double eve_intercept_sinr(int k, const PowerAllocation& p, const ChannelSet& ch,
                          const CorrelationMatrix& C, const BandPlan& plan);

// Interceptor SINR on fake band n; every other band interferes. n must be a
// fake band.
double eve_decoy_sinr(int n, const PowerAllocation& p, const ChannelSet& ch,
                      const CorrelationMatrix& C, const BandPlan& plan);

// Decoy dominance at the interceptor (non-strict): the weakest received decoy
// is at least as strong as the strongest received true signal.
bool decoy_dominates(const PowerAllocation& p, const ChannelSet& ch, const BandPlan& plan);

// Per-true-band secrecy rates log2(1+gamma_k) - log2(1+gamma_{e,k}) in bits.
// Negative values are kept unless clamp_negative requests the zero floor.
struct RateReport {
    std::vector<double> per_band;  // parallel to plan.true_bands
    double sum = 0.0;
};

RateReport sum_secrecy_rate(const PowerAllocation& p, const ChannelSet& ch,
                            const CorrelationMatrix& C, const BandPlan& plan,
                            bool clamp_negative = false);

// All SINRs of one realization in one pass.
struct SinrReport {
    std::vector<double> bob;            // parallel to plan.true_bands
    std::vector<double> eve_intercept;  // parallel to plan.true_bands
    std::vector<double> eve_decoy;      // parallel to plan.fake_bands
};

SinrReport sinr_report(const PowerAllocation& p, const ChannelSet& ch,
                       const CorrelationMatrix& C, const BandPlan& plan,
                       bool residual_decoy = false);

// Threshold events: intercepted_k = [gamma_{e,k} >= threshold],
// deceived_n = [decoy SINR >= threshold and decoy dominance holds].
struct IndicatorReport {
    std::vector<bool> intercepted;  // parallel to plan.true_bands
    std::vector<bool> deceived;     // parallel to plan.fake_bands
    bool dominance = false;
};

IndicatorReport indicators(const PowerAllocation& p, const ChannelSet& ch,
                           const CorrelationMatrix& C, const BandPlan& plan,
                           double threshold);

}  // namespace ctsf
