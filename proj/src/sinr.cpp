#include "ctsf/sinr.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ctsf {

namespace {

void check_shapes(const PowerAllocation& p, const ChannelSet& ch, const CorrelationMatrix& C,
                  const BandPlan& plan) {
    const int K = plan.num_bands;
    if (static_cast<int>(p.p.size()) != K || ch.size() != K || C.K != K)
        throw std::invalid_argument("power/channel/correlation sizes must match num_bands");
}

}  // namespace

double bob_sinr(int k, const PowerAllocation& p, const ChannelSet& ch,
                const CorrelationMatrix& C, const BandPlan& plan, bool residual_decoy) {
    check_shapes(p, ch, C, plan);
    if (!plan.is_true(k)) throw std::invalid_argument("bob_sinr: k is not a true band");
    double denom = ch.bob_noise[k];
    for (int i : plan.true_bands)
        if (i != k) denom += p.p[i] * ch.bob_gain[i] * C.at(i, k);
    if (residual_decoy)
        for (int n : plan.fake_bands) denom += p.p[n] * ch.bob_gain[n] * C.at(n, k);
    return p.p[k] * ch.bob_gain[k] / denom;
}

double eve_intercept_sinr(int k, const PowerAllocation& p, const ChannelSet& ch,
                          const CorrelationMatrix& C, const BandPlan& plan) {
    check_shapes(p, ch, C, plan);
    if (!plan.is_true(k)) throw std::invalid_argument("eve_intercept_sinr: k is not a true band");
    double denom = ch.eve_noise[k];
    for (int i = 0; i < plan.num_bands; ++i)
        if (i != k) denom += p.p[i] * ch.eve_gain[i] * C.at(i, k);
    return p.p[k] * ch.eve_gain[k] / denom;
}

double eve_decoy_sinr(int n, const PowerAllocation& p, const ChannelSet& ch,
                      const CorrelationMatrix& C, const BandPlan& plan) {
    check_shapes(p, ch, C, plan);
    if (!plan.is_fake(n)) throw std::invalid_argument("eve_decoy_sinr: n is not a fake band");
    double denom = ch.eve_noise[n];
    for (int j = 0; j < plan.num_bands; ++j)
        if (j != n) denom += p.p[j] * ch.eve_gain[j] * C.at(j, n);
    return p.p[n] * ch.eve_gain[n] / denom;
}

bool decoy_dominates(const PowerAllocation& p, const ChannelSet& ch, const BandPlan& plan) {
    double weakest_decoy = std::numeric_limits<double>::infinity();
    for (int n : plan.fake_bands)
        weakest_decoy = std::min(weakest_decoy, p.p[n] * ch.eve_gain[n]);
    double strongest_true = 0.0;
    for (int k : plan.true_bands)
        strongest_true = std::max(strongest_true, p.p[k] * ch.eve_gain[k]);
    return weakest_decoy >= strongest_true;
}

RateReport sum_secrecy_rate(const PowerAllocation& p, const ChannelSet& ch,
                            const CorrelationMatrix& C, const BandPlan& plan,
                            bool clamp_negative) {
    RateReport rep;
    rep.per_band.reserve(plan.true_bands.size());
    for (int k : plan.true_bands) {
        const double gb = bob_sinr(k, p, ch, C, plan);
        const double ge = eve_intercept_sinr(k, p, ch, C, plan);
        double r = std::log2(1.0 + gb) - std::log2(1.0 + ge);
        if (clamp_negative && r < 0.0) r = 0.0;
        rep.per_band.push_back(r);
        rep.sum += r;
    }
    return rep;
}

SinrReport sinr_report(const PowerAllocation& p, const ChannelSet& ch,
                       const CorrelationMatrix& C, const BandPlan& plan, bool residual_decoy) {
    SinrReport rep;
    for (int k : plan.true_bands) {
        rep.bob.push_back(bob_sinr(k, p, ch, C, plan, residual_decoy));
        rep.eve_intercept.push_back(eve_intercept_sinr(k, p, ch, C, plan));
    }
    for (int n : plan.fake_bands) rep.eve_decoy.push_back(eve_decoy_sinr(n, p, ch, C, plan));
    return rep;
}

IndicatorReport indicators(const PowerAllocation& p, const ChannelSet& ch,
                           const CorrelationMatrix& C, const BandPlan& plan, double threshold) {
    IndicatorReport rep;
    rep.dominance = decoy_dominates(p, ch, plan);
    for (int k : plan.true_bands)
        rep.intercepted.push_back(eve_intercept_sinr(k, p, ch, C, plan) >= threshold);
    for (int n : plan.fake_bands)
        rep.deceived.push_back(rep.dominance &&
                               eve_decoy_sinr(n, p, ch, C, plan) >= threshold);
    return rep;
}

}  // namespace ctsf
