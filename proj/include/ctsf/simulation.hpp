// Monte-Carlo layer: Rician channel draws, per-realization optimization and
// evaluation, and the power/threshold sweeps. Every random draw is keyed by
// (scenario seed, realization index), so batches are bit-identical across
// runs and evaluation order.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ctsf/model.hpp"
#include "ctsf/rng.hpp"

namespace ctsf {

// K independent Rician power gains |h|^2 with the LoS phase drawn uniformly.
// Consumes exactly five uniforms per band.
std::vector<double> draw_channels(const RicianParams& params, int K, Rng& rng);

struct RealizationBatch {
    std::vector<ChannelSet> realizations;
    std::uint64_t seed = 0;
    RicianParams bob;
    RicianParams eve;
};

// scenario.trials channel sets; realization t uses the stream keyed
// (scenario.seed, t), legitimate gains drawn before interception gains.
RealizationBatch make_batch(const Scenario& sc);

enum class Method { bado, equal_power, ofdm, bado_unconstrained };

// CSV/CLI tokens: bado, equal, ofdm, bado-unconstrained.
std::string method_token(Method m);
Method method_from_token(const std::string& token);

struct MetricsRecord {
    double sweep_value = 0.0;
    std::string method;
    double mean_sum_secrecy = 0.0;
    double mean_intercept_sinr = 0.0;
    double mean_decoy_sinr = 0.0;
    double interception_prob = 0.0;
    double deception_prob = 0.0;
    double feasible_fraction = 0.0;
    long trials = 0;
    double stderr_secrecy = 0.0;
};

// One sweep point: per realization, obtain an allocation by `method`,
// re-evaluate it through the SINR module, and aggregate. Means and the
// standard error cover feasible realizations only; the probability
// estimators keep all trials in the denominator with infeasible ones
// counted as neither intercepted nor deceived.
MetricsRecord run_point(const Scenario& sc, Method method);

// As run_point but over a caller-supplied batch (the sweeps share one batch
// across methods and grid points for paired comparisons). sweep_value is
// recorded verbatim.
MetricsRecord run_point_on_batch(const Scenario& sc, Method method,
                                 const RealizationBatch& batch, double sweep_value);

// One record per (grid value, method), grid-major in the given order.
// Grids must be non-empty and ascending.
std::vector<MetricsRecord> sweep_power(const Scenario& sc, const std::vector<double>& ps_grid,
                                       const std::vector<Method>& methods);
std::vector<MetricsRecord> sweep_threshold(const Scenario& sc, const std::vector<double>& th_grid,
                                           const std::vector<Method>& methods);

// CSV serialization, nine significant digits.
std::string metrics_csv(const std::vector<MetricsRecord>& records);

}  // namespace ctsf
