// Core data model for the CTSF (conceal-truth-show-fake) transmission scheme:
// band partitions, channel gains, power allocations and scenario configs.
// All quantities here are linear (no dB); dB appears only at the config
// boundary, in keys carrying a _db suffix.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ctsf {

// Partition of the K frequency bands into true-information bands and decoy
// bands, plus the multiplexing factor alpha in (0,1]. alpha = 1 is the
// orthogonal (OFDM) limit. Band indices are 0-based.
struct BandPlan {
    int num_bands = 0;
    std::vector<int> true_bands;
    std::vector<int> fake_bands;
    double alpha = 1.0;

    bool is_true(int i) const;
    bool is_fake(int i) const;
};

// Squared channel magnitudes |h_k|^2 (legitimate link) and |h_{e,k}|^2
// (interception link) with per-band noise variances.
struct ChannelSet {
    std::vector<double> bob_gain;
    std::vector<double> eve_gain;
    std::vector<double> bob_noise;
    std::vector<double> eve_noise;

    int size() const { return static_cast<int>(bob_gain.size()); }
    bool unit_noise(double tol = 1e-12) const;
};

// Per-band transmit powers with the total budget they were drawn against.
struct PowerAllocation {
    std::vector<double> p;
    double budget = 0.0;

    double total() const;
};

// Rician fading parameters. k_factor is the linear K-factor (ratio of
// line-of-sight to scattered power); k_factor = 0 degenerates to Rayleigh.
// mean_gain is E[|h|^2].
struct RicianParams {
    double k_factor = 0.0;
    double mean_gain = 1.0;
};

// A complete simulation scenario. threshold is the interception/deception
// SINR threshold (linear), total_power the budget P_s (linear). The *_db
// fields cache the values as written at the config boundary so that dumping
// a parsed config reproduces it bit for bit; set_total_power_db and the
// rician helpers keep both in sync.
struct Scenario {
    BandPlan plan;
    RicianParams rician_bob;
    RicianParams rician_eve;
    double total_power = 1.0;
    double threshold = 0.0;
    double bob_noise_power = 1.0;
    double eve_noise_power = 1.0;
    int trials = 1;
    std::uint64_t seed = 0;

    double total_power_db = 0.0;
    double rician_k_db_bob = 0.0;
    double rician_k_db_eve = 0.0;

    void set_total_power_db(double db);
    void set_rician_k_db(double bob_db, double eve_db);
};

// Returns one message per violated invariant; empty means valid. Never throws
// on finite numeric input.
std::vector<std::string> validate_scenario(const Scenario& sc);

// Divides every gain by its band's noise variance and sets the noise to one.
// All SINR-derived metrics are invariant under this transform.
ChannelSet normalized(const ChannelSet& ch);

// Uniform-noise convenience constructor.
ChannelSet make_channels(std::vector<double> bob_gain, std::vector<double> eve_gain,
                         double bob_noise = 1.0, double eve_noise = 1.0);

// Config (de)serialization. The format is JSON with the documented key set;
// parse errors and unknown keys throw std::runtime_error. Round-trip stable:
// parse(dump(sc)) reproduces sc exactly.
Scenario scenario_from_json(const std::string& text);
std::string scenario_to_json(const Scenario& sc);
Scenario load_scenario(const std::string& path);

double db_to_linear(double db);
double linear_to_db(double x);

}  // namespace ctsf
