#include "ctsf/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ctsf {

bool BandPlan::is_true(int i) const {
    return std::find(true_bands.begin(), true_bands.end(), i) != true_bands.end();
}

bool BandPlan::is_fake(int i) const {
    return std::find(fake_bands.begin(), fake_bands.end(), i) != fake_bands.end();
}

bool ChannelSet::unit_noise(double tol) const {
    for (double v : bob_noise)
        if (std::abs(v - 1.0) > tol) return false;
    for (double v : eve_noise)
        if (std::abs(v - 1.0) > tol) return false;
    return true;
}

double PowerAllocation::total() const {
    return std::accumulate(p.begin(), p.end(), 0.0);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double x) { return 10.0 * std::log10(x); }

void Scenario::set_total_power_db(double db) {
    total_power_db = db;
    total_power = db_to_linear(db);
}

void Scenario::set_rician_k_db(double bob_db, double eve_db) {
    rician_k_db_bob = bob_db;
    rician_k_db_eve = eve_db;
    rician_bob.k_factor = db_to_linear(bob_db);
    rician_eve.k_factor = db_to_linear(eve_db);
}

ChannelSet normalized(const ChannelSet& ch) {
    ChannelSet out = ch;
    for (int i = 0; i < ch.size(); ++i) {
        out.bob_gain[i] = ch.bob_gain[i] / ch.bob_noise[i];
        out.eve_gain[i] = ch.eve_gain[i] / ch.eve_noise[i];
        out.bob_noise[i] = 1.0;
        out.eve_noise[i] = 1.0;
    }
    return out;
}

ChannelSet make_channels(std::vector<double> bob_gain, std::vector<double> eve_gain,
                         double bob_noise, double eve_noise) {
    ChannelSet ch;
    const std::size_t k = bob_gain.size();
    ch.bob_gain = std::move(bob_gain);
    ch.eve_gain = std::move(eve_gain);
    ch.bob_noise.assign(k, bob_noise);
    ch.eve_noise.assign(k, eve_noise);
    return ch;
}

std::vector<std::string> validate_scenario(const Scenario& sc) {
    std::vector<std::string> out;
    const BandPlan& bp = sc.plan;

    if (bp.num_bands < 1) out.push_back("num_bands must be at least 1");
    if (bp.true_bands.empty()) out.push_back("true band set is empty");
    if (bp.fake_bands.empty()) out.push_back("fake band set is empty");

    std::set<int> seen;
    bool oob = false, dup = false;
    for (int i : bp.true_bands) {
        if (i < 0 || i >= bp.num_bands) oob = true;
        if (!seen.insert(i).second) dup = true;
    }
    bool overlap = false;
    for (int i : bp.fake_bands) {
        if (i < 0 || i >= bp.num_bands) oob = true;
        if (!seen.insert(i).second) {
            if (std::find(bp.true_bands.begin(), bp.true_bands.end(), i) != bp.true_bands.end())
                overlap = true;
            else
                dup = true;
        }
    }
    if (oob) out.push_back("band index out of range");
    if (dup) out.push_back("duplicate band index");
    if (overlap) out.push_back("band sets overlap");
    if (!oob && !dup && !overlap &&
        static_cast<int>(bp.true_bands.size() + bp.fake_bands.size()) != bp.num_bands)
        out.push_back("band sets do not cover all bands");

    if (!(bp.alpha > 0.0) || bp.alpha > 1.0 || !std::isfinite(bp.alpha))
        out.push_back("alpha out of range");
    if (!(sc.total_power >= 0.0) || !std::isfinite(sc.total_power))
        out.push_back("total power must be a nonnegative finite value");
    if (!(sc.threshold >= 0.0) || !std::isfinite(sc.threshold))
        out.push_back("deception threshold must be a nonnegative finite value");
    if (!(sc.rician_bob.k_factor >= 0.0) || !std::isfinite(sc.rician_bob.k_factor) ||
        !(sc.rician_eve.k_factor >= 0.0) || !std::isfinite(sc.rician_eve.k_factor))
        out.push_back("rician k-factor must be a nonnegative finite value");
    if (!(sc.rician_bob.mean_gain > 0.0) || !(sc.rician_eve.mean_gain > 0.0))
        out.push_back("mean gain must be positive");
    if (!(sc.bob_noise_power > 0.0) || !(sc.eve_noise_power > 0.0))
        out.push_back("noise power must be positive");
    if (sc.trials < 1) out.push_back("trials must be at least 1");
    return out;
}

namespace {

using nlohmann::json;

const char* const kKnownKeys[] = {
    "num_bands",  "true_bands",      "fake_bands",      "alpha",
    "total_power_db", "deception_threshold", "rician_k_db", "rician_k_db_eve",
    "mean_gain",  "mean_gain_eve",   "bob_noise_power", "eve_noise_power",
    "trials",     "seed"};

}  // namespace

Scenario scenario_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) throw std::runtime_error("config must be a JSON object");

    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : kKnownKeys)
            if (it.key() == k) { known = true; break; }
        if (!known) throw std::runtime_error("unknown config key: " + it.key());
    }

    auto require = [&](const char* key) -> const json& {
        auto it = j.find(key);
        if (it == j.end())
            throw std::runtime_error(std::string("missing config key: ") + key);
        return *it;
    };

    Scenario sc;
    try {
        sc.plan.num_bands = require("num_bands").get<int>();
        sc.plan.true_bands = require("true_bands").get<std::vector<int>>();
        sc.plan.fake_bands = require("fake_bands").get<std::vector<int>>();
        sc.plan.alpha = require("alpha").get<double>();
        sc.set_total_power_db(require("total_power_db").get<double>());
        sc.threshold = require("deception_threshold").get<double>();

        const double k_db = require("rician_k_db").get<double>();
        sc.set_rician_k_db(k_db, j.contains("rician_k_db_eve")
                                     ? j["rician_k_db_eve"].get<double>()
                                     : k_db);
        sc.rician_bob.mean_gain = j.value("mean_gain", 1.0);
        sc.rician_eve.mean_gain = j.value("mean_gain_eve", sc.rician_bob.mean_gain);
        sc.bob_noise_power = j.value("bob_noise_power", 1.0);
        sc.eve_noise_power = j.value("eve_noise_power", 1.0);
        sc.trials = require("trials").get<int>();
        sc.seed = require("seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("config type error: ") + e.what());
    }
    return sc;
}

std::string scenario_to_json(const Scenario& sc) {
    json j;
    j["num_bands"] = sc.plan.num_bands;
    j["true_bands"] = sc.plan.true_bands;
    j["fake_bands"] = sc.plan.fake_bands;
    j["alpha"] = sc.plan.alpha;
    j["total_power_db"] = sc.total_power_db;
    j["deception_threshold"] = sc.threshold;
    j["rician_k_db"] = sc.rician_k_db_bob;
    if (sc.rician_k_db_eve != sc.rician_k_db_bob)
        j["rician_k_db_eve"] = sc.rician_k_db_eve;
    j["mean_gain"] = sc.rician_bob.mean_gain;
    if (sc.rician_eve.mean_gain != sc.rician_bob.mean_gain)
        j["mean_gain_eve"] = sc.rician_eve.mean_gain;
    j["bob_noise_power"] = sc.bob_noise_power;
    j["eve_noise_power"] = sc.eve_noise_power;
    j["trials"] = sc.trials;
    j["seed"] = sc.seed;
    return j.dump(2) + "\n";
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(buf.str());
}

}  // namespace ctsf
