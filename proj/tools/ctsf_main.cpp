// Command-line front end: parse a scenario config, dispatch a subcommand, and
// write CSV/JSON artifacts plus a manifest that pins the run (config hash,
// seed, version; no timestamps, so identical invocations are byte-identical).

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ctsf/model.hpp"
#include "ctsf/multiplexing.hpp"
#include "ctsf/optimizer.hpp"
#include "ctsf/selfcheck.hpp"
#include "ctsf/simulation.hpp"
#include "ctsf/sinr.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

struct OutputWriter {
    fs::path dir;
    bool force = false;

    void write(const std::string& name, const std::string& content) const {
        fs::create_directories(dir);
        const fs::path target = dir / name;
        if (fs::exists(target) && !force)
            throw std::runtime_error("refusing to overwrite " + target.string() +
                                     " (pass --force)");
        std::ofstream out(target, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + target.string());
        out << content;
    }
};

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        grid.push_back(std::stod(item));
    }
    if (grid.empty()) throw std::runtime_error("empty grid");
    return grid;
}

ctsf::Scenario load_checked_scenario(const std::string& path,
                                     const std::optional<std::uint64_t>& seed,
                                     const std::optional<int>& trials) {
    ctsf::Scenario sc = ctsf::load_scenario(path);
    if (seed) sc.seed = *seed;
    if (trials) sc.trials = *trials;
    const auto violations = ctsf::validate_scenario(sc);
    if (!violations.empty()) {
        std::string msg;
        for (const auto& v : violations) msg += v + "\n";
        msg += "invalid scenario";
        throw std::runtime_error(msg);
    }
    return sc;
}

json manifest_base(const std::string& command, const std::string& config_path,
                   const ctsf::Scenario& sc) {
    json m;
    m["command"] = command;
    m["version"] = kVersion;
    m["config_path"] = config_path;
    m["config_hash"] = hex64(fnv1a(ctsf::scenario_to_json(sc)));
    m["seed"] = sc.seed;
    m["trials"] = sc.trials;
    return m;
}

std::vector<ctsf::Method> pick_methods(const std::string& method_flag) {
    if (!method_flag.empty()) return {ctsf::method_from_token(method_flag)};
    return {ctsf::Method::bado, ctsf::Method::equal_power, ctsf::Method::ofdm,
            ctsf::Method::bado_unconstrained};
}

int cmd_optimize(const std::string& config_path, const OutputWriter& out,
                 const std::optional<std::uint64_t>& seed, const std::optional<int>& trials,
                 const std::string& method_flag, const std::string& channels_path,
                 bool dump_config) {
    ctsf::Scenario sc = load_checked_scenario(config_path, seed, trials);
    if (dump_config) {
        std::cout << ctsf::scenario_to_json(sc) << "\n";
        return 0;
    }
    const ctsf::Method method =
        method_flag.empty() ? ctsf::Method::bado : ctsf::method_from_token(method_flag);

    ctsf::ChannelSet raw;
    if (!channels_path.empty()) {
        std::ifstream in(channels_path);
        if (!in) throw std::runtime_error("cannot read " + channels_path);
        json j = json::parse(in);
        raw = ctsf::make_channels(j.at("bob_gain").get<std::vector<double>>(),
                                  j.at("eve_gain").get<std::vector<double>>(),
                                  j.value("bob_noise_power", sc.bob_noise_power),
                                  j.value("eve_noise_power", sc.eve_noise_power));
        if (raw.size() != sc.plan.num_bands)
            throw std::runtime_error("channel file band count does not match config");
    } else {
        raw = ctsf::make_batch(sc).realizations.front();
    }
    const ctsf::ChannelSet nch = ctsf::normalized(raw);

    json result;
    result["method"] = ctsf::method_token(method);
    if (method == ctsf::Method::equal_power) {
        const ctsf::PowerAllocation p =
            ctsf::equal_power_baseline(sc.plan, nch, sc.total_power);
        const auto C = ctsf::correlation_matrix(sc.plan.alpha, sc.plan.num_bands);
        result["objective_bits"] = ctsf::sum_secrecy_rate(p, nch, C, sc.plan).sum;
        result["iterations"] = 0;
        result["converged"] = true;
        result["xi"] = json::array();
        result["powers"] = p.p;
        result["coefficients"] = json::array();
        result["alpha_star"] = sc.plan.alpha;
        result["sum_power"] = p.total();
    } else {
        ctsf::SolveOptions opts;
        double th = sc.threshold;
        if (method == ctsf::Method::ofdm) opts.orthogonal = true;
        if (method == ctsf::Method::bado_unconstrained) {
            opts.enforce_dominance = false;
            th = 0.0;
        }
        const ctsf::OptResult r =
            ctsf::bado_multistart(nch, sc.plan, th, sc.total_power, 1e-6, 100, opts);
        const ctsf::RecoveredAllocation rec = ctsf::recover_powers(r, nch, sc.plan, th);
        result["objective_bits"] = r.objective;
        result["iterations"] = r.iterations;
        result["converged"] = r.converged;
        result["xi"] = r.xi_star;
        result["powers"] = rec.powers.p;
        result["coefficients"] = rec.coefficients;
        result["alpha_star"] = rec.alpha_fit.alpha_star;
        result["alpha_residual"] = rec.alpha_fit.residual;
        result["sum_power"] = rec.powers.total();
        result["trace"] = r.trace;
    }

    out.write("result.json", result.dump(2) + "\n");
    json m = manifest_base("optimize", config_path, sc);
    m["method"] = result["method"];
    out.write("manifest.json", m.dump(2) + "\n");
    return 0;
}

int cmd_sweep(const std::string& command, const std::string& config_path,
              const OutputWriter& out, const std::optional<std::uint64_t>& seed,
              const std::optional<int>& trials, const std::string& method_flag,
              const std::string& grid_flag, bool dump_config) {
    ctsf::Scenario sc = load_checked_scenario(config_path, seed, trials);
    if (dump_config) {
        std::cout << ctsf::scenario_to_json(sc) << "\n";
        return 0;
    }
    const std::vector<ctsf::Method> methods = pick_methods(method_flag);

    std::vector<double> grid;
    std::vector<ctsf::MetricsRecord> records;
    if (command == "sweep-power") {
        // Grid specified in dB (default 0..20 in 2 dB steps), swept linearly.
        std::vector<double> db = grid_flag.empty()
                                     ? std::vector<double>{0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20}
                                     : parse_grid(grid_flag);
        for (double v : db) grid.push_back(ctsf::db_to_linear(v));
        records = ctsf::sweep_power(sc, grid, methods);
    } else {
        grid = grid_flag.empty()
                   ? std::vector<double>{0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6,
                                         0.7, 0.8, 0.9, 1.0, 1.1, 1.2}
                   : parse_grid(grid_flag);
        records = ctsf::sweep_threshold(sc, grid, methods);
    }

    out.write("metrics.csv", ctsf::metrics_csv(records));
    json m = manifest_base(command, config_path, sc);
    m["grid"] = grid;
    json toks = json::array();
    for (auto mm : methods) toks.push_back(ctsf::method_token(mm));
    m["methods"] = toks;
    out.write("manifest.json", m.dump(2) + "\n");
    return 0;
}

int cmd_fit_alpha(const std::string& targets_path, const std::string& config_path,
                  const OutputWriter& out, int k_opt, int k_ref, double alpha0) {
    std::vector<double> targets;
    std::string source;
    if (!targets_path.empty()) {
        std::ifstream in(targets_path);
        if (!in) throw std::runtime_error("cannot read " + targets_path);
        double v;
        while (in >> v) targets.push_back(v);
        source = targets_path;
    } else if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw std::runtime_error("cannot read " + config_path);
        json j = json::parse(in);
        targets = j.at("targets").get<std::vector<double>>();
        if (j.contains("k_ref")) k_ref = j["k_ref"].get<int>();
        if (j.contains("alpha0")) alpha0 = j["alpha0"].get<double>();
        source = config_path;
    } else {
        throw std::runtime_error("fit-alpha needs --targets or --config");
    }
    if (targets.empty()) throw std::runtime_error("no correlation targets given");
    const int K = k_opt > 0 ? k_opt : static_cast<int>(targets.size());

    const ctsf::AlphaFitResult fit = ctsf::fit_alpha(targets, K, k_ref, alpha0);
    json result;
    result["alpha_star"] = fit.alpha_star;
    result["residual"] = fit.residual;
    result["iterations"] = fit.iterations;
    result["converged"] = fit.converged;
    out.write("result.json", result.dump(2) + "\n");

    std::string raw;
    for (double v : targets) raw += std::to_string(v) + ",";
    json m;
    m["command"] = "fit-alpha";
    m["version"] = kVersion;
    m["config_path"] = source;
    m["config_hash"] = hex64(fnv1a(raw));
    m["k"] = K;
    m["k_ref"] = k_ref;
    m["alpha0"] = alpha0;
    out.write("manifest.json", m.dump(2) + "\n");
    std::cout << "alpha_star " << fit.alpha_star << " residual " << fit.residual << "\n";
    return 0;
}

int cmd_validate() {
    bool all = true;
    for (const auto& check : ctsf::run_selfchecks()) {
        std::cout << (check.pass ? "PASS" : "FAIL") << "  " << check.name;
        if (!check.detail.empty()) std::cout << " (" << check.detail << ")";
        std::cout << "\n";
        all = all && check.pass;
    }
    return all ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Anti-interception transmission toolkit: secrecy-rate optimization "
                 "with decoy constraints, channel simulation and parameter sweeps"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", method_flag, grid_flag, channels_path, targets_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    bool force = false, dump_config = false;
    int fit_k = 0, fit_k_ref = 0;
    double fit_alpha0 = 0.5;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* c = cmd->add_option("--config", config_path, "scenario config (JSON)");
        if (needs_config) c->required();
        cmd->add_option("--out", out_dir, "output directory (default: current)");
        cmd->add_option("--seed", seed, "override scenario seed");
        cmd->add_option("--trials", trials, "override trial count");
        cmd->add_flag("--force", force, "overwrite existing outputs");
    };

    auto* optimize = app.add_subcommand("optimize", "solve one fixed-channel instance");
    add_common(optimize, true);
    optimize->add_option("--method", method_flag, "bado|equal|ofdm|bado-unconstrained");
    optimize->add_option("--channels", channels_path, "channel realization file (JSON)");
    optimize->add_flag("--dump-config", dump_config, "print canonical config and exit");

    auto* sweep_p = app.add_subcommand("sweep-power", "Monte-Carlo sweep over the power budget");
    add_common(sweep_p, true);
    sweep_p->add_option("--method", method_flag, "restrict to one method");
    sweep_p->add_option("--grid-db", grid_flag, "comma-separated budget grid in dB");
    sweep_p->add_flag("--dump-config", dump_config, "print canonical config and exit");

    auto* sweep_t =
        app.add_subcommand("sweep-threshold", "Monte-Carlo sweep over the decoy SINR floor");
    add_common(sweep_t, true);
    sweep_t->add_option("--method", method_flag, "restrict to one method");
    sweep_t->add_option("--grid", grid_flag, "comma-separated threshold grid (linear)");
    sweep_t->add_flag("--dump-config", dump_config, "print canonical config and exit");

    auto* fit = app.add_subcommand("fit-alpha", "fit the multiplexing factor to coefficients");
    fit->add_option("--targets", targets_path, "file with one coefficient per line");
    fit->add_option("--config", config_path, "JSON with a targets array");
    fit->add_option("--out", out_dir, "output directory (default: current)");
    fit->add_option("--k", fit_k, "number of bands (default: target count)");
    fit->add_option("--k-ref", fit_k_ref, "reference band (default 0)");
    fit->add_option("--alpha0", fit_alpha0, "initial guess (default 0.5)");
    fit->add_flag("--force", force, "overwrite existing outputs");

    auto* validate = app.add_subcommand("validate", "run the built-in oracle suite");
    (void)validate;

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const OutputWriter out{fs::path(out_dir), force};
    try {
        if (app.got_subcommand(optimize))
            return cmd_optimize(config_path, out, seed, trials, method_flag, channels_path,
                                dump_config);
        if (app.got_subcommand(sweep_p))
            return cmd_sweep("sweep-power", config_path, out, seed, trials, method_flag,
                             grid_flag, dump_config);
        if (app.got_subcommand(sweep_t))
            return cmd_sweep("sweep-threshold", config_path, out, seed, trials, method_flag,
                             grid_flag, dump_config);
        if (app.got_subcommand(fit))
            return cmd_fit_alpha(targets_path, config_path, out, fit_k, fit_k_ref, fit_alpha0);
        if (app.got_subcommand(validate)) return cmd_validate();
    } catch (const ctsf::Infeasible& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
