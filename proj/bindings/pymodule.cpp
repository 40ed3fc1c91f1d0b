// Python bindings for the ctsf library. The module mirrors the C++ surface
// one to one: plain structs become classes with attribute access, and the
// Monte-Carlo entry points take method names as strings ("bado", "equal",
// "ofdm", "bado-unconstrained") instead of the C++ enum. Scenarios can be
// built field by field or parsed from the same JSON the CLI consumes.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdio>
#include <string>
#include <vector>

#include "ctsf/model.hpp"
#include "ctsf/multiplexing.hpp"
#include "ctsf/optimizer.hpp"
#include "ctsf/rng.hpp"
#include "ctsf/simulation.hpp"
#include "ctsf/sinr.hpp"

namespace py = pybind11;
using namespace ctsf;

namespace {

std::vector<Method> methods_from_tokens(const std::vector<std::string>& tokens) {
    std::vector<Method> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(method_from_token(t));
    return out;
}

std::string fmt_short(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

}  // namespace

PYBIND11_MODULE(_ctsf, m) {
    m.doc() =
        "Secrecy-rate optimization and Monte-Carlo evaluation for the CTSF "
        "(conceal-truth-show-fake) transmission scheme";
    m.attr("__version__") = "0.1.0";

    // Optimizer failure modes surface as dedicated exception types so callers
    // can distinguish an infeasible constraint set from a genuine error.
    static py::exception<Infeasible> exc_infeasible(m, "Infeasible");
    static py::exception<RecoveryFailure> exc_recovery(m, "RecoveryFailure");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Infeasible& e) {
            std::string msg = e.what();
            msg += " [worst: " + e.worst_constraint +
                   ", violation " + fmt_short(e.violation) + "]";
            PyErr_SetString(exc_infeasible.ptr(), msg.c_str());
        } catch (const RecoveryFailure& e) {
            PyErr_SetString(exc_recovery.ptr(), e.what());
        }
    });

    // ---- data model ----

    py::class_<BandPlan>(m, "BandPlan")
        .def(py::init<>())
        .def_readwrite("num_bands", &BandPlan::num_bands)
        .def_readwrite("true_bands", &BandPlan::true_bands)
        .def_readwrite("fake_bands", &BandPlan::fake_bands)
        .def_readwrite("alpha", &BandPlan::alpha)
        .def("is_true", &BandPlan::is_true, py::arg("i"))
        .def("is_fake", &BandPlan::is_fake, py::arg("i"))
        .def("__repr__", [](const BandPlan& p) {
            return "BandPlan(K=" + std::to_string(p.num_bands) +
                   ", alpha=" + fmt_short(p.alpha) + ")";
        });

    py::class_<ChannelSet>(m, "ChannelSet")
        .def(py::init<>())
        .def_readwrite("bob_gain", &ChannelSet::bob_gain)
        .def_readwrite("eve_gain", &ChannelSet::eve_gain)
        .def_readwrite("bob_noise", &ChannelSet::bob_noise)
        .def_readwrite("eve_noise", &ChannelSet::eve_noise)
        .def("size", &ChannelSet::size)
        .def("unit_noise", &ChannelSet::unit_noise, py::arg("tol") = 1e-12);

    py::class_<PowerAllocation>(m, "PowerAllocation")
        .def(py::init<>())
        .def_readwrite("p", &PowerAllocation::p)
        .def_readwrite("budget", &PowerAllocation::budget)
        .def("total", &PowerAllocation::total);

    py::class_<RicianParams>(m, "RicianParams")
        .def(py::init<>())
        .def_readwrite("k_factor", &RicianParams::k_factor)
        .def_readwrite("mean_gain", &RicianParams::mean_gain);

    py::class_<Scenario>(m, "Scenario")
        .def(py::init<>())
        .def_readwrite("plan", &Scenario::plan)
        .def_readwrite("rician_bob", &Scenario::rician_bob)
        .def_readwrite("rician_eve", &Scenario::rician_eve)
        .def_readwrite("total_power", &Scenario::total_power)
        .def_readwrite("threshold", &Scenario::threshold)
        .def_readwrite("bob_noise_power", &Scenario::bob_noise_power)
        .def_readwrite("eve_noise_power", &Scenario::eve_noise_power)
        .def_readwrite("trials", &Scenario::trials)
        .def_readwrite("seed", &Scenario::seed)
        .def_readwrite("total_power_db", &Scenario::total_power_db)
        .def_readwrite("rician_k_db_bob", &Scenario::rician_k_db_bob)
        .def_readwrite("rician_k_db_eve", &Scenario::rician_k_db_eve)
        .def("set_total_power_db", &Scenario::set_total_power_db, py::arg("db"))
        .def("set_rician_k_db", &Scenario::set_rician_k_db,
             py::arg("bob_db"), py::arg("eve_db"));

    m.def("validate_scenario", &validate_scenario, py::arg("scenario"),
          "One message per violated invariant; empty means valid");
    m.def("normalized", &normalized, py::arg("channels"),
          "Divide gains by the band noise and set the noise to one");
    m.def("make_channels", &make_channels, py::arg("bob_gain"), py::arg("eve_gain"),
          py::arg("bob_noise") = 1.0, py::arg("eve_noise") = 1.0);
    m.def("scenario_from_json", &scenario_from_json, py::arg("text"),
          "Parse the CLI config format (JSON text)");
    m.def("scenario_to_json", &scenario_to_json, py::arg("scenario"));
    m.def("load_scenario", &load_scenario, py::arg("path"));
    m.def("db_to_linear", &db_to_linear, py::arg("db"));
    m.def("linear_to_db", &linear_to_db, py::arg("x"));

    // ---- multiplexing ----

    py::class_<CorrelationMatrix>(m, "CorrelationMatrix")
        .def(py::init<>())
        .def_readwrite("K", &CorrelationMatrix::K)
        .def_readwrite("m", &CorrelationMatrix::m)
        .def("at", &CorrelationMatrix::at, py::arg("i"), py::arg("k"))
        .def_static("identity", &CorrelationMatrix::identity, py::arg("K"))
        .def_static("from_interferer_coeffs", &CorrelationMatrix::from_interferer_coeffs,
                    py::arg("coeffs"));

    py::class_<AlphaFitResult>(m, "AlphaFitResult")
        .def(py::init<>())
        .def_readwrite("alpha_star", &AlphaFitResult::alpha_star)
        .def_readwrite("residual", &AlphaFitResult::residual)
        .def_readwrite("iterations", &AlphaFitResult::iterations)
        .def_readwrite("converged", &AlphaFitResult::converged)
        .def("__repr__", [](const AlphaFitResult& r) {
            return "AlphaFitResult(alpha_star=" + fmt_short(r.alpha_star) +
                   ", residual=" + fmt_short(r.residual) + ")";
        });

    m.def("correlation", &correlation,
          py::arg("alpha"), py::arg("i"), py::arg("k"), py::arg("K"),
          "Inter-band correlation coefficient at multiplexing factor alpha");
    m.def("correlation_matrix", &correlation_matrix, py::arg("alpha"), py::arg("K"));
    m.def("fit_objective", &fit_objective,
          py::arg("alpha"), py::arg("targets"), py::arg("K"), py::arg("k_ref"));
    m.def("fit_alpha", &fit_alpha,
          py::arg("targets"), py::arg("K"), py::arg("k_ref"), py::arg("alpha0") = 0.5,
          py::arg("eps1") = 1e-8, py::arg("eps2") = 1e-10, py::arg("max_iter") = 100,
          "Recover alpha from per-band correlation targets");
    m.def("fit_alpha_weighted", &fit_alpha_weighted,
          py::arg("targets"), py::arg("weights"), py::arg("K"), py::arg("k_ref"),
          py::arg("alpha0") = 0.5, py::arg("eps1") = 1e-8, py::arg("eps2") = 1e-10,
          py::arg("max_iter") = 100);

    // ---- SINR evaluation ----

    py::class_<RateReport>(m, "RateReport")
        .def(py::init<>())
        .def_readwrite("per_band", &RateReport::per_band)
        .def_readwrite("sum", &RateReport::sum);

    py::class_<SinrReport>(m, "SinrReport")
        .def(py::init<>())
        .def_readwrite("bob", &SinrReport::bob)
        .def_readwrite("eve_intercept", &SinrReport::eve_intercept)
        .def_readwrite("eve_decoy", &SinrReport::eve_decoy);

    py::class_<IndicatorReport>(m, "IndicatorReport")
        .def(py::init<>())
        .def_readwrite("intercepted", &IndicatorReport::intercepted)
        .def_readwrite("deceived", &IndicatorReport::deceived)
        .def_readwrite("dominance", &IndicatorReport::dominance);

    m.def("bob_sinr", &bob_sinr,
          py::arg("k"), py::arg("p"), py::arg("channels"), py::arg("C"), py::arg("plan"),
          py::arg("residual_decoy") = false);
    m.def("eve_intercept_sinr", &eve_intercept_sinr,
          py::arg("k"), py::arg("p"), py::arg("channels"), py::arg("C"), py::arg("plan"));
    m.def("eve_decoy_sinr", &eve_decoy_sinr,
          py::arg("n"), py::arg("p"), py::arg("channels"), py::arg("C"), py::arg("plan"));
    m.def("decoy_dominates", &decoy_dominates,
          py::arg("p"), py::arg("channels"), py::arg("plan"));
    m.def("sum_secrecy_rate", &sum_secrecy_rate,
          py::arg("p"), py::arg("channels"), py::arg("C"), py::arg("plan"),
          py::arg("clamp_negative") = false);
    m.def("sinr_report", &sinr_report,
          py::arg("p"), py::arg("channels"), py::arg("C"), py::arg("plan"),
          py::arg("residual_decoy") = false);
    m.def("indicators", &indicators,
          py::arg("p"), py::arg("channels"), py::arg("C"), py::arg("plan"),
          py::arg("threshold"));

    // ---- optimizer ----

    py::class_<Substitutions>(m, "Substitutions")
        .def(py::init<>())
        .def_readwrite("tau", &Substitutions::tau)
        .def_readwrite("mu", &Substitutions::mu);

    py::class_<SolveOptions>(m, "SolveOptions")
        .def(py::init<>())
        .def_readwrite("enforce_dominance", &SolveOptions::enforce_dominance)
        .def_readwrite("orthogonal", &SolveOptions::orthogonal);

    py::class_<OptResult>(m, "OptResult")
        .def(py::init<>())
        .def_readwrite("xi_star", &OptResult::xi_star)
        .def_readwrite("subs_star", &OptResult::subs_star)
        .def_readwrite("objective", &OptResult::objective)
        .def_readwrite("iterations", &OptResult::iterations)
        .def_readwrite("converged", &OptResult::converged)
        .def_readwrite("trace", &OptResult::trace)
        .def_readwrite("orthogonal", &OptResult::orthogonal)
        .def("__repr__", [](const OptResult& r) {
            return "OptResult(objective=" + fmt_short(r.objective) +
                   ", iterations=" + std::to_string(r.iterations) +
                   ", converged=" + (r.converged ? "True" : "False") + ")";
        });

    py::class_<RecoveredAllocation>(m, "RecoveredAllocation")
        .def(py::init<>())
        .def_readwrite("powers", &RecoveredAllocation::powers)
        .def_readwrite("coefficients", &RecoveredAllocation::coefficients)
        .def_readwrite("alpha_fit", &RecoveredAllocation::alpha_fit);

    m.def("secrecy_objective", &secrecy_objective,
          py::arg("xi"), py::arg("channels"), py::arg("plan"),
          py::arg("orthogonal") = false,
          "Sum secrecy rate over true bands as a function of xi");
    m.def("substitutions_of", &substitutions_of,
          py::arg("xi"), py::arg("channels"), py::arg("plan"));
    m.def("solve_T1", &solve_T1,
          py::arg("xi_current"), py::arg("channels"), py::arg("plan"));
    m.def("solve_T2", &solve_T2,
          py::arg("subs"), py::arg("channels"), py::arg("plan"), py::arg("threshold"),
          py::arg("budget"), py::arg("xi_warm"), py::arg("opts") = SolveOptions{});
    m.def("initial_xi", &initial_xi,
          py::arg("channels"), py::arg("plan"), py::arg("threshold"), py::arg("budget"));
    m.def("bado", &bado,
          py::arg("channels"), py::arg("plan"), py::arg("threshold"), py::arg("budget"),
          py::arg("xi_init"), py::arg("tol") = 1e-6, py::arg("max_iter") = 100,
          py::arg("opts") = SolveOptions{},
          "Bi-stage alternating ascent from a given starting point");
    m.def("bado_multistart", &bado_multistart,
          py::arg("channels"), py::arg("plan"), py::arg("threshold"), py::arg("budget"),
          py::arg("tol") = 1e-6, py::arg("max_iter") = 100,
          py::arg("opts") = SolveOptions{},
          "Bi-stage alternating ascent, best of the deterministic starts");
    m.def("recover_powers", &recover_powers,
          py::arg("result"), py::arg("channels"), py::arg("plan"), py::arg("threshold"),
          "Physical powers, coefficients and fitted alpha from xi");
    m.def("equal_power_baseline", &equal_power_baseline,
          py::arg("plan"), py::arg("channels"), py::arg("budget"));
    m.def("ofdm_baseline", &ofdm_baseline,
          py::arg("channels"), py::arg("plan"), py::arg("threshold"), py::arg("budget"),
          py::arg("tol") = 1e-6, py::arg("max_iter") = 100);
    m.def("max_constraint_violation", &max_constraint_violation,
          py::arg("xi"), py::arg("channels"), py::arg("plan"), py::arg("threshold"),
          py::arg("budget"), py::arg("opts") = SolveOptions{},
          "Largest violation in original units with the constraint's name");

    // ---- Monte-Carlo layer ----

    py::class_<Rng>(m, "Rng")
        .def_static("keyed", &Rng::keyed, py::arg("seed"), py::arg("stream"))
        .def("next_u64", &Rng::next_u64)
        .def("next_unit", &Rng::next_unit)
        .def("next_normal", &Rng::next_normal);

    py::class_<RealizationBatch>(m, "RealizationBatch")
        .def(py::init<>())
        .def_readwrite("realizations", &RealizationBatch::realizations)
        .def_readwrite("seed", &RealizationBatch::seed)
        .def_readwrite("bob", &RealizationBatch::bob)
        .def_readwrite("eve", &RealizationBatch::eve);

    py::class_<MetricsRecord>(m, "MetricsRecord")
        .def(py::init<>())
        .def_readwrite("sweep_value", &MetricsRecord::sweep_value)
        .def_readwrite("method", &MetricsRecord::method)
        .def_readwrite("mean_sum_secrecy", &MetricsRecord::mean_sum_secrecy)
        .def_readwrite("mean_intercept_sinr", &MetricsRecord::mean_intercept_sinr)
        .def_readwrite("mean_decoy_sinr", &MetricsRecord::mean_decoy_sinr)
        .def_readwrite("interception_prob", &MetricsRecord::interception_prob)
        .def_readwrite("deception_prob", &MetricsRecord::deception_prob)
        .def_readwrite("feasible_fraction", &MetricsRecord::feasible_fraction)
        .def_readwrite("trials", &MetricsRecord::trials)
        .def_readwrite("stderr_secrecy", &MetricsRecord::stderr_secrecy)
        .def("__repr__", [](const MetricsRecord& r) {
            return "MetricsRecord(method=" + r.method +
                   ", sweep_value=" + fmt_short(r.sweep_value) +
                   ", mean_sum_secrecy=" + fmt_short(r.mean_sum_secrecy) + ")";
        });

    m.def("draw_channels",
          [](const RicianParams& params, int K, Rng& rng) {
              return draw_channels(params, K, rng);
          },
          py::arg("params"), py::arg("K"), py::arg("rng"),
          "K Rician power gains; consumes five uniforms per band");
    m.def("make_batch", &make_batch, py::arg("scenario"),
          "scenario.trials channel sets keyed by (seed, realization index)");
    m.def("run_point",
          [](const Scenario& sc, const std::string& method) {
              return run_point(sc, method_from_token(method));
          },
          py::arg("scenario"), py::arg("method"),
          "One Monte-Carlo point; method is bado, equal, ofdm or "
          "bado-unconstrained");
    m.def("run_point_on_batch",
          [](const Scenario& sc, const std::string& method, const RealizationBatch& batch,
             double sweep_value) {
              return run_point_on_batch(sc, method_from_token(method), batch, sweep_value);
          },
          py::arg("scenario"), py::arg("method"), py::arg("batch"), py::arg("sweep_value"));
    m.def("sweep_power",
          [](const Scenario& sc, const std::vector<double>& grid,
             const std::vector<std::string>& methods) {
              return sweep_power(sc, grid, methods_from_tokens(methods));
          },
          py::arg("scenario"), py::arg("ps_grid"), py::arg("methods"),
          "One record per (budget, method), grid-major; the grid is linear");
    m.def("sweep_threshold",
          [](const Scenario& sc, const std::vector<double>& grid,
             const std::vector<std::string>& methods) {
              return sweep_threshold(sc, grid, methods_from_tokens(methods));
          },
          py::arg("scenario"), py::arg("th_grid"), py::arg("methods"));
    m.def("metrics_csv", &metrics_csv, py::arg("records"),
          "CSV serialization, nine significant digits");
}
