// C API shim: translates between the C structs in sqprobe.h and the C++
// core, converting exceptions into status codes and a thread-local message.

#include "sqprobe/sqprobe.h"

#include <cstring>
#include <exception>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/discrimination.hpp"
#include "core/errors.hpp"
#include "core/gaussmath.hpp"
#include "core/mc.hpp"
#include "core/probe.hpp"
#include "core/receiver.hpp"
#include "core/scenario.hpp"

namespace {

thread_local std::string g_last_error;

sqp_status fail(sqp_status code, const char* msg) {
    g_last_error = msg;
    return code;
}

sqp_status fail_invalid(const char* msg) {
    return fail(SQP_ERR_INVALID_ARGUMENT, msg);
}

// Runs fn, mapping exceptions onto status codes.
template <class Fn>
sqp_status guarded(Fn&& fn) {
    try {
        fn();
        return SQP_OK;
    } catch (const sqp::budget_error& e) {
        return fail(SQP_ERR_BUDGET, e.what());
    } catch (const sqp::parse_error& e) {
        return fail(SQP_ERR_PARSE, e.what());
    } catch (const std::domain_error& e) {
        return fail(SQP_ERR_DOMAIN, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(SQP_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(SQP_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(SQP_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(SQP_ERR_INTERNAL, "unknown error");
    }
    // g_last_error is preserved on success; it describes the last failure
}

sqp::Probe to_core(const sqp_probe& p) { return sqp::Probe{p.n_S, p.r}; }

sqp::Scenario to_core(const sqp_scenario_params& s) {
    return sqp::Scenario{s.eta0, s.eta1, s.n_B, s.M, s.prior0};
}

sqp::ReceiverConfig to_core(const sqp_receiver_config& c) {
    return sqp::ReceiverConfig{c.wavelength_nm,     c.sky_brightness,
                               c.aperture_radius_m, c.fov_sr,
                               c.bandwidth_hz,      c.filter_nm};
}

sqp_statistic from_core(const sqp::SummedStatistic& s) {
    return sqp_statistic{s.mean, s.variance};
}

sqp_test_outcome from_core(const sqp::TestOutcome& o) {
    sqp_test_outcome out;
    out.t = o.t;
    out.p_fa = o.p_fa;
    out.p_md = o.p_md;
    out.p_err = o.p_err;
    out.log_p_fa = o.log_p_fa;
    out.log_p_md = o.log_p_md;
    out.log_p_err = o.log_p_err;
    out.degenerate = o.degenerate ? 1 : 0;
    return out;
}

sqp_optimization_result from_core(const sqp::OptimizationResult& r) {
    sqp_optimization_result out;
    out.r_star = r.r_star;
    out.t_star = r.t_star;
    out.outcome = from_core(r.outcome);
    out.coherent = from_core(r.coherent);
    out.flat = r.flat ? 1 : 0;
    return out;
}

sqp_roc_point from_core(const sqp::RocPoint& p) {
    sqp_roc_point out;
    out.p_fa_target = p.p_fa_target;
    out.p_md = p.p_md;
    out.log_p_md = p.log_p_md;
    out.t = p.t;
    out.r = p.r;
    out.reachable = p.reachable ? 1 : 0;
    return out;
}

sqp_mc_estimate from_core(const sqp::McEstimate& e) {
    return sqp_mc_estimate{e.p_hat, e.standard_error, e.trials, e.seed};
}

}  // namespace

struct sqp_scenario {
    sqp::ScenarioFile file;
};

extern "C" {

const char* sqp_last_error(void) { return g_last_error.c_str(); }

const char* sqp_version(void) { return "1.0.0"; }

/* ---- probe states and channel statistics ---------------------------- */

sqp_status sqp_squeezing_photons(double r, double* out) {
    if (!out) return fail_invalid("sqp_squeezing_photons: null out pointer");
    return guarded([&] { *out = sqp::squeezing_photons(r); });
}

sqp_status sqp_min_squeezing(double n_S, double* out) {
    if (!out) return fail_invalid("sqp_min_squeezing: null out pointer");
    return guarded([&] { *out = sqp::min_squeezing(n_S); });
}

sqp_status sqp_displacement_photons(const sqp_probe* probe, double* out) {
    if (!probe || !out)
        return fail_invalid("sqp_displacement_photons: null pointer argument");
    return guarded([&] { *out = sqp::displacement_photons(to_core(*probe)); });
}

sqp_status sqp_pre_channel_statistic(const sqp_probe* probe, sqp_statistic* out) {
    if (!probe || !out)
        return fail_invalid("sqp_pre_channel_statistic: null pointer argument");
    return guarded(
        [&] { *out = from_core(sqp::pre_channel_statistic(to_core(*probe))); });
}

sqp_status sqp_summed_statistic(const sqp_probe* probe, double eta, double n_B,
                                double M, sqp_statistic* out) {
    if (!probe || !out)
        return fail_invalid("sqp_summed_statistic: null pointer argument");
    return guarded([&] {
        *out = from_core(sqp::summed_statistic(to_core(*probe), eta, n_B, M));
    });
}

/* ---- receiver model -------------------------------------------------- */

sqp_status sqp_collection_parameter(const sqp_receiver_config* config,
                                    double* out) {
    if (!config || !out)
        return fail_invalid("sqp_collection_parameter: null pointer argument");
    return guarded([&] { *out = sqp::collection_parameter(to_core(*config)); });
}

sqp_status sqp_background_photons(const sqp_receiver_config* config,
                                  double* out) {
    if (!config || !out)
        return fail_invalid("sqp_background_photons: null pointer argument");
    return guarded([&] { *out = sqp::background_photons(to_core(*config)); });
}

/* ---- threshold tests ------------------------------------------------- */

sqp_status sqp_error_probabilities(const sqp_probe* probe,
                                   const sqp_scenario_params* params, double t,
                                   sqp_test_outcome* out) {
    if (!probe || !params || !out)
        return fail_invalid("sqp_error_probabilities: null pointer argument");
    return guarded([&] {
        *out = from_core(
            sqp::error_probabilities(to_core(*probe), to_core(*params), t));
    });
}

sqp_status sqp_optimal_threshold(const sqp_probe* probe,
                                 const sqp_scenario_params* params,
                                 sqp_test_outcome* out) {
    return sqp_optimal_threshold_method(probe, params, SQP_THRESHOLD_AUTO, out);
}

sqp_status sqp_optimal_threshold_method(const sqp_probe* probe,
                                        const sqp_scenario_params* params,
                                        int method, sqp_test_outcome* out) {
    if (!probe || !params || !out)
        return fail_invalid("sqp_optimal_threshold: null pointer argument");
    if (method < SQP_THRESHOLD_AUTO || method > SQP_THRESHOLD_GOLDEN_SECTION)
        return fail_invalid("sqp_optimal_threshold: unknown method");
    return guarded([&] {
        *out = from_core(sqp::optimal_threshold(
            to_core(*probe), to_core(*params),
            static_cast<sqp::ThresholdMethod>(method)));
    });
}

sqp_status sqp_optimize_squeezing(double n_S, const sqp_scenario_params* params,
                                  sqp_optimization_result* out) {
    if (!params || !out)
        return fail_invalid("sqp_optimize_squeezing: null pointer argument");
    return guarded(
        [&] { *out = from_core(sqp::optimize_squeezing(n_S, to_core(*params))); });
}

sqp_status sqp_roc_curve(double n_S, const sqp_scenario_params* params,
                         const double* p_fa_targets, size_t n_targets,
                         int optimize_r, double fixed_r, int threads,
                         sqp_roc_point* out_points) {
    if (!params || !p_fa_targets || !out_points)
        return fail_invalid("sqp_roc_curve: null pointer argument");
    if (n_targets == 0) return fail_invalid("sqp_roc_curve: empty target list");
    return guarded([&] {
        const std::vector<double> grid(p_fa_targets, p_fa_targets + n_targets);
        const std::vector<sqp::RocPoint> pts = sqp::roc_curve(
            n_S, to_core(*params), grid, optimize_r != 0, fixed_r, threads);
        for (size_t i = 0; i < pts.size(); ++i) out_points[i] = from_core(pts[i]);
    });
}

sqp_status sqp_sweep_modes(double n_S, const sqp_scenario_params* params,
                           const double* m_values, size_t n_values, int threads,
                           sqp_optimization_result* out_results) {
    if (!params || !m_values || !out_results)
        return fail_invalid("sqp_sweep_modes: null pointer argument");
    if (n_values == 0) return fail_invalid("sqp_sweep_modes: empty mode list");
    return guarded([&] {
        const std::vector<double> modes(m_values, m_values + n_values);
        const std::vector<sqp::OptimizationResult> res =
            sqp::sweep_modes(n_S, to_core(*params), modes, threads);
        for (size_t i = 0; i < res.size(); ++i) out_results[i] = from_core(res[i]);
    });
}

/* ---- Monte Carlo validation ------------------------------------------ */

sqp_status sqp_simulate_error_probabilities(const sqp_probe* probe,
                                            const sqp_scenario_params* params,
                                            double t, uint64_t trials,
                                            uint64_t seed, int threads,
                                            sqp_mc_estimate* out_p_fa,
                                            sqp_mc_estimate* out_p_md) {
    if (!probe || !params || !out_p_fa || !out_p_md)
        return fail_invalid(
            "sqp_simulate_error_probabilities: null pointer argument");
    return guarded([&] {
        const sqp::McErrorRates rates = sqp::simulate_error_probabilities(
            to_core(*probe), to_core(*params), t, trials, seed, threads);
        *out_p_fa = from_core(rates.p_fa);
        *out_p_md = from_core(rates.p_md);
    });
}

/* ---- gaussian math ---------------------------------------------------- */

sqp_status sqp_erf(double x, double* out) {
    if (!out) return fail_invalid("sqp_erf: null out pointer");
    return guarded([&] { *out = sqp::erf(x); });
}

sqp_status sqp_erfc(double x, double* out) {
    if (!out) return fail_invalid("sqp_erfc: null out pointer");
    return guarded([&] { *out = sqp::erfc(x); });
}

sqp_status sqp_erfcx(double x, double* out) {
    if (!out) return fail_invalid("sqp_erfcx: null out pointer");
    return guarded([&] { *out = sqp::erfcx(x); });
}

sqp_status sqp_erfc_log(double x, double* out) {
    if (!out) return fail_invalid("sqp_erfc_log: null out pointer");
    return guarded([&] { *out = sqp::erfc_log(x); });
}

sqp_status sqp_inverse_erf(double y, double* out) {
    if (!out) return fail_invalid("sqp_inverse_erf: null out pointer");
    return guarded([&] { *out = sqp::inverse_erf(y); });
}

sqp_status sqp_inverse_erfc_log(double log_target, double* out) {
    if (!out) return fail_invalid("sqp_inverse_erfc_log: null out pointer");
    return guarded([&] { *out = sqp::inverse_erfc_log(log_target); });
}

sqp_status sqp_gaussian_cdf(double x, double mean, double variance, double* out) {
    if (!out) return fail_invalid("sqp_gaussian_cdf: null out pointer");
    return guarded([&] { *out = sqp::gaussian_cdf(x, mean, variance); });
}

/* ---- scenario files --------------------------------------------------- */

sqp_status sqp_scenario_load(const char* path, sqp_scenario** out) {
    if (!path || !out)
        return fail_invalid("sqp_scenario_load: null pointer argument");
    return guarded([&] {
        auto handle = new sqp_scenario{sqp::load_scenario(path)};
        *out = handle;
    });
}

sqp_status sqp_scenario_parse(const char* text, sqp_scenario** out) {
    if (!text || !out)
        return fail_invalid("sqp_scenario_parse: null pointer argument");
    return guarded([&] {
        auto handle = new sqp_scenario{sqp::parse_scenario(text)};
        *out = handle;
    });
}

void sqp_scenario_free(sqp_scenario* scenario) { delete scenario; }

sqp_status sqp_scenario_get_probe(const sqp_scenario* scenario,
                                  sqp_probe* out_probe, int* out_fixed_r) {
    if (!scenario || !out_probe || !out_fixed_r)
        return fail_invalid("sqp_scenario_get_probe: null pointer argument");
    out_probe->n_S = scenario->file.probe.n_S;
    out_probe->r = scenario->file.probe.r;
    *out_fixed_r = scenario->file.fixed_r ? 1 : 0;
    return SQP_OK;
}

sqp_status sqp_scenario_get_params(const sqp_scenario* scenario,
                                   sqp_scenario_params* out) {
    if (!scenario || !out)
        return fail_invalid("sqp_scenario_get_params: null pointer argument");
    const sqp::Scenario& s = scenario->file.scenario;
    out->eta0 = s.eta0;
    out->eta1 = s.eta1;
    out->n_B = s.n_B;
    out->M = s.M;
    out->prior0 = s.prior0;
    return SQP_OK;
}

sqp_status sqp_scenario_get_receiver(const sqp_scenario* scenario,
                                     sqp_receiver_config* out,
                                     int* out_has_receiver) {
    if (!scenario || !out || !out_has_receiver)
        return fail_invalid("sqp_scenario_get_receiver: null pointer argument");
    const sqp::ReceiverConfig& r = scenario->file.receiver;
    out->wavelength_nm = r.wavelength_nm;
    out->sky_brightness = r.sky_brightness;
    out->aperture_radius_m = r.aperture_radius_m;
    out->fov_sr = r.fov_sr;
    out->bandwidth_hz = r.bandwidth_hz;
    out->filter_nm = r.filter_nm;
    *out_has_receiver = scenario->file.has_receiver ? 1 : 0;
    return SQP_OK;
}

sqp_status sqp_scenario_get_modes(const sqp_scenario* scenario,
                                  const double** out_values,
                                  size_t* out_count) {
    if (!scenario || !out_values || !out_count)
        return fail_invalid("sqp_scenario_get_modes: null pointer argument");
    *out_values = scenario->file.m_values.data();
    *out_count = scenario->file.m_values.size();
    return SQP_OK;
}

const char* sqp_scenario_output_format(const sqp_scenario* scenario) {
    return scenario ? scenario->file.output_format.c_str() : nullptr;
}

const char* sqp_scenario_output_path(const sqp_scenario* scenario) {
    return scenario ? scenario->file.output_path.c_str() : nullptr;
}

} /* extern "C" */
