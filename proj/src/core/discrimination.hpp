#pragma once

// Threshold test between the two channel hypotheses: error probabilities,
// optimal threshold, squeezing optimization at fixed photon budget, ROC
// generation, and mode-count sweeps.

#include <functional>
#include <vector>

#include "core/probe.hpp"

namespace sqp {

struct Scenario {
    double eta0;    // transmissivity under H0, [0, 1]
    double eta1;    // transmissivity under H1, [eta0, 1]
    double n_B;     // mean background thermal photons per mode, >= 0
    double M;       // number of probe modes, real-valued >= 1
    double prior0;  // prior probability of H0, [0, 1]
};

void validate_scenario(const Scenario& s);

struct TestOutcome {
    double t;           // decision threshold on the summed outcome
    double p_fa;        // false alarm:   decide H1 when H0 holds
    double p_md;        // misdetection:  decide H0 when H1 holds
    double p_err;       // prior-weighted error probability
    double log_p_fa;    // natural logs, computed without underflow;
    double log_p_md;    // the linear fields above are exp() of these
    double log_p_err;
    bool degenerate;    // H0 and H1 statistics coincide; p_err pins to 1/2
};

struct OptimizationResult {
    double r_star;         // optimal squeezing parameter in [r_min, 1]
    double t_star;         // threshold at the optimum
    TestOutcome outcome;   // test at (r_star, t_star)
    TestOutcome coherent;  // r = 1 baseline, threshold re-optimized
    bool flat;             // p_err(r) indistinguishable across the grid
};

struct RocPoint {
    double p_fa_target;
    double p_md;
    double log_p_md;
    double t;
    double r;
    bool reachable;  // false when no finite threshold attains the target
};

enum class ThresholdMethod {
    kAuto,           // closed form, golden-section fallback when ill-conditioned
    kClosedForm,     // stationarity root only (throws if unavailable)
    kGoldenSection,  // bracketed scalar minimization only
};

// Minimizes f on [lo, hi] by golden-section search to an interval of width
// x_tol; returns the interval midpoint. f must be unimodal for a guaranteed
// global minimum; otherwise some local minimum is found.
double golden_section_minimize(const std::function<double(double)>& f,
                               double lo, double hi, double x_tol);

// Error probabilities of the threshold test "decide H1 when z > t".
//   p_fa = erfc((t - mean0)/sqrt(2 var0)) / 2
//   p_md = erfc((mean1 - t)/sqrt(2 var1)) / 2
//   p_err = prior0 p_fa + (1 - prior0) p_md
// All three flow through the log domain; linear fields are exponentials.
TestOutcome error_probabilities(const Probe& probe, const Scenario& s, double t);

// Threshold minimizing p_err. Closed form: the stationarity condition
// prior0 P0(t) = (1-prior0) P1(t) is quadratic in t for unequal variances
// (the admissible root lies between the two means) and linear for equal
// variances. Golden-section fallback over [mean0 - 10 sigma0, mean1 + 10
// sigma1] when the closed form is unavailable or fails its own stationarity
// certificate. Requires prior0 in (0, 1) unless the hypotheses coincide.
TestOutcome optimal_threshold(const Probe& probe, const Scenario& s,
                              ThresholdMethod method = ThresholdMethod::kAuto);

// Minimizes p_err (at the per-candidate optimal threshold) over the
// squeezing parameter r in [min_squeezing(n_S), 1]: 200-point scan uniform
// in -10 log10 r, then golden-section refinement to 1e-10 relative in r.
// Comparisons happen on log_p_err. Within 1e-14 relative of the coherent
// baseline the tie breaks to r_star = 1.
OptimizationResult optimize_squeezing(double n_S, const Scenario& s);

// One point per target false-alarm probability. The threshold achieving the
// target is derived in closed form from the H0 statistic; when optimize_r is
// set, p_md is minimized over r with the threshold re-derived per candidate
// (every candidate meets the target exactly), otherwise fixed_r is used.
// Grid values must be strictly increasing, each inside (0, 1).
std::vector<RocPoint> roc_curve(double n_S, const Scenario& s,
                                const std::vector<double>& p_fa_grid,
                                bool optimize_r, double fixed_r, int threads = 1);

// optimize_squeezing per mode count; m_values must be ascending, each >= 1.
std::vector<OptimizationResult> sweep_modes(double n_S, const Scenario& scenario_template,
                                            const std::vector<double>& m_values,
                                            int threads = 1);

}  // namespace sqp
