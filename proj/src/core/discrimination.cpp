#include "core/discrimination.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "core/gaussmath.hpp"
#include "core/parallel.hpp"

namespace sqp {

namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

// exp(-s * ln10/10); s = 0 maps to exactly 1.0.
double r_from_decibels(double s) { return std::pow(10.0, -s / 10.0); }

double logsumexp2(double a, double b) {
    if (a < b) std::swap(a, b);
    if (a == -kInf) return a;
    return a + std::log1p(std::exp(b - a));
}

double weighted_log(double w, double log_p) {
    return w > 0.0 ? std::log(w) + log_p : -kInf;
}

// Test outcome from precomputed hypothesis statistics; t must be finite.
TestOutcome outcome_at(const SummedStatistic& h0, const SummedStatistic& h1,
                       double prior0, double t) {
    TestOutcome out;
    out.t = t;
    out.degenerate = (h0.mean == h1.mean) && (h0.variance == h1.variance);
    out.log_p_fa = erfc_log((t - h0.mean) / std::sqrt(2.0 * h0.variance)) - kLn2;
    out.log_p_md = erfc_log((h1.mean - t) / std::sqrt(2.0 * h1.variance)) - kLn2;
    out.log_p_err = logsumexp2(weighted_log(prior0, out.log_p_fa),
                               weighted_log(1.0 - prior0, out.log_p_md));
    out.p_fa = std::exp(out.log_p_fa);
    out.p_md = std::exp(out.log_p_md);
    out.p_err = std::exp(out.log_p_err);
    return out;
}

// ln of the prior-weighted gaussian density w * N(t; mu, var).
double log_weighted_density(double w, double mu, double var, double t) {
    const double d = t - mu;
    return std::log(w) - 0.5 * std::log(2.0 * kPi * var) - d * d / (2.0 * var);
}

// Stationarity roots of d p_err / dt = 0. Quadratic in t for unequal
// variances, linear for equal ones. Returns the number of roots written.
int stationarity_roots(const SummedStatistic& h0, const SummedStatistic& h1,
                       double prior0, double roots[2]) {
    const double m0 = h0.mean, v0 = h0.variance;
    const double m1 = h1.mean, v1 = h1.variance;
    const double log_prior_ratio = std::log(prior0 / (1.0 - prior0));
    if (v0 == v1) {
        if (m0 == m1) return 0;
        roots[0] = 0.5 * (m0 + m1) + v0 * log_prior_ratio / (m1 - m0);
        return 1;
    }
    const double a = 1.0 / v0 - 1.0 / v1;
    const double b = -2.0 * (m0 / v0 - m1 / v1);
    const double cc = m0 * m0 / v0 - m1 * m1 / v1 + std::log(v0 / v1) -
                      2.0 * log_prior_ratio;
    const double disc = b * b - 4.0 * a * cc;
    if (disc < 0.0) return 0;
    const double sq = std::sqrt(disc);
    const double qq = -0.5 * (b + std::copysign(sq, b));
    int n = 0;
    double cand;
    cand = qq / a;
    if (std::isfinite(cand)) roots[n++] = cand;
    if (qq != 0.0) {
        cand = cc / qq;
        if (std::isfinite(cand)) roots[n++] = cand;
    }
    return n;
}

// Coarse scan plus golden-section refinement of log_p_err over t. Makes no
// unimodality assumption: the scan localizes the global minimum on the
// bracket before the section search narrows it.
double threshold_by_scan(const SummedStatistic& h0, const SummedStatistic& h1,
                         double prior0) {
    const double lo = h0.mean - 10.0 * std::sqrt(h0.variance);
    const double hi = h1.mean + 10.0 * std::sqrt(h1.variance);
    constexpr int kScan = 257;
    int best = 0;
    double best_val = kInf;
    for (int i = 0; i < kScan; ++i) {
        const double t = lo + (hi - lo) * i / (kScan - 1);
        const double val = outcome_at(h0, h1, prior0, t).log_p_err;
        if (val < best_val) {
            best_val = val;
            best = i;
        }
    }
    const double t_lo = lo + (hi - lo) * std::max(best - 1, 0) / (kScan - 1);
    const double t_hi = lo + (hi - lo) * std::min(best + 1, kScan - 1) / (kScan - 1);
    return golden_section_minimize(
        [&](double t) { return outcome_at(h0, h1, prior0, t).log_p_err; },
        t_lo, t_hi, (hi - lo) * 1e-9);
}

// Result of minimizing a log-domain objective over the squeezing parameter.
struct SqueezeScan {
    double r_star;
    double value;           // objective at r_star
    double coherent_value;  // objective at r = 1
    bool flat;              // grid spread below resolution
};

// 200-point scan uniform in -10 log10 r over [r_min(n_S), 1], golden-section
// refinement to 1e-10 relative in r, comparisons in the log domain. Ties
// within 1e-14 relative of the coherent value break to r = 1, as does a flat
// grid.
template <class Objective>
SqueezeScan scan_squeezing(double n_S, Objective&& objective) {
    const double r_floor = min_squeezing(n_S);
    const double s_max = -10.0 * std::log10(r_floor);
    constexpr int kGrid = 200;

    const auto r_at = [&](double s) {
        return std::min(1.0, std::max(r_floor, r_from_decibels(s)));
    };

    double grid_val[kGrid];
    int best = 0;
    double val_min = kInf, val_max = -kInf;
    for (int i = 0; i < kGrid; ++i) {
        const double s = s_max * i / (kGrid - 1);
        grid_val[i] = objective(r_at(s));
        if (grid_val[i] < grid_val[best]) best = i;
        val_min = std::min(val_min, grid_val[i]);
        val_max = std::max(val_max, grid_val[i]);
    }

    SqueezeScan out;
    out.coherent_value = grid_val[0];
    out.flat = (val_max - val_min) <= 4e-15 * std::max(1.0, std::fabs(val_min));

    double s_star = s_max * best / (kGrid - 1);
    if (s_max > 0.0 && !out.flat) {
        const double s_lo = s_max * std::max(best - 1, 0) / (kGrid - 1);
        const double s_hi = s_max * std::min(best + 1, kGrid - 1) / (kGrid - 1);
        // 1e-10 relative in r corresponds to 10/ln10 * 1e-10 in decibels
        const double s_tol = 4.342944819e-10;
        if (s_hi - s_lo > s_tol) {
            s_star = golden_section_minimize(
                [&](double s) { return objective(r_at(s)); }, s_lo, s_hi, s_tol);
        }
    }

    out.r_star = r_at(s_star);
    out.value = objective(out.r_star);
    if (out.value > grid_val[best]) {  // refinement must not lose to the grid
        out.r_star = r_at(s_max * best / (kGrid - 1));
        out.value = grid_val[best];
    }

    const bool tie = (out.coherent_value - out.value) <=
                     1e-14 * std::fabs(out.coherent_value);
    if (out.flat || tie) {
        out.r_star = 1.0;
        out.value = out.coherent_value;
    }
    return out;
}

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw std::domain_error(std::string("discrimination: ") + what +
                                " must be finite");
    }
}

}  // namespace

void validate_scenario(const Scenario& s) {
    require_finite(s.eta0, "eta0");
    require_finite(s.eta1, "eta1");
    require_finite(s.n_B, "n_B");
    require_finite(s.M, "M");
    require_finite(s.prior0, "prior0");
    if (s.eta0 < 0.0 || s.eta0 > 1.0)
        throw std::domain_error("scenario: eta0 must lie in [0, 1]");
    if (s.eta1 < s.eta0 || s.eta1 > 1.0)
        throw std::domain_error("scenario: eta1 must lie in [eta0, 1]");
    if (s.n_B < 0.0)
        throw std::domain_error("scenario: n_B must be nonnegative");
    if (s.M < 1.0)
        throw std::domain_error("scenario: M must be at least 1");
    if (s.prior0 < 0.0 || s.prior0 > 1.0)
        throw std::domain_error("scenario: prior0 must lie in [0, 1]");
}

double golden_section_minimize(const std::function<double(double)>& f,
                               double lo, double hi, double x_tol) {
    if (!(std::isfinite(lo) && std::isfinite(hi)) || hi < lo)
        throw std::domain_error("golden_section_minimize: invalid bracket");
    if (!(x_tol > 0.0))
        throw std::domain_error("golden_section_minimize: x_tol must be positive");
    constexpr double kInvPhi = 0.61803398874989484820;
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    // iteration cap: the interval stops contracting near ulp scale
    for (int iter = 0; iter < 400 && b - a > x_tol; ++iter) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

TestOutcome error_probabilities(const Probe& probe, const Scenario& s, double t) {
    validate_probe(probe);
    validate_scenario(s);
    require_finite(t, "threshold");
    const SummedStatistic h0 = summed_statistic(probe, s.eta0, s.n_B, s.M);
    const SummedStatistic h1 = summed_statistic(probe, s.eta1, s.n_B, s.M);
    return outcome_at(h0, h1, s.prior0, t);
}

TestOutcome optimal_threshold(const Probe& probe, const Scenario& s,
                              ThresholdMethod method) {
    validate_probe(probe);
    validate_scenario(s);
    const SummedStatistic h0 = summed_statistic(probe, s.eta0, s.n_B, s.M);
    const SummedStatistic h1 = summed_statistic(probe, s.eta1, s.n_B, s.M);

    // Coinciding hypotheses: every threshold gives p_fa = 1 - p_md; the
    // common mean pins both to 1/2 independent of the prior.
    if (h0.mean == h1.mean && h0.variance == h1.variance)
        return outcome_at(h0, h1, s.prior0, h0.mean);

    if (!(s.prior0 > 0.0 && s.prior0 < 1.0))
        throw std::domain_error(
            "optimal_threshold: prior0 must lie strictly inside (0, 1)");

    double roots[2];
    const int n_roots = stationarity_roots(h0, h1, s.prior0, roots);

    TestOutcome best_closed;
    bool have_closed = false;
    for (int i = 0; i < n_roots; ++i) {
        const TestOutcome cand = outcome_at(h0, h1, s.prior0, roots[i]);
        if (!have_closed || cand.log_p_err < best_closed.log_p_err) {
            best_closed = cand;
            have_closed = true;
        }
    }

    if (method == ThresholdMethod::kClosedForm) {
        if (!have_closed)
            throw std::domain_error(
                "optimal_threshold: no closed-form stationarity root exists");
        return best_closed;
    }

    bool certified = false;
    if (have_closed) {
        // stationarity certificate: prior-weighted densities agree at the
        // root to 1e-9 relative, checked as a log-density gap
        const double gap =
            log_weighted_density(s.prior0, h0.mean, h0.variance, best_closed.t) -
            log_weighted_density(1.0 - s.prior0, h1.mean, h1.variance,
                                 best_closed.t);
        certified = std::fabs(gap) <= 1e-9;
    }

    if (method == ThresholdMethod::kAuto && certified) return best_closed;

    const double t_scan = threshold_by_scan(h0, h1, s.prior0);
    const TestOutcome scanned = outcome_at(h0, h1, s.prior0, t_scan);
    if (method == ThresholdMethod::kGoldenSection) return scanned;
    // uncertified closed root: keep whichever candidate wins
    if (have_closed && best_closed.log_p_err < scanned.log_p_err)
        return best_closed;
    return scanned;
}

OptimizationResult optimize_squeezing(double n_S, const Scenario& s) {
    require_finite(n_S, "n_S");
    if (n_S < 0.0) throw std::domain_error("optimize_squeezing: n_S must be nonnegative");
    validate_scenario(s);

    const SqueezeScan scan = scan_squeezing(n_S, [&](double r) {
        return optimal_threshold(Probe{n_S, r}, s).log_p_err;
    });

    OptimizationResult out;
    out.coherent = optimal_threshold(Probe{n_S, 1.0}, s);
    out.flat = scan.flat;
    if (scan.r_star == 1.0) {
        out.r_star = 1.0;
        out.outcome = out.coherent;
    } else {
        out.r_star = scan.r_star;
        out.outcome = optimal_threshold(Probe{n_S, scan.r_star}, s);
    }
    out.t_star = out.outcome.t;
    return out;
}

namespace {

RocPoint roc_point(double n_S, const Scenario& s, double target,
                   bool optimize_r, double fixed_r) {
    // deviate achieving the false-alarm target, independent of r:
    // erfc(a0)/2 = target
    const double a0 = (target <= 0.25) ? inverse_erfc_log(std::log(2.0 * target))
                                       : inverse_erf(1.0 - 2.0 * target);

    const auto eval = [&](double r) -> std::pair<double, double> {
        const Probe probe{n_S, r};
        const SummedStatistic h0 = summed_statistic(probe, s.eta0, s.n_B, s.M);
        const SummedStatistic h1 = summed_statistic(probe, s.eta1, s.n_B, s.M);
        const double t = h0.mean + std::sqrt(2.0 * h0.variance) * a0;
        const double log_p_md =
            erfc_log((h1.mean - t) / std::sqrt(2.0 * h1.variance)) - kLn2;
        return {log_p_md, t};
    };

    RocPoint pt;
    pt.p_fa_target = target;
    if (optimize_r) {
        const SqueezeScan scan =
            scan_squeezing(n_S, [&](double r) { return eval(r).first; });
        pt.r = scan.r_star;
    } else {
        pt.r = fixed_r;
    }
    const auto [log_p_md, t] = eval(pt.r);
    pt.t = t;
    pt.log_p_md = log_p_md;
    pt.p_md = std::exp(log_p_md);
    pt.reachable = std::isfinite(a0) && std::isfinite(t);
    return pt;
}

}  // namespace

std::vector<RocPoint> roc_curve(double n_S, const Scenario& s,
                                const std::vector<double>& p_fa_grid,
                                bool optimize_r, double fixed_r, int threads) {
    validate_scenario(s);
    require_finite(n_S, "n_S");
    if (n_S < 0.0) throw std::domain_error("roc: n_S must be nonnegative");
    if (p_fa_grid.empty())
        throw std::domain_error("roc: false-alarm grid must be nonempty");
    for (std::size_t i = 0; i < p_fa_grid.size(); ++i) {
        if (!(p_fa_grid[i] > 0.0 && p_fa_grid[i] < 1.0))
            throw std::domain_error(
                "roc: false-alarm targets must lie strictly inside (0, 1)");
        if (i > 0 && p_fa_grid[i] <= p_fa_grid[i - 1])
            throw std::domain_error(
                "roc: false-alarm targets must be strictly increasing");
    }
    if (!optimize_r) validate_probe(Probe{n_S, fixed_r});

    std::vector<RocPoint> out(p_fa_grid.size());
    parallel_for(p_fa_grid.size(), threads, [&](std::size_t i) {
        out[i] = roc_point(n_S, s, p_fa_grid[i], optimize_r, fixed_r);
    });
    return out;
}

std::vector<OptimizationResult> sweep_modes(double n_S,
                                            const Scenario& scenario_template,
                                            const std::vector<double>& m_values,
                                            int threads) {
    for (std::size_t i = 0; i < m_values.size(); ++i) {
        if (!(std::isfinite(m_values[i]) && m_values[i] >= 1.0))
            throw std::domain_error("sweep: mode counts must be finite and >= 1");
        if (i > 0 && m_values[i] <= m_values[i - 1])
            throw std::domain_error("sweep: mode counts must be strictly increasing");
    }
    std::vector<OptimizationResult> out(m_values.size());
    parallel_for(m_values.size(), threads, [&](std::size_t i) {
        Scenario s = scenario_template;
        s.M = m_values[i];
        out[i] = optimize_squeezing(n_S, s);
    });
    return out;
}

}  // namespace sqp
