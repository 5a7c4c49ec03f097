// sqprobe command line: scenario-driven figure sweeps, ROC curves, receiver
// noise budgets, and Monte Carlo validation, emitted as CSV or JSON.
//
// Exit codes: 0 success, 2 input validation, 3 numerical domain,
// 4 Monte Carlo validation failure.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "sqprobe/sqprobe.h"

namespace {

constexpr double kLn10 = 2.30258509299404568402;

// 9 significant digits for probabilities, shortest-exact for coordinates
constexpr const char* kProbFmt = "%.8e";
constexpr const char* kCoordFmt = "%.17g";
constexpr const char* kNoiseFmt = "%.6g";

std::string num(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

int exit_for(sqp_status st) {
    switch (st) {
        case SQP_OK:
            return 0;
        case SQP_ERR_INVALID_ARGUMENT:
        case SQP_ERR_PARSE:
            return 2;
        case SQP_ERR_DOMAIN:
        case SQP_ERR_BUDGET:
            return 3;
        default:
            return 1;
    }
}

// True on success; otherwise prints the library message and sets rc.
bool check(sqp_status st, int& rc) {
    if (st == SQP_OK) return true;
    std::cerr << "error: " << sqp_last_error() << "\n";
    rc = exit_for(st);
    return false;
}

int fail_input(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return 2;
}

struct Cell {
    std::string csv;
    std::string json;  // JSON literal; equals csv for plain numbers

    Cell(std::string v) : csv(v), json(std::move(v)) {}  // NOLINT(google-explicit-constructor)
    Cell(std::string c, std::string j) : csv(std::move(c)), json(std::move(j)) {}
};

Cell number_cell(const char* spec, double v) { return Cell(num(spec, v)); }

Cell flag_cell(bool v) { return Cell(v ? "1" : "0", v ? "true" : "false"); }

struct Table {
    std::string command;
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

std::string render_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        if (i) out += ',';
        out += t.header[i];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += row[i].csv;
        }
        out += '\n';
    }
    return out;
}

std::string render_json(const Table& t) {
    std::string out = "{\"command\":\"" + t.command + "\",\"rows\":[";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        if (r) out += ',';
        out += '{';
        for (std::size_t i = 0; i < t.rows[r].size(); ++i) {
            if (i) out += ',';
            out += '"' + t.header[i] + "\":" + t.rows[r][i].json;
        }
        out += '}';
    }
    out += "]}\n";
    return out;
}

int write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return 0;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) return fail_input("cannot open output file \"" + path + "\"");
    f << text;
    if (!f) return fail_input("cannot write output file \"" + path + "\"");
    return 0;
}

// Log-spaced grid; endpoints pinned exactly. points == 1 collapses to {lo}.
std::vector<double> log_grid(double lo, double hi, int points) {
    std::vector<double> out;
    if (points <= 1) {
        out.push_back(lo);
        return out;
    }
    const double la = std::log10(lo);
    const double lb = std::log10(hi);
    for (int i = 0; i < points; ++i)
        out.push_back(std::pow(10.0, la + (lb - la) * i / (points - 1)));
    out.front() = lo;
    out.back() = hi;
    return out;
}

// Log-spaced integral mode counts, rounded and deduplicated.
std::vector<double> mode_grid(double lo, double hi, int points) {
    std::vector<double> out;
    const double la = std::log10(lo);
    const double lb = std::log10(hi);
    for (int i = 0; i < points; ++i) {
        const double x = points > 1 ? la + (lb - la) * i / (points - 1) : la;
        double m = std::round(std::pow(10.0, x));
        m = std::min(hi, std::max(lo, m));
        if (out.empty() || m > out.back()) out.push_back(m);
    }
    return out;
}

struct GlobalOpts {
    std::string scenario_path;
    std::string format;  // empty = scenario preference
    std::string out_path;
    bool out_given = false;
    std::uint64_t seed = 42;
    int threads = 0;  // 0 = one worker per hardware thread
};

struct LoadedScenario {
    sqp_scenario* handle = nullptr;
    sqp_probe probe{0.0, 1.0};
    int fixed_r = 0;
    sqp_scenario_params params{};
    sqp_receiver_config receiver{};
    int has_receiver = 0;
    std::vector<double> modes;
    std::string format;
    std::string path;

    LoadedScenario() = default;
    LoadedScenario(const LoadedScenario&) = delete;
    LoadedScenario& operator=(const LoadedScenario&) = delete;
    ~LoadedScenario() { sqp_scenario_free(handle); }
};

int load_scenario(const GlobalOpts& g, LoadedScenario& sc) {
    int rc = 0;
    if (g.scenario_path.empty()) return fail_input("--scenario is required");
    if (!check(sqp_scenario_load(g.scenario_path.c_str(), &sc.handle), rc))
        return rc;
    if (!check(sqp_scenario_get_probe(sc.handle, &sc.probe, &sc.fixed_r), rc))
        return rc;
    if (!check(sqp_scenario_get_params(sc.handle, &sc.params), rc)) return rc;
    if (!check(sqp_scenario_get_receiver(sc.handle, &sc.receiver, &sc.has_receiver),
               rc))
        return rc;
    const double* values = nullptr;
    size_t count = 0;
    if (!check(sqp_scenario_get_modes(sc.handle, &values, &count), rc)) return rc;
    sc.modes.assign(values, values + count);
    sc.format = sqp_scenario_output_format(sc.handle);
    sc.path = sqp_scenario_output_path(sc.handle);
    return 0;
}

int emit(const Table& table, const GlobalOpts& g, const LoadedScenario& sc) {
    const std::string format = !g.format.empty() ? g.format : sc.format;
    const std::string path = g.out_given ? g.out_path : sc.path;
    const std::string text = format == "json" ? render_json(table) : render_csv(table);
    return write_output(text, path);
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? int(hw) : 1;
}

double to_log10(double natural_log) { return natural_log / kLn10; }

double squeezing_db(double r) { return r == 1.0 ? 0.0 : -10.0 * std::log10(r); }

/* ---- subcommands ------------------------------------------------------ */

int cmd_noise(const GlobalOpts& g) {
    LoadedScenario sc;
    if (int rc = load_scenario(g, sc)) return rc;
    if (!sc.has_receiver)
        return fail_input("noise: scenario does not define a receiver");
    int rc = 0;
    double gamma = 0.0, n_B = 0.0;
    if (!check(sqp_collection_parameter(&sc.receiver, &gamma), rc)) return rc;
    if (!check(sqp_background_photons(&sc.receiver, &n_B), rc)) return rc;

    Table t;
    t.command = "noise";
    t.header = {"collection_parameter", "n_B"};
    t.rows.push_back({number_cell(kNoiseFmt, gamma), number_cell(kNoiseFmt, n_B)});
    return emit(t, g, sc);
}

struct SweepFlags {
    int m_min = 0, m_max = 0, m_points = 0;
    bool given() const { return m_points > 0; }
};

int run_sweep(const GlobalOpts& g, const SweepFlags& f, bool fig2_layout) {
    LoadedScenario sc;
    if (int rc = load_scenario(g, sc)) return rc;

    std::vector<double> modes = sc.modes;
    if (f.given()) {
        if (f.m_min < 1 || f.m_max < f.m_min)
            return fail_input("mode grid flags require 1 <= m-min <= m-max");
        modes = mode_grid(f.m_min, f.m_max, f.m_points);
    }

    std::vector<sqp_optimization_result> res(modes.size());
    int rc = 0;
    if (!check(sqp_sweep_modes(sc.probe.n_S, &sc.params, modes.data(),
                               modes.size(), resolve_threads(g.threads),
                               res.data()),
               rc))
        return rc;

    Table t;
    t.command = fig2_layout ? "fig2" : "fig1";
    if (fig2_layout) {
        t.header = {"M",     "p_err_opt", "p_err_coh", "optimal_dB",
                    "log10_ratio", "t_opt", "r_opt",     "t_coh",
                    "log10_p_err_opt", "log10_p_err_coh"};
    } else {
        t.header = {"M",     "optimal_dB", "p_err_opt", "p_err_coh", "t_opt",
                    "r_opt", "t_coh",      "log10_p_err_opt", "log10_p_err_coh"};
    }
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const sqp_optimization_result& o = res[i];
        const Cell m = number_cell(kCoordFmt, modes[i]);
        const Cell db = number_cell(kCoordFmt, squeezing_db(o.r_star));
        const Cell p_opt = number_cell(kProbFmt, o.outcome.p_err);
        const Cell p_coh = number_cell(kProbFmt, o.coherent.p_err);
        const Cell t_opt = number_cell(kCoordFmt, o.t_star);
        const Cell r_opt = number_cell(kCoordFmt, o.r_star);
        const Cell t_coh = number_cell(kCoordFmt, o.coherent.t);
        const Cell l_opt = number_cell(kCoordFmt, to_log10(o.outcome.log_p_err));
        const Cell l_coh = number_cell(kCoordFmt, to_log10(o.coherent.log_p_err));
        if (fig2_layout) {
            // ratio p_err_coh / p_err_opt, formed in the log domain
            const Cell ratio = number_cell(
                kCoordFmt, to_log10(o.coherent.log_p_err - o.outcome.log_p_err));
            t.rows.push_back(
                {m, p_opt, p_coh, db, ratio, t_opt, r_opt, t_coh, l_opt, l_coh});
        } else {
            t.rows.push_back(
                {m, db, p_opt, p_coh, t_opt, r_opt, t_coh, l_opt, l_coh});
        }
    }
    return emit(t, g, sc);
}

struct RocFlags {
    int m_override = 0;
    double pfa_min = 1e-4;
    double pfa_max = 0.5;
    int pfa_points = 40;
};

int cmd_roc(const GlobalOpts& g, const RocFlags& f) {
    LoadedScenario sc;
    if (int rc = load_scenario(g, sc)) return rc;
    if (f.m_override > 0) sc.params.M = double(f.m_override);

    if (!(f.pfa_min > 0.0 && f.pfa_max < 1.0 && f.pfa_min <= f.pfa_max))
        return fail_input("roc: require 0 < pfa-min <= pfa-max < 1");
    if (f.pfa_points < 1 || (f.pfa_points > 1 && f.pfa_min == f.pfa_max))
        return fail_input("roc: bad false-alarm grid");
    const std::vector<double> grid = log_grid(f.pfa_min, f.pfa_max, f.pfa_points);

    const int threads = resolve_threads(g.threads);
    std::vector<sqp_roc_point> opt(grid.size());
    std::vector<sqp_roc_point> coh(grid.size());
    int rc = 0;
    // optimized curve honors a file-pinned squeezing parameter
    if (!check(sqp_roc_curve(sc.probe.n_S, &sc.params, grid.data(), grid.size(),
                             sc.fixed_r ? 0 : 1, sc.probe.r, threads, opt.data()),
               rc))
        return rc;
    if (!check(sqp_roc_curve(sc.probe.n_S, &sc.params, grid.data(), grid.size(),
                             0, 1.0, threads, coh.data()),
               rc))
        return rc;

    Table t;
    t.command = "roc";
    t.header = {"p_FA",  "p_MD_opt", "p_MD_coh",     "t_opt",
                "r_opt", "t_coh",    "reachable",    "log10_p_FA",
                "log10_p_MD_opt",    "log10_p_MD_coh"};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        t.rows.push_back({number_cell(kProbFmt, grid[i]),
                          number_cell(kProbFmt, opt[i].p_md),
                          number_cell(kProbFmt, coh[i].p_md),
                          number_cell(kCoordFmt, opt[i].t),
                          number_cell(kCoordFmt, opt[i].r),
                          number_cell(kCoordFmt, coh[i].t),
                          flag_cell(opt[i].reachable != 0 && coh[i].reachable != 0),
                          number_cell(kCoordFmt, std::log10(grid[i])),
                          number_cell(kCoordFmt, to_log10(opt[i].log_p_md)),
                          number_cell(kCoordFmt, to_log10(coh[i].log_p_md))});
    }
    return emit(t, g, sc);
}

int cmd_mc_validate(const GlobalOpts& g, std::uint64_t trials) {
    if (trials < 10000)
        return fail_input("mc-validate: trials must be at least 10000");
    LoadedScenario sc;
    if (int rc = load_scenario(g, sc)) return rc;

    int rc = 0;
    sqp_probe probe{sc.probe.n_S, sc.probe.r};
    sqp_test_outcome outcome;
    if (sc.fixed_r) {
        if (!check(sqp_optimal_threshold(&probe, &sc.params, &outcome), rc))
            return rc;
    } else {
        sqp_optimization_result res;
        if (!check(sqp_optimize_squeezing(probe.n_S, &sc.params, &res), rc))
            return rc;
        probe.r = res.r_star;
        outcome = res.outcome;
    }

    sqp_mc_estimate fa, md;
    if (!check(sqp_simulate_error_probabilities(&probe, &sc.params, outcome.t,
                                                trials, g.seed,
                                                resolve_threads(g.threads), &fa,
                                                &md),
               rc))
        return rc;

    // z-scores against the analytic binomial spread
    const double n = double(trials);
    const double se_fa = std::sqrt(outcome.p_fa * (1.0 - outcome.p_fa) / n);
    const double se_md = std::sqrt(outcome.p_md * (1.0 - outcome.p_md) / n);
    const double z_fa = (fa.p_hat - outcome.p_fa) / se_fa;
    const double z_md = (md.p_hat - outcome.p_md) / se_md;

    Table t;
    t.command = "mc-validate";
    t.header = {"quantity", "analytic", "mc_estimate", "standard_error",
                "z",        "trials",   "seed"};
    const Cell trials_cell(std::to_string(trials));
    const Cell seed_cell(std::to_string(g.seed));
    t.rows.push_back({Cell("p_fa", "\"p_fa\""), number_cell(kProbFmt, outcome.p_fa),
                      number_cell(kProbFmt, fa.p_hat), number_cell(kProbFmt, se_fa),
                      number_cell("%.6g", z_fa), trials_cell, seed_cell});
    t.rows.push_back({Cell("p_md", "\"p_md\""), number_cell(kProbFmt, outcome.p_md),
                      number_cell(kProbFmt, md.p_hat), number_cell(kProbFmt, se_md),
                      number_cell("%.6g", z_md), trials_cell, seed_cell});
    if (int erc = emit(t, g, sc)) return erc;
    return (std::fabs(z_fa) > 4.0 || std::fabs(z_md) > 4.0) ? 4 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian discrimination of thermal-loss channels with "
                 "displaced-squeezed probes"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    app.add_option("--scenario", g.scenario_path, "Scenario JSON file");
    app.add_option("--format", g.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    auto* out_opt = app.add_option("--out", g.out_path, "Output file (default stdout)");
    app.add_option("--seed", g.seed, "Monte Carlo seed");
    app.add_option("--threads", g.threads, "Worker threads (0 = auto)");

    auto* noise = app.add_subcommand("noise", "Receiver noise budget");

    SweepFlags fig1_flags;
    auto* fig1 = app.add_subcommand("fig1", "Optimal squeezing versus mode count");
    auto* f1a = fig1->add_option("--m-min", fig1_flags.m_min, "Mode grid start");
    auto* f1b = fig1->add_option("--m-max", fig1_flags.m_max, "Mode grid end");
    auto* f1c = fig1->add_option("--m-points", fig1_flags.m_points, "Mode grid size");
    f1a->needs(f1b)->needs(f1c);
    f1b->needs(f1a)->needs(f1c);
    f1c->needs(f1a)->needs(f1b);

    SweepFlags fig2_flags;
    auto* fig2 = app.add_subcommand("fig2", "Error probabilities versus mode count");
    auto* f2a = fig2->add_option("--m-min", fig2_flags.m_min, "Mode grid start");
    auto* f2b = fig2->add_option("--m-max", fig2_flags.m_max, "Mode grid end");
    auto* f2c = fig2->add_option("--m-points", fig2_flags.m_points, "Mode grid size");
    f2a->needs(f2b)->needs(f2c);
    f2b->needs(f2a)->needs(f2c);
    f2c->needs(f2a)->needs(f2b);

    RocFlags roc_flags;
    auto* roc = app.add_subcommand("roc", "Receiver operating characteristic");
    roc->add_option("--M", roc_flags.m_override, "Mode count override")
        ->check(CLI::PositiveNumber);
    roc->add_option("--pfa-min", roc_flags.pfa_min, "Smallest false-alarm target");
    roc->add_option("--pfa-max", roc_flags.pfa_max, "Largest false-alarm target");
    roc->add_option("--pfa-points", roc_flags.pfa_points, "Grid size");

    std::uint64_t trials = 1000000;
    auto* mcv = app.add_subcommand("mc-validate",
                                   "Monte Carlo check of analytic probabilities");
    mcv->add_option("--trials", trials, "Simulated trials per hypothesis");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    g.out_given = out_opt->count() > 0;

    if (noise->parsed()) return cmd_noise(g);
    if (fig1->parsed()) return run_sweep(g, fig1_flags, false);
    if (fig2->parsed()) return run_sweep(g, fig2_flags, true);
    if (roc->parsed()) return cmd_roc(g, roc_flags);
    if (mcv->parsed()) return cmd_mc_validate(g, trials);
    return 2;
}
