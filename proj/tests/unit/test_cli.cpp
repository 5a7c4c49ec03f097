#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include <sqprobe/sqprobe.h>

namespace {

const std::string kCli = SQPROBE_CLI_PATH;
const std::string kScenarios = SQPROBE_SCENARIO_DIR;

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args) {
    RunResult res{-1, {}};
    FILE* pipe = popen((kCli + " " + args + " 2>/dev/null").c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, n);
    const int status = pclose(pipe);
    if (WIFEXITED(status)) res.exit_code = WEXITSTATUS(status);
    return res;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

std::vector<std::string> fields_of(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

double as_double(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

// requantize through the CLI probability format before comparing
double prob_quantized(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.8e", v);
    return std::strtod(buf, nullptr);
}

double preset_background() {
    const sqp_receiver_config cfg{800.0, 0.15, 0.1, 3e-6, 1e8, 1e-4};
    double n_B = 0.0;
    REQUIRE(sqp_background_photons(&cfg, &n_B) == SQP_OK);
    return n_B;
}

struct TempFile {
    std::string path;
    TempFile(const std::string& name, const std::string& content) : path(name) {
        std::ofstream f(path, std::ios::binary);
        f << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

bool close_rel(double got, double want, double tol) {
    return std::fabs(got - want) <= tol * std::fabs(want);
}

}  // namespace

TEST_CASE("noise reports the receiver budget") {
    const auto res = run("--scenario " + kScenarios + "/illumination.json noise");
    REQUIRE(res.exit_code == 0);
    CHECK(res.out.find('\r') == std::string::npos);

    const auto lines = lines_of(res.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "collection_parameter,n_B");
    const auto row = fields_of(lines[1]);
    REQUIRE(row.size() == 2);
    CHECK(close_rel(as_double(row[0]), 3e-20, 1e-5));
    CHECK(close_rel(as_double(row[1]), preset_background(), 1e-5));
}

TEST_CASE("noise refuses scenarios without a receiver") {
    const TempFile tmp("cli_tmp_plain.json", R"({
      "schema": "sqprobe/scenario-v1",
      "probe": {"n_S": 0.1},
      "channels": {"eta0": 0.0, "eta1": 0.2},
      "background": {"n_B": 0.057},
      "test": {"M": 10}
    })");
    CHECK(run("--scenario " + tmp.path + " noise").exit_code == 2);
}

TEST_CASE("fig1 rows survive a round trip through the C API") {
    const auto res = run("--scenario " + kScenarios +
                         "/illumination.json fig1 --m-min 1 --m-max 100 --m-points 5");
    REQUIRE(res.exit_code == 0);
    const auto lines = lines_of(res.out);
    REQUIRE(lines.size() == 6);
    CHECK(lines[0] ==
          "M,optimal_dB,p_err_opt,p_err_coh,t_opt,r_opt,t_coh,"
          "log10_p_err_opt,log10_p_err_coh");

    sqp_scenario_params params{0.0, 0.2, preset_background(), 1.0, 0.5};
    for (size_t i = 1; i < lines.size(); ++i) {
        const auto row = fields_of(lines[i]);
        REQUIRE(row.size() == 9);
        params.M = as_double(row[0]);
        const double db = as_double(row[1]);
        const double p_opt = as_double(row[2]);
        const double p_coh = as_double(row[3]);
        const double t_opt = as_double(row[4]);
        const double r_opt = as_double(row[5]);
        const double t_coh = as_double(row[6]);
        CAPTURE(params.M);

        CHECK(r_opt > 0.0);
        CHECK(r_opt <= 1.0);
        CHECK(p_opt <= p_coh);
        if (r_opt == 1.0) {
            CHECK(db == 0.0);
        } else {
            CHECK(close_rel(db, -10.0 * std::log10(r_opt), 1e-12));
        }

        // coordinates print shortest-exact, so re-evaluation reproduces the
        // published probabilities after the same 9-digit quantization
        const sqp_probe opt_probe{0.1, r_opt};
        sqp_test_outcome at{};
        REQUIRE(sqp_error_probabilities(&opt_probe, &params, t_opt, &at) == SQP_OK);
        CHECK(close_rel(prob_quantized(at.p_err), p_opt, 1e-9));

        const sqp_probe coh_probe{0.1, 1.0};
        REQUIRE(sqp_error_probabilities(&coh_probe, &params, t_coh, &at) == SQP_OK);
        CHECK(close_rel(prob_quantized(at.p_err), p_coh, 1e-9));
    }
}

TEST_CASE("fig2 ratio column grows with the mode count") {
    const auto res = run("--scenario " + kScenarios +
                         "/reading.json fig2 --m-min 10 --m-max 100 --m-points 3");
    REQUIRE(res.exit_code == 0);
    const auto lines = lines_of(res.out);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] ==
          "M,p_err_opt,p_err_coh,optimal_dB,log10_ratio,t_opt,r_opt,t_coh,"
          "log10_p_err_opt,log10_p_err_coh");

    sqp_scenario_params params{0.9, 0.98, preset_background(), 1.0, 0.5};
    double prev_ratio = -1.0;
    for (size_t i = 1; i < lines.size(); ++i) {
        const auto row = fields_of(lines[i]);
        REQUIRE(row.size() == 10);
        params.M = as_double(row[0]);
        const double p_opt = as_double(row[1]);
        const double ratio = as_double(row[4]);
        const double t_opt = as_double(row[5]);
        const double r_opt = as_double(row[6]);
        CAPTURE(params.M);

        CHECK(ratio > prev_ratio);
        prev_ratio = ratio;

        const sqp_probe probe{1.0, r_opt};
        sqp_test_outcome at{};
        REQUIRE(sqp_error_probabilities(&probe, &params, t_opt, &at) == SQP_OK);
        CHECK(close_rel(prob_quantized(at.p_err), p_opt, 1e-9));
    }
}

TEST_CASE("roc output is reachable, dominated, and reproducible") {
    const auto res = run("--scenario " + kScenarios +
                         "/reading_roc.json roc --pfa-min 1e-4 --pfa-max 0.5 "
                         "--pfa-points 7");
    REQUIRE(res.exit_code == 0);
    const auto lines = lines_of(res.out);
    REQUIRE(lines.size() == 8);
    CHECK(lines[0] ==
          "p_FA,p_MD_opt,p_MD_coh,t_opt,r_opt,t_coh,reachable,log10_p_FA,"
          "log10_p_MD_opt,log10_p_MD_coh");

    sqp_scenario_params params{0.9, 0.98, preset_background(), 500.0, 0.5};
    double prev_fa = 0.0;
    for (size_t i = 1; i < lines.size(); ++i) {
        const auto row = fields_of(lines[i]);
        REQUIRE(row.size() == 10);
        const double p_fa = as_double(row[0]);
        const double p_md_opt = as_double(row[1]);
        const double p_md_coh = as_double(row[2]);
        const double t_opt = as_double(row[3]);
        const double r_opt = as_double(row[4]);
        CAPTURE(p_fa);

        CHECK(p_fa > prev_fa);
        prev_fa = p_fa;
        CHECK(row[6] == "1");
        CHECK(p_md_opt <= p_md_coh);

        // the threshold in the row reproduces the published target
        const sqp_probe probe{1.0, r_opt};
        sqp_test_outcome at{};
        REQUIRE(sqp_error_probabilities(&probe, &params, t_opt, &at) == SQP_OK);
        CHECK(close_rel(at.p_fa, p_fa, 1e-8));
    }
}

TEST_CASE("roc of a symmetric channel pair is the diagonal") {
    const TempFile tmp("cli_tmp_diag.json", R"({
      "schema": "sqprobe/scenario-v1",
      "probe": {"n_S": 0.3},
      "channels": {"eta0": 0.5, "eta1": 0.5},
      "background": {"n_B": 0.1},
      "test": {"M": 10}
    })");
    const auto res = run("--scenario " + tmp.path + " roc --pfa-min 0.05 "
                         "--pfa-max 0.8 --pfa-points 5");
    REQUIRE(res.exit_code == 0);
    const auto lines = lines_of(res.out);
    REQUIRE(lines.size() == 6);
    for (size_t i = 1; i < lines.size(); ++i) {
        const auto row = fields_of(lines[i]);
        CHECK(std::fabs(as_double(row[1]) + as_double(row[0]) - 1.0) <= 1e-6);
    }
}

TEST_CASE("mc-validate agrees with the analytic rates and repeats itself") {
    const TempFile tmp("cli_tmp_mc.json", R"({
      "schema": "sqprobe/scenario-v1",
      "probe": {"n_S": 0.1},
      "channels": {"eta0": 0.0, "eta1": 0.2},
      "background": {"n_B": 0.057},
      "test": {"M": 10}
    })");
    const std::string cmd =
        "--scenario " + tmp.path + " --seed 5 mc-validate --trials 20000";
    const auto first = run(cmd);
    REQUIRE(first.exit_code == 0);
    const auto lines = lines_of(first.out);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "quantity,analytic,mc_estimate,standard_error,z,trials,seed");
    for (size_t i = 1; i < lines.size(); ++i) {
        const auto row = fields_of(lines[i]);
        REQUIRE(row.size() == 7);
        CHECK(std::fabs(as_double(row[4])) <= 4.0);
        CHECK(row[5] == "20000");
        CHECK(row[6] == "5");
    }
    CHECK(fields_of(lines[1])[0] == "p_fa");
    CHECK(fields_of(lines[2])[0] == "p_md");

    const auto second = run(cmd);
    CHECK(second.exit_code == 0);
    CHECK(second.out == first.out);

    const auto reseeded = run("--scenario " + tmp.path +
                              " --seed 6 mc-validate --trials 20000");
    CHECK(reseeded.out != first.out);

    CHECK(run("--scenario " + tmp.path + " mc-validate --trials 10").exit_code == 2);
}

TEST_CASE("thread count does not change published numbers") {
    const std::string base = "--scenario " + kScenarios +
                             "/illumination.json fig1 --m-min 1 --m-max 10 "
                             "--m-points 2";
    const auto serial = run(base + " --threads 1");
    const auto forked = run(base + " --threads 3");
    REQUIRE(serial.exit_code == 0);
    REQUIRE(forked.exit_code == 0);
    CHECK(serial.out == forked.out);
}

TEST_CASE("json output mirrors the table") {
    const auto res = run("--scenario " + kScenarios +
                         "/illumination.json --format json noise");
    REQUIRE(res.exit_code == 0);
    CHECK(res.out.rfind("{\"command\":\"noise\"", 0) == 0);
    CHECK(res.out.find("\"rows\":[") != std::string::npos);
    CHECK(res.out.find("\"n_B\":") != std::string::npos);

    const auto fig = run("--scenario " + kScenarios +
                         "/illumination.json --format json fig1 --m-min 1 "
                         "--m-max 1 --m-points 2");
    REQUIRE(fig.exit_code == 0);
    CHECK(fig.out.find("\"M\":1") != std::string::npos);
    CHECK(fig.out.find("\"optimal_dB\":") != std::string::npos);
}

TEST_CASE("output lands in the requested file") {
    const std::string path = "cli_tmp_out.csv";
    const auto res = run("--scenario " + kScenarios + "/illumination.json --out " +
                         path + " noise");
    REQUIRE(res.exit_code == 0);
    CHECK(res.out.empty());
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::string first_line;
    std::getline(f, first_line);
    CHECK(first_line == "collection_parameter,n_B");
    f.close();
    std::remove(path.c_str());
}

TEST_CASE("input failures exit with code 2") {
    CHECK(run("fig1").exit_code == 2);  // no scenario given
    CHECK(run("--scenario /nonexistent.json fig1").exit_code == 2);
    CHECK(run("--scenario " + kScenarios + "/illumination.json frobnicate").exit_code == 2);
    CHECK(run("--scenario " + kScenarios +
              "/illumination.json fig1 --m-min 5").exit_code == 2);  // incomplete grid
    CHECK(run("--scenario " + kScenarios +
              "/illumination.json roc --pfa-min 0.5 --pfa-max 0.1").exit_code == 2);

    const TempFile bad("cli_tmp_bad.json", "{ nope");
    CHECK(run("--scenario " + bad.path + " fig1").exit_code == 2);
}

TEST_CASE("domain failures exit with code 3") {
    const TempFile boundary("cli_tmp_prior.json", R"({
      "schema": "sqprobe/scenario-v1",
      "probe": {"n_S": 0.1},
      "channels": {"eta0": 0.0, "eta1": 0.2},
      "background": {"n_B": 0.057},
      "test": {"M": 10, "prior0": 0.0}
    })");
    CHECK(run("--scenario " + boundary.path + " fig1").exit_code == 3);

    const TempFile starved("cli_tmp_budget.json", R"({
      "schema": "sqprobe/scenario-v1",
      "probe": {"n_S": 0.1, "r": 0.2},
      "channels": {"eta0": 0.0, "eta1": 0.2},
      "background": {"n_B": 0.057},
      "test": {"M": 10}
    })");
    CHECK(run("--scenario " + starved.path + " fig1").exit_code == 3);
}
