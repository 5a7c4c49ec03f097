#include "core/scenario.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

#include "core/errors.hpp"

namespace sqp {

namespace {

using nlohmann::json;

// 1-based line/column of a 1-based byte offset, for parse diagnostics.
std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    const std::size_t stop = byte > 0 ? byte - 1 : 0;
    for (std::size_t i = 0; i < stop && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

[[noreturn]] void fail(const std::string& msg) { throw parse_error("scenario: " + msg); }

std::string joined(const char* path, const char* key) {
    std::string s(path);
    if (!s.empty()) s += '.';
    s += key;
    return s;
}

void check_keys(const json& obj, const char* path,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) known = true;
        if (!known) fail("unknown key \"" + joined(path, it.key().c_str()) + "\"");
    }
}

const json& require_object(const json& obj, const char* path, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) fail("missing key \"" + joined(path, key) + "\"");
    if (!it->is_object()) fail("\"" + joined(path, key) + "\" must be an object");
    return *it;
}

double require_number(const json& obj, const char* path, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) fail("missing key \"" + joined(path, key) + "\"");
    if (!it->is_number()) fail("\"" + joined(path, key) + "\" must be a number");
    return it->get<double>();
}

double require_integer(const json& obj, const char* path, const char* key) {
    const double v = require_number(obj, path, key);
    if (!(v == std::floor(v)))
        fail("\"" + joined(path, key) + "\" must be an integer");
    return v;
}

std::string require_string(const json& obj, const char* path, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) fail("missing key \"" + joined(path, key) + "\"");
    if (!it->is_string()) fail("\"" + joined(path, key) + "\" must be a string");
    return it->get<std::string>();
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

}  // namespace

ScenarioFile parse_scenario(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_col(text, e.byte);
        std::ostringstream os;
        os << "scenario: parse error at line " << line << ", column " << col;
        throw parse_error(os.str());
    }
    if (!root.is_object()) fail("top level must be an object");
    check_keys(root, "",
               {"schema", "probe", "channels", "background", "test", "output"});

    const std::string schema = require_string(root, "", "schema");
    if (schema != "sqprobe/scenario-v1")
        fail("unsupported schema \"" + schema + "\"");

    ScenarioFile out;

    const json& probe = require_object(root, "", "probe");
    check_keys(probe, "probe", {"n_S", "r"});
    out.probe.n_S = require_number(probe, "probe", "n_S");
    out.fixed_r = probe.contains("r");
    out.probe.r = out.fixed_r ? require_number(probe, "probe", "r") : 1.0;

    const json& channels = require_object(root, "", "channels");
    check_keys(channels, "channels", {"eta0", "eta1"});
    out.scenario.eta0 = require_number(channels, "channels", "eta0");
    out.scenario.eta1 = require_number(channels, "channels", "eta1");

    const json& background = require_object(root, "", "background");
    check_keys(background, "background", {"n_B", "receiver"});
    const bool has_nb = background.contains("n_B");
    out.has_receiver = background.contains("receiver");
    if (has_nb == out.has_receiver)
        fail("\"background\" must contain exactly one of \"n_B\" or \"receiver\"");
    if (has_nb) {
        out.scenario.n_B = require_number(background, "background", "n_B");
        out.receiver = ReceiverConfig{};
    } else {
        const json& rcv = require_object(background, "background", "receiver");
        const char* rp = "background.receiver";
        check_keys(rcv, rp,
                   {"wavelength_nm", "sky_brightness", "aperture_radius_m",
                    "fov_sr", "bandwidth_hz", "filter_nm"});
        out.receiver.wavelength_nm = require_number(rcv, rp, "wavelength_nm");
        out.receiver.sky_brightness = require_number(rcv, rp, "sky_brightness");
        out.receiver.aperture_radius_m = require_number(rcv, rp, "aperture_radius_m");
        out.receiver.fov_sr = require_number(rcv, rp, "fov_sr");
        out.receiver.bandwidth_hz = require_number(rcv, rp, "bandwidth_hz");
        out.receiver.filter_nm = require_number(rcv, rp, "filter_nm");
        out.scenario.n_B = background_photons(out.receiver);
    }

    const json& test = require_object(root, "", "test");
    check_keys(test, "test", {"M", "M_grid", "prior0"});
    const bool has_m = test.contains("M");
    const bool has_grid = test.contains("M_grid");
    if (has_m == has_grid)
        fail("\"test\" must contain exactly one of \"M\" or \"M_grid\"");
    if (has_m) {
        const double m = require_integer(test, "test", "M");
        if (m < 1.0) fail("\"test.M\" must be a positive integer");
        out.m_values = {m};
    } else {
        const json& grid = require_object(test, "test", "M_grid");
        check_keys(grid, "test.M_grid", {"min", "max", "points"});
        const double lo = require_integer(grid, "test.M_grid", "min");
        const double hi = require_integer(grid, "test.M_grid", "max");
        const double pts = require_integer(grid, "test.M_grid", "points");
        if (lo < 1.0) fail("\"test.M_grid.min\" must be a positive integer");
        if (hi < lo) fail("\"test.M_grid.max\" must be at least \"test.M_grid.min\"");
        if (pts < 2.0 || pts > 100000.0)
            fail("\"test.M_grid.points\" must lie in [2, 100000]");
        out.m_values = mode_grid(lo, hi, int(pts));
    }
    out.scenario.M = out.m_values.front();
    out.scenario.prior0 =
        test.contains("prior0") ? require_number(test, "test", "prior0") : 0.5;

    out.output_format = "csv";
    out.output_path.clear();
    if (root.contains("output")) {
        const json& output = require_object(root, "", "output");
        check_keys(output, "output", {"format", "path"});
        if (output.contains("format")) {
            out.output_format = require_string(output, "output", "format");
            if (out.output_format != "csv" && out.output_format != "json")
                fail("\"output.format\" must be \"csv\" or \"json\"");
        }
        if (output.contains("path"))
            out.output_path = require_string(output, "output", "path");
    }

    // value-domain checks ride on the core validators
    validate_scenario(out.scenario);
    if (out.fixed_r) validate_probe(out.probe);
    else if (!(out.probe.n_S >= 0.0) || !std::isfinite(out.probe.n_S))
        throw std::domain_error("probe: n_S must be finite and nonnegative");

    return out;
}

ScenarioFile load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("scenario: cannot open file \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

}  // namespace sqp
