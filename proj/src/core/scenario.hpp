#pragma once

// Scenario files: JSON descriptions of a probe, channel pair, background,
// and test configuration. Strict schema "sqprobe/scenario-v1": unknown keys
// are rejected, parse errors carry line and column, semantic errors carry the
// offending key path.

#include <string>
#include <vector>

#include "core/discrimination.hpp"
#include "core/probe.hpp"
#include "core/receiver.hpp"

namespace sqp {

struct ScenarioFile {
    Probe probe;        // probe.r meaningful only when fixed_r
    bool fixed_r;       // true when the file pins the squeezing parameter
    Scenario scenario;  // M holds the first grid value
    std::vector<double> m_values;  // ascending integral mode counts, deduped
    bool has_receiver;
    ReceiverConfig receiver;    // source of scenario.n_B when has_receiver
    std::string output_format;  // "csv" or "json"
    std::string output_path;    // empty selects stdout
};

// Parses scenario JSON text. Structural problems (syntax, missing or unknown
// keys, wrong types, schema mismatch) throw parse_error; value-domain
// problems propagate from the core validators as std::domain_error or
// budget_error.
ScenarioFile parse_scenario(const std::string& text);

// parse_scenario on the contents of `path`; unreadable files throw
// parse_error.
ScenarioFile load_scenario(const std::string& path);

}  // namespace sqp
