#pragma once

#include <stdexcept>
#include <string>

namespace sqp {

// Photon budget violated: requested squeezing costs more photons than n_S provides.
class budget_error : public std::domain_error {
public:
    explicit budget_error(const std::string& what) : std::domain_error(what) {}
};

// Scenario file rejected: malformed document or a field violating its invariant.
class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sqp
