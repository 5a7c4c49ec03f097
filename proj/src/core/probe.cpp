#include "core/probe.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "core/errors.hpp"

namespace sqp {

double squeezing_photons(double r) {
    if (!std::isfinite(r) || r <= 0.0 || r > 1.0) {
        throw std::domain_error("squeezing_photons: r must lie in (0, 1]");
    }
    return (r + 1.0 / r - 2.0) / 4.0;
}

double min_squeezing(double n_S) {
    if (!std::isfinite(n_S) || n_S < 0.0) {
        throw std::domain_error("min_squeezing: n_S must be >= 0");
    }
    // Conjugate of 2 n_S + 1 - 2 sqrt(n_S (n_S + 1)): identical value, no
    // cancellation for large n_S.
    return 1.0 / (2.0 * n_S + 1.0 + 2.0 * std::sqrt(n_S * (n_S + 1.0)));
}

void validate_probe(const Probe& probe) {
    if (!std::isfinite(probe.n_S) || probe.n_S < 0.0) {
        throw std::domain_error("probe: n_S must be >= 0");
    }
    (void)displacement_photons(probe);  // validates r and the photon budget
}

double displacement_photons(const Probe& probe) {
    const double f = squeezing_photons(probe.r);  // validates r
    const double n_A = probe.n_S - f;
    if (n_A < 0.0) {
        // At r = min_squeezing(n_S) the budget closes to zero; tolerate the
        // few-ulp representation slack and treat anything beyond as a real
        // violation.
        const double slack = 8.0 * std::numeric_limits<double>::epsilon() *
                             std::max(probe.n_S, f);
        if (n_A < -slack) {
            throw budget_error("probe: squeezing photons f(r) exceed the budget n_S");
        }
        return 0.0;
    }
    return n_A;
}

SummedStatistic pre_channel_statistic(const Probe& probe) {
    if (!std::isfinite(probe.n_S) || probe.n_S < 0.0) {
        throw std::domain_error("probe: n_S must be >= 0");
    }
    const double n_A = displacement_photons(probe);
    return {std::sqrt(2.0 * n_A), probe.r / 2.0};
}

SummedStatistic summed_statistic(const Probe& probe, double eta, double n_B, double M) {
    if (!std::isfinite(eta) || eta < 0.0 || eta > 1.0) {
        throw std::domain_error("summed_statistic: eta must lie in [0, 1]");
    }
    if (!std::isfinite(n_B) || n_B < 0.0) {
        throw std::domain_error("summed_statistic: n_B must be >= 0");
    }
    if (!std::isfinite(M) || M < 1.0) {
        throw std::domain_error("summed_statistic: M must be >= 1");
    }
    if (!std::isfinite(probe.n_S) || probe.n_S < 0.0) {
        throw std::domain_error("probe: n_S must be >= 0");
    }
    const double n_A = displacement_photons(probe);
    // Keep these expressions verbatim: the eta = 0 specialization must agree
    // bit-for-bit (0-multiplications collapse exactly).
    const double mean = M * std::sqrt(2.0 * eta * n_A);
    const double variance = M * (2.0 * n_B + 1.0 - eta * (1.0 - probe.r)) / 2.0;
    return {mean, variance};
}

}  // namespace sqp
