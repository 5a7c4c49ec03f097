#include "core/mc.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "core/parallel.hpp"

namespace sqp {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;
constexpr double kTwoPi = 6.28318530717958647693;

inline void philox_round(std::uint32_t x[4], std::uint32_t k0, std::uint32_t k1) {
    const std::uint64_t p0 = std::uint64_t(kPhiloxM0) * x[0];
    const std::uint64_t p1 = std::uint64_t(kPhiloxM1) * x[2];
    const std::uint32_t y1 = x[1];
    const std::uint32_t y3 = x[3];
    x[0] = std::uint32_t(p1 >> 32) ^ y1 ^ k0;
    x[1] = std::uint32_t(p1);
    x[2] = std::uint32_t(p0 >> 32) ^ y3 ^ k1;
    x[3] = std::uint32_t(p0);
}

// Uniform in (0, 1), never hitting either endpoint: 53 input bits centered
// on the grid, so log(u) stays finite.
inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (std::uint64_t(hi) << 32) | lo;
    return (double(bits >> 11) + 0.5) * 0x1.0p-53;
}

struct ModeLaw {
    double mean;  // per-mode post-channel mean
    double sd;    // per-mode post-channel standard deviation
};

ModeLaw mode_law(const Probe& probe, double eta, double n_B) {
    const double n_A = displacement_photons(probe);
    ModeLaw law;
    law.mean = std::sqrt(2.0 * eta * n_A);
    law.sd = std::sqrt((2.0 * n_B + 1.0 - eta * (1.0 - probe.r)) / 2.0);
    return law;
}

// Summed outcome of one trial: M per-mode normals, one Box-Muller pair per
// Philox block, accumulated in ascending pair order.
double sample_z(std::uint64_t trial, std::uint32_t stream, std::uint64_t modes,
                const ModeLaw& law, const std::uint32_t key[2]) {
    const std::uint64_t pairs = (modes + 1) / 2;
    double z = 0.0;
    for (std::uint64_t j = 0; j < pairs; ++j) {
        const std::uint32_t counter[4] = {std::uint32_t(j), std::uint32_t(trial),
                                          std::uint32_t(trial >> 32), stream};
        const PhiloxBlock b = philox4x32(counter, key);
        const double u1 = to_unit(b.x[0], b.x[1]);
        const double u2 = to_unit(b.x[2], b.x[3]);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = kTwoPi * u2;
        z += law.mean + law.sd * (radius * std::cos(angle));
        if (2 * j + 1 < modes)
            z += law.mean + law.sd * (radius * std::sin(angle));
    }
    return z;
}

std::uint64_t integral_modes(double M) {
    if (!(M == std::floor(M)))
        throw std::domain_error("mc: M must be an integer mode count");
    if (M > 9.007199254740992e15)
        throw std::domain_error("mc: M too large to simulate");
    return std::uint64_t(M);
}

McEstimate make_estimate(std::uint64_t count, std::uint64_t trials,
                         std::uint64_t seed) {
    McEstimate est;
    est.p_hat = double(count) / double(trials);
    est.standard_error = std::sqrt(est.p_hat * (1.0 - est.p_hat) / double(trials));
    est.trials = trials;
    est.seed = seed;
    return est;
}

}  // namespace

PhiloxBlock philox4x32(const std::uint32_t counter[4], const std::uint32_t key[2]) {
    PhiloxBlock b{{counter[0], counter[1], counter[2], counter[3]}};
    std::uint32_t k0 = key[0];
    std::uint32_t k1 = key[1];
    for (int round = 0; round < 10; ++round) {
        philox_round(b.x, k0, k1);
        k0 += kPhiloxW0;
        k1 += kPhiloxW1;
    }
    return b;
}

McErrorRates simulate_error_probabilities(const Probe& probe, const Scenario& s,
                                          double t, std::uint64_t trials,
                                          std::uint64_t seed, int threads) {
    validate_probe(probe);
    validate_scenario(s);
    if (!std::isfinite(t))
        throw std::domain_error("mc: threshold must be finite");
    if (trials == 0)
        throw std::domain_error("mc: trials must be positive");
    const std::uint64_t modes = integral_modes(s.M);

    const ModeLaw law0 = mode_law(probe, s.eta0, s.n_B);
    const ModeLaw law1 = mode_law(probe, s.eta1, s.n_B);
    const std::uint32_t key[2] = {std::uint32_t(seed), std::uint32_t(seed >> 32)};

    // integer counts commute, so the totals are independent of the sharding
    std::atomic<std::uint64_t> fa_count{0};
    std::atomic<std::uint64_t> md_count{0};
    parallel_for(trials, threads, [&](std::size_t i) {
        const std::uint64_t trial = i;
        const double z0 = sample_z(trial, 0, modes, law0, key);
        const double z1 = sample_z(trial, 1, modes, law1, key);
        std::uint64_t fa = (z0 > t) ? 1 : 0;
        std::uint64_t md = (z1 > t) ? 0 : 1;
        if (fa) fa_count.fetch_add(1, std::memory_order_relaxed);
        if (md) md_count.fetch_add(1, std::memory_order_relaxed);
    });

    McErrorRates rates;
    rates.p_fa = make_estimate(fa_count.load(), trials, seed);
    rates.p_md = make_estimate(md_count.load(), trials, seed);
    return rates;
}

McMoments simulate_moments(const Probe& probe, const Scenario& s,
                           bool alternative, std::uint64_t trials,
                           std::uint64_t seed) {
    validate_probe(probe);
    validate_scenario(s);
    if (trials < 2)
        throw std::domain_error("mc: moment probe needs at least 2 trials");
    const std::uint64_t modes = integral_modes(s.M);
    const ModeLaw law = mode_law(probe, alternative ? s.eta1 : s.eta0, s.n_B);
    const std::uint32_t key[2] = {std::uint32_t(seed), std::uint32_t(seed >> 32)};

    // Welford accumulation, serial by design
    double mean = 0.0;
    double m2 = 0.0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        const double z = sample_z(i, 2, modes, law, key);
        const double delta = z - mean;
        mean += delta / double(i + 1);
        m2 += delta * (z - mean);
    }

    McMoments out;
    out.mean = mean;
    out.variance = m2 / double(trials - 1);
    out.trials = trials;
    return out;
}

}  // namespace sqp
