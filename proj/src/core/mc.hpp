#pragma once

// Counter-based Monte Carlo validation of the threshold test. Every sample
// is a pure function of (seed, trial index, mode pair index, stream), so
// results are bit-identical across reruns and thread counts.

#include <cstdint>

#include "core/discrimination.hpp"
#include "core/probe.hpp"

namespace sqp {

// One Philox4x32-10 block: 4 output words from a 128-bit counter and 64-bit
// key. Reference constants M0 = 0xD2511F53, M1 = 0xCD9E8D57, W0 = 0x9E3779B9,
// W1 = 0xBB67AE85.
struct PhiloxBlock {
    std::uint32_t x[4];
};

PhiloxBlock philox4x32(const std::uint32_t counter[4], const std::uint32_t key[2]);

struct McEstimate {
    double p_hat;           // observed fraction
    double standard_error;  // sqrt(p_hat (1 - p_hat) / trials)
    std::uint64_t trials;
    std::uint64_t seed;
};

struct McErrorRates {
    McEstimate p_fa;  // fraction of H0 trials with z > t
    McEstimate p_md;  // fraction of H1 trials with z <= t
};

// Samples `trials` summed outcomes under each hypothesis and counts threshold
// errors. The counter layout is (mode pair, trial low word, trial high word,
// stream) with stream 0 for H0 and 1 for H1; the key is the seed. Counts are
// integers, so the estimates do not depend on `threads`. M must be integral.
McErrorRates simulate_error_probabilities(const Probe& probe, const Scenario& s,
                                          double t, std::uint64_t trials,
                                          std::uint64_t seed, int threads = 1);

struct McMoments {
    double mean;      // sample mean of the summed outcome
    double variance;  // unbiased sample variance
    std::uint64_t trials;
};

// Serial moment probe of the summed outcome under one hypothesis (stream 2),
// for checking the sampler against the analytic mean and variance.
McMoments simulate_moments(const Probe& probe, const Scenario& s,
                           bool alternative, std::uint64_t trials,
                           std::uint64_t seed);

}  // namespace sqp
