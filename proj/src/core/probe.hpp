#pragma once

// Photon-budget algebra for displaced-squeezed probes and the Gaussian
// statistics of the summed homodyne outcome after a thermal-loss channel.
//
// Conventions: quadrature variance of the vacuum is 1/2; the squeezing
// parameter r lies in (0, 1] with r = 1 the coherent (unsqueezed) state;
// displacement is real and along the squeezed quadrature.

namespace sqp {

struct Probe {
    double n_S;  // mean total signal photons per mode, >= 0
    double r;    // position-quadrature squeezing parameter, r_min(n_S) <= r <= 1
};

struct SummedStatistic {
    double mean;      // mean of the summed M-mode outcome, >= 0
    double variance;  // variance of the summed outcome, > 0
};

// Photons spent generating the squeezing: f(r) = (r + 1/r - 2)/4.
// Strictly decreasing on (0, 1]; f(1) = 0. Throws for r outside (0, 1].
double squeezing_photons(double r);

// Smallest admissible r for a photon budget n_S: the root of f(r) = n_S in
// (0, 1]. Evaluated in the conjugate form 1/(2 n_S + 1 + 2 sqrt(n_S (n_S+1)))
// so f(min_squeezing(n_S)) = n_S holds to ~1e-13 absolute even at n_S = 1e3.
double min_squeezing(double n_S);

// Throws std::domain_error / budget_error unless n_S >= 0, 0 < r <= 1 and
// n_S >= f(r).
void validate_probe(const Probe& probe);

// Displacement photons n_A = n_S - f(r). Roundoff at r = min_squeezing(n_S)
// is absorbed (a few ulp below zero snaps to zero); genuine budget violations
// throw budget_error.
double displacement_photons(const Probe& probe);

// Single-mode homodyne outcome before the channel: mean sqrt(2 n_A),
// variance r/2.
SummedStatistic pre_channel_statistic(const Probe& probe);

// Summed outcome of M modes after a transmissivity-eta channel with n_B mean
// thermal photons per mode:
//   mean     = M sqrt(2 eta n_A)
//   variance = M (2 n_B + 1 - eta (1 - r)) / 2
// M is real-valued >= 1 (integer in physical scenarios; sweeps interpolate).
SummedStatistic summed_statistic(const Probe& probe, double eta, double n_B, double M);

}  // namespace sqp
