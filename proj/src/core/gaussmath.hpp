#pragma once

// Error-function family and Gaussian CDF, accurate in bulk and far tail,
// linear and log domain. Self-contained rational approximations; no libm
// erf/erfc so results are bit-stable across platforms.

namespace sqp {

// erf(x); absolute error <= 1e-14, odd symmetry exact. Throws std::domain_error
// for non-finite x.
double erf(double x);

// erfc(x) = 1 - erf(x), without cancellation for large x. Underflows to 0 past
// x ~ 26.5.
double erfc(double x);

// erfcx(x) = exp(x^2) * erfc(x). Overflows for x < -26.628.
double erfcx(double x);

// ln(erfc(x)). Range (-inf, ln 2]. Relative error of the log value <= 1e-10
// (measured ~1e-15) for x in [-60, 200]; no intermediate underflow for any
// finite x up to ~1e154.
double erfc_log(double x);

// Inverse of erf on (-1, 1): returns x with |erf(x) - y| <= 1e-12. Rational
// initial approximation refined by Newton iterations on erf. Throws
// std::domain_error for |y| >= 1.
double inverse_erf(double y);

// Solves erfc_log(x) = log_target for x >= 0, given log_target <= 0.
// Newton in log space; produces erfc(x) within ~1e-13 relative of the target,
// far tighter than inverse_erf can deliver for small probabilities.
double inverse_erfc_log(double log_target);

// CDF of N(mean, variance) at x: 0.5 * (1 + erf((x - mean)/sqrt(2*variance))).
// Throws std::domain_error if variance <= 0 or any argument is non-finite.
double gaussian_cdf(double x, double mean, double variance);

}  // namespace sqp
