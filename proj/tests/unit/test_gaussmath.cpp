#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <vector>

#include "core/gaussmath.hpp"

#include "golden/erf_golden.inc"
#include "golden/erfc_log_golden.inc"
#include "golden/misc_golden.inc"

namespace {

double ulp(double v) { return std::nextafter(std::fabs(v), INFINITY) - std::fabs(v); }

double rel_err(double got, double want) {
    if (want == 0.0) return std::fabs(got);
    return std::fabs(got - want) / std::fabs(want);
}

double misc_value(int tag) {
    for (const auto& row : misc_golden)
        if (static_cast<int>(row.tag) == tag) return row.value;
    REQUIRE(false);
    return 0.0;
}

}  // namespace

TEST_CASE("erf matches reference values to 1e-14 absolute") {
    for (const auto& row : erf_golden) {
        CAPTURE(row.x);
        CHECK(std::fabs(sqp::erf(row.x) - row.erf) <= 1e-14);
    }
    CHECK(std::fabs(sqp::erf(1.0) - misc_value(0)) <= 1e-14);
}

TEST_CASE("erfc matches reference values to 1e-13 relative") {
    for (const auto& row : erf_golden) {
        CAPTURE(row.x);
        if (row.erfc == 0.0) {
            CHECK(sqp::erfc(row.x) == 0.0);  // underflow region, both flush
        } else {
            CHECK(rel_err(sqp::erfc(row.x), row.erfc) <= 1e-13);
        }
    }
}

TEST_CASE("erfcx matches reference values to 1e-13 relative") {
    for (const auto& row : erf_golden) {
        CAPTURE(row.x);
        CHECK(rel_err(sqp::erfcx(row.x), row.erfcx) <= 1e-13);
    }
}

TEST_CASE("erf is odd to the bit") {
    for (const auto& row : erf_golden) {
        CAPTURE(row.x);
        CHECK(sqp::erf(-row.x) == -sqp::erf(row.x));
    }
    CHECK(sqp::erf(-0.0) == 0.0);
}

TEST_CASE("erf and exp(erfc_log) sum to one within 1e-14 for |x| <= 6") {
    for (double x = -6.0; x <= 6.0 + 1e-12; x += 0.01) {
        CAPTURE(x);
        CHECK(std::fabs(sqp::erf(x) + std::exp(sqp::erfc_log(x)) - 1.0) <= 1e-14);
    }
}

TEST_CASE("erf is strictly increasing on a dense grid") {
    double prev = sqp::erf(-5.0);
    for (double x = -4.99; x <= 5.0 + 1e-12; x += 0.01) {
        double cur = sqp::erf(x);
        CAPTURE(x);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("erfc_log matches reference values") {
    for (const auto& row : erfc_log_golden) {
        CAPTURE(row.x);
        double got = sqp::erfc_log(row.x);
        double tol = std::max(1e-10 * std::fabs(row.log_erfc), 1e-14);
        CHECK(std::fabs(got - row.log_erfc) <= tol);
    }
    CHECK(sqp::erfc_log(0.0) == 0.0);
    // erfc(-50) = 2 - erfc(50); the deficit is far below one ulp of 2.
    CHECK(std::fabs(sqp::erfc_log(-50.0) - 0.69314718055994530942) <= 1e-15);
    CHECK(std::fabs(sqp::erfc_log(10.0) - misc_value(1)) <= 1e-13 * std::fabs(misc_value(1)));
}

TEST_CASE("inverse_erf solves erf to 1e-12") {
    CHECK(sqp::inverse_erf(0.0) == 0.0);
    for (double y = -0.999; y <= 0.999 + 1e-12; y += 0.007) {
        CAPTURE(y);
        double x = sqp::inverse_erf(y);
        CHECK(std::fabs(sqp::erf(x) - y) <= 1e-12);
    }
    for (double y : {0.9999, 0.999999, 1.0 - 1e-10, 1.0 - 1e-14}) {
        CAPTURE(y);
        double x = sqp::inverse_erf(y);
        CHECK(std::fabs(sqp::erf(x) - y) <= 1e-12);
        CHECK(sqp::inverse_erf(-y) == -x);  // odd by construction
    }
    CHECK(std::fabs(sqp::inverse_erf(misc_value(0)) - 1.0) <= 1e-10);
    CHECK_THROWS_AS((void)sqp::inverse_erf(1.0), std::domain_error);
    CHECK_THROWS_AS((void)sqp::inverse_erf(-1.0), std::domain_error);
    CHECK_THROWS_AS((void)sqp::inverse_erf(1.5), std::domain_error);
    CHECK_THROWS_AS((void)sqp::inverse_erf(std::nan("")), std::domain_error);
}

TEST_CASE("inverse_erf round trip to 1e-10 holds where conditioning permits") {
    // Round-tripping x -> fl(erf(x)) -> inverse loses about
    // 0.5 ulp(erf x) / erf'(x); that stays under 1e-10 only for |x| <~ 3.8.
    for (double x = -3.5; x <= 3.5 + 1e-12; x += 0.05) {
        CAPTURE(x);
        CHECK(std::fabs(sqp::inverse_erf(sqp::erf(x)) - x) <= 1e-10);
    }
    const double half_sqrt_pi = 0.88622692545275801365;
    for (double x = 3.5; x <= 5.0 + 1e-12; x += 0.05) {
        CAPTURE(x);
        double y = sqp::erf(x);
        if (y >= 1.0) break;
        double bound = (ulp(y) + 1e-15) * half_sqrt_pi * std::exp(x * x) + 1e-12;
        CHECK(std::fabs(sqp::inverse_erf(y) - x) <= bound);
    }
}

TEST_CASE("inverse_erf round trip to 1e-10 out to x = 5 [precision-limit]") {
    // Expected to fail near x ~ 4: one rounding of erf(x) already moves the
    // exact preimage by ulp(erf x) / erf'(x) > 1e-10 there. Kept as a separate
    // always-run entry so the gap stays visible instead of silently waived.
    for (double x = -5.0; x <= 5.0 + 1e-12; x += 0.05) {
        CAPTURE(x);
        CHECK(std::fabs(sqp::inverse_erf(sqp::erf(x)) - x) <= 1e-10);
    }
}

TEST_CASE("inverse_erfc_log inverts erfc_log over the deep tail") {
    CHECK(std::fabs(sqp::inverse_erfc_log(0.0)) <= 1e-15);
    for (double mag = 1e-3; mag <= 700.0; mag *= 1.2) {
        double target = -mag;
        CAPTURE(target);
        double x = sqp::inverse_erfc_log(target);
        CHECK(x >= 0.0);
        CHECK(std::fabs(sqp::erfc_log(x) - target) <= 1e-12 * mag);
    }
    CHECK_THROWS_AS((void)sqp::inverse_erfc_log(0.5), std::domain_error);
    CHECK_THROWS_AS((void)sqp::inverse_erfc_log(std::nan("")), std::domain_error);
}

TEST_CASE("gaussian_cdf behaves as a distribution function") {
    CHECK(sqp::gaussian_cdf(2.0, 2.0, 9.0) == 0.5);
    CHECK(rel_err(sqp::gaussian_cdf(3.0, 2.0, 1.0), misc_value(2)) <= 1e-14);
    double prev = -1.0;
    for (double x = -40.0; x <= 40.0 + 1e-9; x += 0.25) {
        double c = sqp::gaussian_cdf(x, 1.5, 9.0);
        CAPTURE(x);
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
        CHECK(c >= prev);
        prev = c;
        double mirror = sqp::gaussian_cdf(3.0 - x, 1.5, 9.0);
        CHECK(std::fabs(c + mirror - 1.0) <= 1e-14);
    }
    CHECK_THROWS_AS((void)sqp::gaussian_cdf(0.0, 0.0, 0.0), std::domain_error);
    CHECK_THROWS_AS((void)sqp::gaussian_cdf(0.0, 0.0, -1.0), std::domain_error);
    CHECK_THROWS_AS((void)sqp::gaussian_cdf(0.0, std::nan(""), 1.0), std::domain_error);
    CHECK_THROWS_AS((void)sqp::gaussian_cdf(std::nan(""), 0.0, 1.0), std::domain_error);
}
