#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dosc/errors.hpp"
#include "dosc/log_scaled.hpp"
#include "dosc/oracles/reference.hpp"
#include "dosc/special_functions.hpp"

#include <cmath>
#include <numbers>

using namespace dosc;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("log-scaled values: sign, zero and products far beyond double range") {
    const LogScaled z = LogScaled::zero();
    CHECK(z.is_zero());
    CHECK(z.value() == 0.0);
    CHECK(LogScaled::from_value(0.0).is_zero());

    const LogScaled a = LogScaled::from_value(-3.5);
    CHECK(a.sign == -1);
    CHECK(a.value() == doctest::Approx(-3.5).epsilon(1e-15));

    const LogScaled big = LogScaled::from_log(1, 9.0e5);
    const LogScaled tiny = LogScaled::from_log(-1, -9.0e5);
    const LogScaled prod = big * tiny;
    CHECK(prod.sign == -1);
    CHECK(prod.log_mag == doctest::Approx(0.0).epsilon(1e-12));
    const LogScaled quo = big / tiny;
    CHECK(std::isfinite(quo.log_mag));
    CHECK(quo.log_mag == doctest::Approx(1.8e6));
    CHECK(ratio(LogScaled::from_value(6.0), LogScaled::from_value(-2.0)) == doctest::Approx(-3.0));
}

TEST_CASE("hyp1f1 at w = 0 is one") {
    for (double a : {-2.5, -0.3, 0.0, 0.5, 2.0, 7.25}) {
        for (double b : {0.5, 1.5}) {
            const LogScaled v = hyp1f1(a, b, 0.0);
            CHECK(v.sign == 1);
            CHECK(v.log_mag == 0.0);
        }
    }
}

TEST_CASE("hyp1f1 closed forms and pinned values") {
    CHECK(rel(hyp1f1(0.5, 0.5, 1.0).value(), kE) < 1e-14);
    // √π e erf(1)/2
    const double closed = std::sqrt(kPi) * kE * 0.8427007929497149 / 2.0;
    CHECK(rel(hyp1f1(1.0, 1.5, 1.0).value(), closed) < 1e-13);
    CHECK(rel(hyp1f1(1.0, 1.5, 1.0).value(), 2.030078469278705) < 1e-13);
    CHECK(rel(hyp1f1(2.0, 0.5, 1.0).value(), 12.15039234639352) < 1e-13);
    CHECK(hyp1f1(2.0, 0.5, 1.0).value() == doctest::Approx(12.15039).epsilon(1e-5));
}

TEST_CASE("hyp1f1 with alpha = beta is e^w at large arguments") {
    for (double w : {10.0, 300.0, 5000.0}) {
        const LogScaled v = hyp1f1(0.5, 0.5, w);
        CHECK(v.sign == 1);
        CHECK(v.log_mag == doctest::Approx(w).epsilon(1e-15));
    }
}

TEST_CASE("hyp1f1 agrees with the MPFR series across branches") {
    for (double a : {-2.7, -0.3, 0.5, 2.0, 3.5}) {
        for (double b : {0.5, 1.5}) {
            for (double w : {0.3, 5.0, 39.0, 41.0, 120.0, 900.0}) {
                const auto ref = oracles::hyp1f1_reference(a, b, w);
                INFO("a=" << a << " b=" << b << " w=" << w);
                CHECK(oracles::relative_error(hyp1f1(a, b, w), ref) < 1e-10);
            }
        }
    }
}

TEST_CASE("scaled hyp1f1 removes exactly e^w") {
    for (double w : {0.0, 2.0, 50.0, 700.0}) {
        const LogScaled plain = hyp1f1(2.0, 1.5, w);
        const LogScaled scaled = hyp1f1_scaled(2.0, 1.5, w);
        CHECK(scaled.sign == plain.sign);
        CHECK(scaled.log_mag == doctest::Approx(plain.log_mag - w).epsilon(1e-13));
    }
}

TEST_CASE("hyp1f1_dw: first coefficient, alpha = beta and the contiguous relation") {
    CHECK(hyp1f1_dw(2.0, 0.5, 0.0).value() == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(hyp1f1_dw(-0.3, 1.5, 0.0).value() == doctest::Approx(-0.2).epsilon(1e-15));
    CHECK(rel(hyp1f1_dw(0.5, 0.5, 3.0).value(), std::exp(3.0)) < 1e-14);

    const double expected = 4.0 * oracles::hyp1f1_reference(3.0, 1.5, 1.0).to_double();
    CHECK(rel(hyp1f1_dw(2.0, 0.5, 1.0).value(), expected) < 1e-12);
    CHECK(rel(hyp1f1_dw(2.0, 0.5, 1.0).value(), 22.7857454581477) < 1e-12);
}

TEST_CASE("scaled derivative matches a finite difference of the scaled function") {
    for (double w : {0.5, 12.0, 60.0}) {
        const double h = 1e-4 * std::max(1.0, w);
        const double fd = (hyp1f1_scaled(2.0, 0.5, w + h).value() - hyp1f1_scaled(2.0, 0.5, w - h).value()) /
                          (2.0 * h);
        CHECK(rel(hyp1f1_scaled_dw(2.0, 0.5, w).value(), fd) < 1e-6);
    }
    CHECK(hyp1f1_scaled_dw(1.5, 1.5, 4.0).is_zero());
}

TEST_CASE("hyp1f1 rejects arguments outside its domain") {
    CHECK_THROWS_AS(hyp1f1(1.0, 2.0, 1.0), DomainError);
    CHECK_THROWS_AS(hyp1f1(1.0, 0.5, -1.0), DomainError);
    CHECK_THROWS_AS(hyp1f1(1.0, 0.5, 2.0e5), DomainError);
    CHECK_THROWS_AS(hyp1f1(1.0, 0.5, std::nan("")), DomainError);
}

TEST_CASE("erf: symmetry, pinned value and agreement with MPFR") {
    CHECK(dosc::erf(0.0) == 0.0);
    CHECK(dosc::erf(-0.7) == -dosc::erf(0.7));
    CHECK(dosc::erf(1.0) == doctest::Approx(0.8427007929497149).epsilon(1e-15));
    for (double x : {1e-8, 0.2, 1.5, 2.999999, 3.0, 3.000001, 4.5, 6.0, 27.0}) {
        const double ref = oracles::erf_reference(x).convert_to<double>();
        INFO("x=" << x);
        CHECK(std::abs(dosc::erf(x) - ref) < 1e-12);
    }
}

TEST_CASE("erf is continuous where the series hands over to the continued fraction") {
    const double below = dosc::erf(std::nextafter(3.0, 0.0));
    const double above = dosc::erf(std::nextafter(3.0, 4.0));
    CHECK(std::abs(above - below) < 1e-12);
}

TEST_CASE("hermite polynomials") {
    CHECK(hermite(0, 123.4) == 1.0);
    CHECK(hermite(2, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
    // H5 = 32x^5 - 160x^3 + 120x
    const double x = 0.3;
    const double direct = 32 * std::pow(x, 5) - 160 * std::pow(x, 3) + 120 * x;
    CHECK(hermite(5, 0.3) == doctest::Approx(direct).epsilon(1e-14));
    CHECK(hermite(5, 0.3) == doctest::Approx(31.75776).epsilon(1e-14));
    for (int n = 0; n <= 9; ++n) {
        const double parity = (n % 2 == 0) ? 1.0 : -1.0;
        CHECK(hermite(n, -1.7) == doctest::Approx(parity * hermite(n, 1.7)).epsilon(1e-14));
    }
    CHECK_THROWS_AS(hermite(-1, 0.0), DomainError);
}
