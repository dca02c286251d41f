#include "blowup/errors.hpp"
#include "blowup/quad.hpp"

#include "../oracle_values.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace blowup;
using doctest::Approx;

TEST_CASE("beta special values") {
    CHECK(quad::beta(1.0, 1.0) == Approx(1.0).epsilon(1e-14));
    CHECK(quad::beta(0.5, 0.5) == Approx(std::numbers::pi).epsilon(1e-14));
    CHECK(quad::beta(2.0, 3.0) == Approx(1.0 / 12.0).epsilon(1e-14));
}

TEST_CASE("beta is symmetric and satisfies the recurrence") {
    for (double x : {0.05, 0.125, 0.5, 1.0, 3.3, 9.7}) {
        for (double y : {0.1, 0.5, 2.0, 10.0}) {
            CHECK(quad::beta(x, y) == quad::beta(y, x));
            const double lhs = quad::beta(x + 1.0, y);
            const double rhs = quad::beta(x, y) * x / (x + y);
            CHECK(std::abs(lhs - rhs) <= 1e-12 * rhs);
        }
    }
}

TEST_CASE("beta rejects non-positive arguments") {
    CHECK_THROWS_AS(quad::beta(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(quad::beta(1.0, -2.0), DomainError);
}

TEST_CASE("integrate_singular on elementary integrals") {
    using quad::Endpoint;
    const auto r1 = quad::integrate_singular([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, Endpoint::lower);
    CHECK(r1.value == Approx(2.0).epsilon(1e-12));
    CHECK(r1.error_estimate >= 0.0);
    CHECK(r1.evaluations >= 1);

    const auto r2 = quad::integrate_singular([](double t) { return 1.0 / (t * t); }, 1.0, quad::infinity, Endpoint::none);
    CHECK(r2.value == Approx(1.0).epsilon(1e-11));

    const auto r3 = quad::integrate_singular([](double x) { return 1.0 / std::sqrt(x * (1.0 - x)); }, 0.0, 1.0,
                                             Endpoint::both);
    CHECK(r3.value == Approx(std::numbers::pi).epsilon(1e-12));
}

TEST_CASE("integrate_adaptive reports an accuracy failure with its best estimate") {
    // A jump the budget cannot resolve to 1e-15.
    auto step = [](double x) { return x < 1.0 / 3.0 ? 0.0 : 1.0; };
    try {
        quad::integrate_adaptive(step, 0.0, 1.0, 1e-300, 300);
        FAIL("expected AccuracyError");
    } catch (const AccuracyError& e) {
        CHECK(e.best_estimate() == Approx(2.0 / 3.0).epsilon(1e-3));
        CHECK(e.error_estimate() > 0.0);
    }
}

TEST_CASE("lp_constant against the mpmath reference") {
    CHECK(quad::lp_constant(3.0).value == Approx(oracle::kL3).epsilon(1e-13));
    CHECK(quad::lp_constant(1.5).value == Approx(oracle::kL1p5).epsilon(1e-12));
    CHECK(quad::lp_constant(10.0).value == Approx(oracle::kL10).epsilon(1e-13));
}

TEST_CASE("lp_constant agrees with the Beta closed form") {
    for (double p : {1.5, 2.0, 3.0, 5.0, 10.0, 100.0}) {
        const double b = quad::beta((p - 1.0) / (2.0 * (p + 1.0)), 0.5);
        const quad::QuadResult r = quad::lp_constant(p);
        CHECK(std::abs((p + 1.0) * r.value - b) <= 1e-9 * b);
        CHECK(std::abs(r.value - b / (p + 1.0)) <= std::max(r.error_estimate, 1e-12));
    }
    CHECK(quad::lp_constant(100.0).value == Approx(std::numbers::pi / 101.0).epsilon(0.02));
}

TEST_CASE("lp_constant diverges for p <= 1") {
    CHECK_THROWS_AS(quad::lp_constant(1.0), DomainError);
    CHECK_THROWS_AS(quad::lp_constant(0.5), DomainError);
}

TEST_CASE("tail_moment") {
    CHECK(quad::tail_moment(4.0, 0.0).value == quad::lp_constant(4.0).value);
    const double closed = quad::beta(0.125, 0.5) / 4.0;
    CHECK(std::abs(quad::tail_moment(3.0, 0.5).value - closed) <= 1e-10 * closed);
    CHECK(quad::tail_moment(3.0, 0.5).value == Approx(oracle::kTailMoment3Half).epsilon(1e-12));
    CHECK_THROWS_AS(quad::tail_moment(2.0, 0.6), DomainError);
    CHECK_THROWS_AS(quad::tail_moment(2.0, 0.5), DomainError);

    double previous = 0.0;
    for (double q : {-2.0, -0.5, 0.0, 0.4, 0.8, 1.2, 1.6, 1.95}) {
        const double value = quad::tail_moment(5.0, q).value;
        CHECK(value > previous);
        previous = value;
    }
}

TEST_CASE("tail_moment with a slowly decaying tail") {
    // Integrand decays like t^{-1.02}.
    const double p = 3.0;
    const double q = 0.98;
    const quad::QuadResult r = quad::tail_moment(p, q);
    const double closed = quad::tail_moment_closed(p, q);
    CHECK(std::abs(r.value - closed) <= 1e-9 * closed);
}
