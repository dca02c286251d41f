#include "blowup/errors.hpp"
#include "blowup/profile.hpp"
#include "blowup/quad.hpp"
#include "blowup/verify.hpp"

#include "../oracle_values.hpp"

#include <doctest.h>

#include <cmath>

using namespace blowup;
using doctest::Approx;

TEST_CASE("mu against the mpmath reference") {
    CHECK(mu(3.0) == Approx(oracle::kMu3).epsilon(1e-12));
    CHECK(mu(5.0) == Approx(oracle::kMu5).epsilon(1e-12));
    CHECK(std::abs(mu(100.0) - 1.0) < 0.1);
    for (double p : {2.0, 3.0, 5.0}) {
        const double lhs = std::pow(mu(p), 0.5 * (p - 1.0));
        const double rhs = std::sqrt(0.5 * (p + 1.0)) * quad::lp_constant(p).value;
        CHECK(lhs == Approx(rhs).epsilon(1e-10));
    }
    CHECK_THROWS_AS(mu(1.0), DomainError);
}

TEST_CASE("closed-form norms") {
    CHECK(lq_norm_closed(3.0, 0.5) == Approx(oracle::kNorm3Half).epsilon(1e-12));
    CHECK(lq_norm_closed(4.0, 1.0) == Approx(oracle::kNorm41).epsilon(1e-12));
    CHECK(lq_norm_closed(5.0, 1.5) == Approx(oracle::kNorm51p5).epsilon(1e-12));
    CHECK(lq_norm_closed(10.0, 4.0) == Approx(oracle::kNorm104).epsilon(1e-12));

    const double root = std::sqrt(0.5) * std::pow(mu(3.0), -0.5) * quad::beta(0.125, 0.5);
    CHECK(std::sqrt(lq_norm_closed(3.0, 0.5)) == Approx(root).epsilon(1e-10));

    CHECK_THROWS_AS(lq_norm_closed(3.0, 1.0), DomainError);
    CHECK_THROWS_AS(lq_norm_closed(3.0, 0.0), DomainError);
}

TEST_CASE("numeric norms match the closed form") {
    for (auto [p, q] : {std::pair{3.0, 0.5}, {4.0, 1.0}, {5.0, 1.5}, {10.0, 4.0}}) {
        const Profile profile = build_profile(p);
        CHECK(lq_norm_numeric(profile, q) == Approx(lq_norm_closed(p, q)).epsilon(1e-6));
        CHECK(profile.norm(q) == lq_norm_closed(p, q));
    }
    const Profile p5 = build_profile(5.0);
    CHECK(lq_norm_numeric(p5, 0.99 * 2.0) > lq_norm_numeric(p5, 0.8 * 2.0));
    CHECK_THROWS_AS(lq_norm_numeric(p5, 2.0), DomainError);
}

TEST_CASE("table structure") {
    const Profile profile = build_profile(3.0, 10.0 * mu(3.0), 256);
    const auto table = profile.table();
    REQUIRE(table.size() == 256);
    CHECK(table[0].u == profile.mu());
    CHECK(table[0].x == 0.0);
    for (std::size_t i = 1; i < table.size(); ++i) {
        CHECK(table[i].u > table[i - 1].u);
        CHECK(table[i].x > table[i - 1].x);
        CHECK(table[i].x < 1.0);
    }
    CHECK(profile.u_max() == 10.0 * mu(3.0));
}

TEST_CASE("build_profile preconditions") {
    CHECK_THROWS_AS(build_profile(3.0, 0.5 * mu(3.0)), DomainError);
    CHECK_THROWS_AS(build_profile(3.0, std::nullopt, 8), DomainError);
    CHECK_THROWS_AS(build_profile(0.9), DomainError);
}

TEST_CASE("time map at u = 2 mu") {
    const Profile profile = build_profile(3.0);
    CHECK(profile.time_map(2.0 * profile.mu()) == Approx(oracle::kX3At2Mu).epsilon(1e-12));
    CHECK(std::abs(profile.time_map(2.0 * profile.mu()) - oracle::kX3At2Mu) <= 1e-9);
}

TEST_CASE("eval_U") {
    const Profile profile = build_profile(3.0);
    CHECK(eval_U(profile, 0.0) == profile.mu());
    CHECK(eval_U(profile, 0.5) == Approx(oracle::kU3AtHalf).epsilon(1e-12));
    for (double x : {0.01, 0.2, 0.5, 0.77, 0.95, 0.999, 0.99999}) {
        CHECK(eval_U(profile, -x) == eval_U(profile, x));
        CHECK(eval_U(profile, x) >= profile.mu());
    }
    CHECK_THROWS_AS(eval_U(profile, 1.0), DomainError);
    CHECK_THROWS_AS(eval_U(profile, -1.5), DomainError);
}

TEST_CASE("eval_U inverts the time map") {
    const Profile profile = build_profile(4.0);
    for (double x : {0.1, 0.4, 0.8, 0.99}) {
        CHECK(profile.time_map(eval_U(profile, x)) == Approx(x).epsilon(1e-13));
    }
}

TEST_CASE("near-boundary evaluation agrees with eval_U") {
    const Profile profile = build_profile(3.0);
    for (double gap : {0.4, 0.1, 1e-3, 1e-4}) {
        CHECK(eval_U_near_boundary(profile, gap) == Approx(eval_U(profile, 1.0 - gap)).epsilon(1e-12));
    }
    const double tiny = 0.5 * profile.boundary_gap();
    CHECK(eval_U_near_boundary(profile, tiny) ==
          Approx(profile.boundary_constant() * std::pow(tiny, -1.0)).epsilon(1e-12));
}

TEST_CASE("normalization of the time map") {
    for (double p : {1.5, 2.0, 3.0, 5.0, 10.0}) {
        const double value = std::sqrt(0.5 * (p + 1.0)) * std::pow(mu(p), 0.5 * (1.0 - p)) * quad::lp_constant(p).value;
        CHECK(std::abs(value - 1.0) <= 1e-10);
    }
}

TEST_CASE("energy identity and boundary rate") {
    CHECK(energy_identity_residual(build_profile(3.0)) <= 1e-4);
    for (double p : {3.0, 5.0}) {
        CHECK(boundary_rate_exponent(build_profile(p)) == Approx(2.0 / (p - 1.0)).epsilon(0.01));
    }
}
