#include "blowup/asymptotics.hpp"
#include "blowup/errors.hpp"
#include "blowup/quad.hpp"

#include "../oracle_values.hpp"

#include <doctest.h>

#include <cmath>

using namespace blowup;
using doctest::Approx;

namespace {

const ProblemParams kReference{4.0, 1.0, 4.0, 1.0, 1.0};

ProblemParams at(double lambda) {
    ProblemParams params = kReference;
    params.lambda = lambda;
    return params;
}

} // namespace

TEST_CASE("closed form for b = 0") {
    const ProblemParams params{3.0, 0.5, 1.0, 0.0, 2.0};
    const double norm = lq_norm_closed(3.0, 0.5);
    CHECK(closed_form_b0_expanded(params) == Approx(closed_form_b0(params, norm)).epsilon(1e-10));

    ProblemParams unit = params;
    unit.lambda = std::pow(norm, unit.q * unit.r);
    CHECK(closed_form_b0(unit, norm) == Approx(1.0).epsilon(1e-13));

    for (double lambda : {0.1, 1.0, 10.0}) {
        ProblemParams p = params;
        p.lambda = lambda;
        CHECK(solve_scalar(p, norm).roots.at(0) / norm == Approx(closed_form_b0(p, norm)).epsilon(1e-10));
    }
    CHECK_THROWS_AS(closed_form_b0({4.0, 1.0, 3.0, 0.0, 1.0}, 1.0), RegimeError);
    CHECK_THROWS_AS(closed_form_b0({4.0, 1.0, 4.0, 1.0, 1.0}, 1.0), DomainError);
}

TEST_CASE("expansion signs and regime guards") {
    const double norm = lq_norm_closed(4.0, 1.0);
    const AsymptoticExpansion upper = asymptotic_upper(at(1e5), norm);
    const AsymptoticExpansion lower = asymptotic_lower(at(1e5), norm);
    CHECK(upper.leading > 0.0);
    CHECK(upper.correction < 0.0);
    CHECK(lower.leading > 0.0);
    CHECK(lower.correction > 0.0);
    CHECK(upper.m_pq == Approx(std::pow(norm, -3.0)).epsilon(1e-15));
    CHECK_THROWS_AS(asymptotic_upper({4.0, 1.0, 1.0, 1.0, 1.0}, norm), RegimeError);
    CHECK_THROWS_AS(asymptotic_lower({4.0, 1.0, 4.0, 0.0, 1.0}, norm), RegimeError);
}

TEST_CASE("upper expansion tends to the b = 0 scale") {
    const double norm = lq_norm_closed(4.0, 1.0);
    ProblemParams params = at(1e3);
    params.b = 1e-14;
    const AsymptoticExpansion upper = asymptotic_upper(params, norm);
    ProblemParams b0 = params;
    b0.b = 0.0;
    CHECK(std::abs(upper.correction) < 1e-12);
    CHECK(upper.leading == Approx(closed_form_b0(b0, norm) * norm).epsilon(1e-13));
}

TEST_CASE("numeric roots against the mpmath reference") {
    const double norm = lq_norm_closed(4.0, 1.0);
    const std::pair<double, double> expected[] = {
        {oracle::kT1AtE4, oracle::kT2AtE4}, {oracle::kT1AtE6, oracle::kT2AtE6},
        {oracle::kT1AtE8, oracle::kT2AtE8}, {oracle::kT1AtE10, oracle::kT2AtE10}};
    int k = 4;
    for (auto [t1, t2] : expected) {
        const SolutionSet set = solve_scalar(at(std::pow(10.0, k)), norm);
        REQUIRE(set.kind == SolutionKind::Pair);
        CHECK(set.roots[0] == Approx(t1).epsilon(1e-12));
        CHECK(set.roots[1] == Approx(t2).epsilon(1e-12));
        k += 2;
    }
}

TEST_CASE("remainder ratios") {
    const double norm = lq_norm_closed(4.0, 1.0);
    auto ratios = [norm](double lambda) {
        const SolutionSet set = solve_scalar(at(lambda), norm);
        AsymptoticExpansion lower = asymptotic_lower(at(lambda), norm);
        AsymptoticExpansion upper = asymptotic_upper(at(lambda), norm);
        lower.attach(set.roots.at(0));
        upper.attach(set.roots.at(1));
        return std::pair{*lower.remainder_ratio, *upper.remainder_ratio};
    };
    CHECK(ratios(1e6).second < 0.05);
    CHECK(ratios(1e7).first < 0.05);
    double lower_prev = INFINITY;
    double upper_prev = INFINITY;
    for (double lambda : {1e4, 1e5, 1e6, 1e7, 1e8}) {
        const auto [lower, upper] = ratios(lambda);
        CHECK(lower < lower_prev);
        CHECK(upper < upper_prev);
        lower_prev = lower;
        upper_prev = upper;
    }
}

TEST_CASE("leading-order scaling of both branches") {
    const double norm = lq_norm_closed(4.0, 1.0);
    // t1 λ^{1/(p-1)} -> b^{r/(p-1)} ‖U_p‖_q
    const double t1 = solve_scalar(at(1e9), norm).roots.at(0);
    CHECK(t1 * std::cbrt(1e9) == Approx(norm).epsilon(0.01));

    const double lo = 1e9;
    const double hi = 1e11;
    const SolutionSet a = solve_scalar(at(lo), norm);
    const SolutionSet b = solve_scalar(at(hi), norm);
    const double span = std::log(hi / lo);
    CHECK(std::log(b.roots[0] / a.roots[0]) / span == Approx(-1.0 / 3.0).epsilon(0.01));
    CHECK(std::log(b.roots[1] / a.roots[1]) / span == Approx(1.0).epsilon(0.01));
}

TEST_CASE("upper branch lies below the two-term expansion") {
    const double norm = lq_norm_closed(4.0, 1.0);
    for (double lambda : {1e4, 1e5, 1e6, 1e7, 1e8}) {
        AsymptoticExpansion upper = asymptotic_upper(at(lambda), norm);
        upper.attach(solve_scalar(at(lambda), norm).roots.at(1));
        CHECK(*upper.numeric < upper.approximation());
        CHECK(upper.approximation() < upper.leading);
        CHECK(*upper.R < 0.0);
    }
}

TEST_CASE("exact quadratic root") {
    const double norm5 = lq_norm_closed(5.0, 1.0);
    const double k = std::pow(7.0, 0.5);
    const double t = exact_quadratic(5.0, 2.0, 7.0, norm5);
    CHECK(std::abs((t + 2.0) / (t * t) - k / (norm5 * norm5)) <= 1e-12 * k / (norm5 * norm5));
    CHECK(t == Approx(solve_scalar({5.0, 1.0, 2.0, 2.0, 7.0}, norm5).roots.at(0)).epsilon(1e-10));
    CHECK(exact_quadratic(5.0, 0.0, 7.0, norm5) == Approx(norm5 * norm5 / k).epsilon(1e-15));
    for (double p : {5.0, 7.0}) {
        const double norm = lq_norm_closed(p, 1.0);
        for (double b : {0.5, 2.0}) {
            for (double lambda : {0.1, 1.0, 100.0}) {
                const ProblemParams params{p, 1.0, 0.5 * (p - 1.0), b, lambda};
                CHECK(exact_quadratic(p, b, lambda, norm) ==
                      Approx(solve_scalar(params, norm).roots.at(0)).epsilon(1e-10));
            }
        }
    }
    CHECK_THROWS_AS(exact_quadratic(3.0, 1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("leading terms are continuous in the parameters") {
    const double norm = lq_norm_closed(4.0, 1.0);
    const AsymptoticExpansion base_u = asymptotic_upper(at(1e5), norm);
    const AsymptoticExpansion base_l = asymptotic_lower(at(1e5), norm);
    ProblemParams nudged = at(1e5);
    nudged.r += 1e-6;
    nudged.b += 1e-6;
    const double norm_nudged = lq_norm_closed(nudged.p, nudged.q);
    CHECK(asymptotic_upper(nudged, norm_nudged).leading == Approx(base_u.leading).epsilon(1e-4));
    CHECK(asymptotic_lower(nudged, norm_nudged).leading == Approx(base_l.leading).epsilon(1e-4));
}
