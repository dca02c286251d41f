#include "blowup/verify.hpp"

#include "blowup/asymptotics.hpp"
#include "blowup/errors.hpp"
#include "blowup/fd.hpp"
#include "blowup/quad.hpp"
#include "blowup/reduction.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>

namespace blowup {
namespace {

double rel(double a, double b) {
    return std::abs(a - b) / std::abs(b);
}

Check at_most(std::string name, double value, double threshold) {
    return {std::move(name), value <= threshold, value, threshold};
}

void quad_checks(std::vector<Check>& out) {
    constexpr std::array<double, 6> grid = {0.1, 0.5, 1.0, 2.5, 7.0, 10.0};
    double symmetry = 0.0;
    double recurrence = 0.0;
    for (double x : grid) {
        for (double y : grid) {
            symmetry = std::max(symmetry, rel(quad::beta(x, y), quad::beta(y, x)));
            recurrence = std::max(recurrence, rel(quad::beta(x + 1.0, y), quad::beta(x, y) * x / (x + y)));
        }
    }
    out.push_back(at_most("beta_symmetry", symmetry, 1e-13));
    out.push_back(at_most("beta_recurrence", recurrence, 1e-12));

    double identity = 0.0;
    double normalization = 0.0;
    for (double p : {1.5, 2.0, 3.0, 5.0, 10.0}) {
        const double lp = quad::lp_constant(p).value;
        const double b = quad::beta((p - 1.0) / (2.0 * (p + 1.0)), 0.5);
        identity = std::max(identity, rel((p + 1.0) * lp, b));
        normalization = std::max(
            normalization, std::abs(std::sqrt(0.5 * (p + 1.0)) * std::pow(mu(p), 0.5 * (1.0 - p)) * lp - 1.0));
    }
    out.push_back(at_most("lp_beta_identity", identity, 1e-9));
    out.push_back(at_most("time_map_normalization", normalization, 1e-10));

    // Smallest increment of the tail moment along an increasing q grid.
    double increment = quad::infinity;
    double previous = quad::tail_moment(5.0, -1.0).value;
    for (double q : {-0.5, 0.0, 0.5, 1.0, 1.5, 1.9}) {
        const double value = quad::tail_moment(5.0, q).value;
        increment = std::min(increment, value - previous);
        previous = value;
    }
    out.push_back({"tail_moment_increasing_in_q", increment > 0.0, increment, 0.0});

    // True error over reported bound on cases with a closed form.
    double coverage = 0.0;
    for (double p : {2.0, 3.0, 5.0}) {
        for (double q : {0.0, 0.25}) {
            const quad::QuadResult r = quad::tail_moment(p, q);
            const double bound = std::max(r.error_estimate, 1e-12);
            coverage = std::max(coverage, std::abs(r.value - quad::tail_moment_closed(p, q)) / bound);
        }
    }
    out.push_back(at_most("quad_error_estimate_covers_error", coverage, 1.0));
}

void profile_checks(std::vector<Check>& out) {
    out.push_back(at_most("mu_100_near_one", std::abs(mu(100.0) - 1.0), 0.1));

    double norms = 0.0;
    for (auto [p, q] : std::array<std::pair<double, double>, 4>{{{3.0, 0.5}, {4.0, 1.0}, {5.0, 1.5}, {10.0, 4.0}}}) {
        norms = std::max(norms, rel(lq_norm_numeric(build_profile(p), q), lq_norm_closed(p, q)));
    }
    out.push_back(at_most("norm_closed_vs_numeric", norms, 1e-6));

    const Profile p3 = build_profile(3.0);
    const double m3 = p3.mu();
    const quad::Integrand f = [m3](double s) { return 1.0 / std::sqrt(std::pow(s, 4.0) - std::pow(m3, 4.0)); };
    quad::Options options;
    options.tol = 1e-13;
    const double direct =
        std::sqrt(2.0) * quad::integrate_singular(f, m3, 2.0 * m3, quad::Endpoint::lower, options).value;
    out.push_back(at_most("time_map_at_2mu", std::abs(p3.time_map(2.0 * m3) - direct), 1e-9));

    out.push_back(at_most("energy_identity_p3", energy_identity_residual(p3), 1e-4));

    double asymmetry = 0.0;
    double dip = 0.0;
    for (int i = 1; i < 100; ++i) {
        const double x = 0.01 * i;
        const double u = eval_U(p3, x);
        asymmetry = std::max(asymmetry, rel(eval_U(p3, -x), u));
        dip = std::max(dip, m3 - u);
    }
    out.push_back(at_most("profile_even", asymmetry, 0.0));
    out.push_back(at_most("profile_minimum_at_zero", dip, 0.0));

    for (double p : {3.0, 5.0}) {
        const double k = 2.0 / (p - 1.0);
        out.push_back(at_most("boundary_rate_p" + std::to_string(static_cast<int>(p)),
                              std::abs(boundary_rate_exponent(build_profile(p)) / k - 1.0), 0.01));
    }
}

void reduction_checks(std::vector<Check>& out) {
    auto profile = std::make_shared<const Profile>(build_profile(4.0));
    const double norm = profile->norm(1.0);
    ProblemParams params{4.0, 1.0, 4.0, 1.0, 1.0};
    const CoefficientFn M = power_family_M(params);

    double fd = 0.0;
    for (double t : {0.3, 1.0, 2.0, 5.0, 20.0}) {
        const double h = 1e-5 * t;
        const double numeric = (g_eval(t + h, params) - g_eval(t - h, params)) / (2.0 * h);
        fd = std::max(fd, rel(numeric, g_prime(t, params)));
    }
    out.push_back(at_most("g_prime_vs_difference", fd, 1e-6));

    const FoldPoint fold = critical_point(params, norm);
    constexpr std::array<double, 7> factors = {0.25, 0.5, 0.9, 1.0, 1.1, 2.0, 10.0};
    constexpr std::array<SolutionKind, 7> expected = {
        SolutionKind::Empty, SolutionKind::Empty, SolutionKind::Empty, SolutionKind::Tangent,
        SolutionKind::Pair,  SolutionKind::Pair,  SolutionKind::Pair};
    int mismatches = 0;
    int misordered = 0;
    double round_trip = 0.0;
    double residual = 0.0;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        params.lambda = factors[i] * fold.lambda0;
        const SolutionSet set = solve_scalar(params, norm);
        mismatches += set.kind != expected[i];
        if (set.kind == SolutionKind::Pair) {
            const double t1 = set.roots[0];
            const double t2 = set.roots[1];
            misordered += !(t1 < fold.t0 && fold.t0 < t2 && g_prime(t1, params) < 0.0 && g_prime(t2, params) > 0.0);
        }
        for (double t : set.roots) {
            const BlowupSolution u = build_solution(t, profile, 1.0);
            round_trip = std::max(round_trip, rel(lq_norm_numeric(u), t));
            for (double x : {0.0, 0.3, -0.3, 0.6, -0.6}) {
                residual = std::max(residual, ode_residual(u, M, params.lambda, x));
            }
        }
    }
    out.push_back(at_most("fold_trichotomy_mismatches", mismatches, 0.0));
    out.push_back(at_most("pair_branch_ordering_violations", misordered, 0.0));
    out.push_back(at_most("round_trip_norm", round_trip, 1e-6));
    out.push_back(at_most("ode_residual", residual, 1e-4));

    // Sub regime: the root falls as λ grows.
    ProblemParams sub{4.0, 1.0, 1.0, 1.0, 1.0};
    double last = quad::infinity;
    double rise = -quad::infinity;
    for (double lambda : {0.1, 1.0, 10.0, 100.0, 1000.0}) {
        sub.lambda = lambda;
        const double t = solve_scalar(sub, norm).roots.at(0);
        rise = std::max(rise, t - last);
        last = t;
    }
    out.push_back({"sub_regime_root_decreasing", rise < 0.0, rise, 0.0});

    params.lambda = 2.0 * fold.lambda0;
    const SolutionSet pair = solve_scalar(params, norm);
    const GeneralRoots general = solve_general(M, params.p, params.lambda, norm);
    double agreement = general.roots.size() == pair.roots.size() ? 0.0 : quad::infinity;
    for (std::size_t i = 0; std::isfinite(agreement) && i < pair.roots.size(); ++i) {
        agreement = std::max(agreement, rel(general.roots[i], pair.roots[i]));
    }
    out.push_back(at_most("general_matches_power_family", agreement, 1e-10));

    // qr = p - 1 with b = 0 at λ = ‖U_p‖_q^{p-1}: g is constant.
    const double p = 4.0;
    const CoefficientFn flat = [p](double t) { return std::pow(t, p - 1.0); };
    const GeneralRoots continuum = solve_general(flat, p, std::pow(norm, p - 1.0), norm);
    out.push_back({"degenerate_continuum_flagged", continuum.degenerate_continuum,
                   continuum.degenerate_continuum ? 1.0 : 0.0, 1.0});

    const CoefficientFn one = [](double) { return 1.0; };
    double constant = 0.0;
    double pointwise = 0.0;
    for (double lambda : {0.5, 3.0, 40.0}) {
        const GeneralRoots roots = solve_general(one, p, lambda, norm);
        const double expected_t = std::pow(lambda, -1.0 / (p - 1.0)) * norm;
        constant = std::max(constant, roots.roots.size() == 1 ? rel(roots.roots[0], expected_t) : quad::infinity);
        if (roots.roots.size() == 1) {
            const BlowupSolution w = build_solution(roots.roots[0], profile, 1.0);
            for (double x : {0.0, 0.5, 0.9}) {
                pointwise = std::max(pointwise, rel(w(x), std::pow(lambda, -1.0 / (p - 1.0)) * eval_U(*profile, x)));
            }
        }
    }
    out.push_back(at_most("constant_M_root", constant, 1e-10));
    out.push_back(at_most("constant_M_pointwise", pointwise, 1e-8));
}

void asymptotic_checks(std::vector<Check>& out) {
    double b0 = 0.0;
    double expanded = 0.0;
    for (auto [p, q, r] : std::array<std::array<double, 3>, 3>{{{3.0, 0.5, 1.0}, {3.0, 0.5, 8.0}, {5.0, 1.0, 2.0}}}) {
        const double norm = lq_norm_closed(p, q);
        for (double lambda : {0.1, 1.0, 10.0}) {
            const ProblemParams params{p, q, r, 0.0, lambda};
            const double scale = closed_form_b0(params, norm);
            b0 = std::max(b0, rel(solve_scalar(params, norm).roots.at(0) / norm, scale));
            expanded = std::max(expanded, rel(closed_form_b0_expanded(params), scale));
        }
    }
    out.push_back(at_most("b0_closed_form", b0, 1e-10));
    out.push_back(at_most("b0_expanded_constant", expanded, 1e-10));

    double quadratic = 0.0;
    for (double p : {5.0, 7.0}) {
        const double norm = lq_norm_closed(p, 1.0);
        for (double b : {0.5, 2.0}) {
            for (double lambda : {0.1, 1.0, 100.0}) {
                const ProblemParams params{p, 1.0, 0.5 * (p - 1.0), b, lambda};
                quadratic = std::max(quadratic, rel(solve_scalar(params, norm).roots.at(0),
                                                    exact_quadratic(p, b, lambda, norm)));
            }
        }
    }
    out.push_back(at_most("exact_quadratic", quadratic, 1e-10));

    const double norm = lq_norm_closed(4.0, 1.0);
    auto expansions = [norm](double lambda) {
        const ProblemParams params{4.0, 1.0, 4.0, 1.0, lambda};
        const SolutionSet set = solve_scalar(params, norm);
        AsymptoticExpansion lower = asymptotic_lower(params, norm);
        AsymptoticExpansion upper = asymptotic_upper(params, norm);
        lower.attach(set.roots.at(0));
        upper.attach(set.roots.at(1));
        return std::pair{lower, upper};
    };
    out.push_back(at_most("upper_remainder_ratio_1e6", *expansions(1e6).second.remainder_ratio, 0.05));
    out.push_back(at_most("lower_remainder_ratio_1e7", *expansions(1e7).first.remainder_ratio, 0.05));

    // Observed ordering t2 < leading + correction < leading for λ >= 1e4.
    double worst = -quad::infinity;
    for (double lambda : {1e4, 1e5, 1e6, 1e7, 1e8}) {
        const AsymptoticExpansion upper = expansions(lambda).second;
        worst = std::max(worst, (*upper.numeric - upper.approximation()) / std::abs(upper.correction));
    }
    out.push_back({"upper_branch_below_two_term_expansion", worst < 0.0, worst, 0.0});
}

} // namespace

double energy_identity_residual(const Profile& profile) {
    const auto table = profile.table();
    const std::size_t n = table.size();
    const double p = profile.p();
    const double floor = std::pow(profile.mu(), p + 1.0);
    std::vector<double> x(n);
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = table[i].x;
        u[i] = table[i].u;
    }
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const std::size_t first = std::min(i < 2 ? 0 : i - 2, n - 5);
        const std::vector<double> w = fd_weights(x[i], std::span(x).subspan(first, 5), 1);
        double slope = 0.0;
        for (std::size_t j = 0; j < 5; ++j) {
            slope += w[j] * u[first + j];
        }
        const double energy = 2.0 / (p + 1.0) * (std::pow(u[i], p + 1.0) - floor);
        worst = std::max(worst, std::abs(slope * slope - energy) / energy);
    }
    return worst;
}

double boundary_rate_exponent(const Profile& profile, double x_lo, double x_hi, int samples) {
    if (!(0.0 <= x_lo && x_lo < x_hi && x_hi < 1.0) || samples < 2) {
        throw DomainError("the fit window must satisfy 0 <= x_lo < x_hi < 1");
    }
    const double a = std::log(1.0 - x_lo);
    const double b = std::log(1.0 - x_hi);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double log_gap = a + (b - a) * i / (samples - 1);
        const double X = -log_gap;
        const double Y = std::log(eval_U_near_boundary(profile, std::exp(log_gap)));
        sx += X;
        sy += Y;
        sxx += X * X;
        sxy += X * Y;
    }
    const double n = samples;
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<Check> run_verification() {
    std::vector<Check> out;
    quad_checks(out);
    profile_checks(out);
    reduction_checks(out);
    asymptotic_checks(out);
    return out;
}

} // namespace blowup
