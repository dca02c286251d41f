#include "blowup/reduction.hpp"

#include "blowup/errors.hpp"

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace blowup {
namespace {

constexpr int kMaxDoublings = 200;
constexpr std::uintmax_t kMaxRootIterations = 200;
const double kLog2 = std::log(2.0);

bool is_critical(double e, double q, double r, double p) {
    return std::abs(e) <= 1e-12 * std::max({1.0, q * r, p - 1.0});
}

// log g(e^s) - log rhs, arranged so neither large nor small t overflows and
// the critical case has no cancellation between r·qs and (p-1)s.
struct LogResidual {
    double p, q, r, b, e, log_rhs;

    double operator()(double s) const {
        const double z = q * s;
        if (b == 0.0) {
            return e * s - log_rhs;
        }
        const double lb = std::log(b);
        if (z >= lb) {
            return e * s + r * std::log1p(std::exp(lb - z)) - log_rhs;
        }
        return r * lb - (p - 1.0) * s + r * std::log1p(std::exp(z - lb)) - log_rhs;
    }
};

LogResidual make_residual(const ProblemParams& params, double rhs) {
    const double e = is_critical(params.exponent(), params.q, params.r, params.p)
                         ? 0.0
                         : params.exponent();
    return {params.p, params.q, params.r, params.b, e, std::log(rhs)};
}

template <typename F>
double refine(const F& f, double lo, double hi, double f_lo, double f_hi) {
    boost::math::tools::eps_tolerance<double> tolerance(std::numeric_limits<double>::digits - 2);
    std::uintmax_t iterations = kMaxRootIterations;
    const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, tolerance, iterations);
    return 0.5 * (a + b);
}

// Walks from s_start in steps that double t (direction +1) or halve it (-1)
// until the residual changes sign, then refines inside the last step.
template <typename F>
double march(const F& f, double s_start, int direction) {
    double s = s_start;
    double fs = f(s);
    for (int k = 0; k < kMaxDoublings; ++k) {
        const double next = s + direction * kLog2;
        const double fn = f(next);
        if (fs == 0.0) {
            return s;
        }
        if (fn == 0.0) {
            return next;
        }
        if ((fs < 0.0) != (fn < 0.0)) {
            return direction > 0 ? refine(f, s, next, fs, fn) : refine(f, next, s, fn, fs);
        }
        s = next;
        fs = fn;
    }
    throw AccuracyError("no sign change within 200 doublings of t", std::exp(s), std::abs(fs));
}

void require_root(double t, const ProblemParams& params, double rhs, double tol) {
    const double residual = relative_residual(t, params, rhs);
    if (!(residual <= tol)) {
        throw AccuracyError("root residual " + std::to_string(residual) + " exceeds tolerance", t,
                            residual);
    }
}

} // namespace

void ProblemParams::validate() const {
    if (!(std::isfinite(p) && p > 1.0)) {
        throw DomainError("p must satisfy p > 1");
    }
    if (!(q > 0.0 && q < 0.5 * (p - 1.0))) {
        throw DomainError("q must satisfy 0 < q < (p-1)/2");
    }
    if (!(std::isfinite(r) && r > 0.0)) {
        throw DomainError("r must satisfy r > 0");
    }
    if (!(std::isfinite(b) && b >= 0.0)) {
        throw DomainError("b must satisfy b >= 0");
    }
    if (!(std::isfinite(lambda) && lambda > 0.0)) {
        throw DomainError("lambda must satisfy lambda > 0");
    }
}

std::string_view to_string(Regime regime) noexcept {
    switch (regime) {
    case Regime::Super: return "SUPER";
    case Regime::Critical: return "CRITICAL";
    case Regime::Sub: return "SUB";
    case Regime::Generic: return "GENERIC";
    }
    return "GENERIC";
}

std::string_view to_string(SolutionKind kind) noexcept {
    switch (kind) {
    case SolutionKind::Empty: return "Empty";
    case SolutionKind::Unique: return "Unique";
    case SolutionKind::Pair: return "Pair";
    case SolutionKind::Tangent: return "Tangent";
    }
    return "Empty";
}

Regime classify(const ProblemParams& params) noexcept {
    const double e = params.exponent();
    if (is_critical(e, params.q, params.r, params.p)) {
        return Regime::Critical;
    }
    return e > 0.0 ? Regime::Super : Regime::Sub;
}

double rhs_constant(const ProblemParams& params, double norm_q) {
    if (!(norm_q > 0.0)) {
        throw DomainError("the L^q norm must be positive");
    }
    return params.lambda * std::pow(norm_q, 1.0 - params.p);
}

double g_eval(double t, const ProblemParams& params) {
    if (!(t > 0.0)) {
        throw DomainError("g is defined for t > 0");
    }
    return std::pow(std::pow(t, params.q) + params.b, params.r) / std::pow(t, params.p - 1.0);
}

double g_prime(double t, const ProblemParams& params) {
    if (!(t > 0.0)) {
        throw DomainError("g is defined for t > 0");
    }
    const double tq = std::pow(t, params.q);
    return std::pow(tq + params.b, params.r - 1.0) * std::pow(t, -params.p) *
           (params.exponent() * tq - params.b * (params.p - 1.0));
}

FoldPoint critical_point(const ProblemParams& params, double norm_q) {
    if (classify(params) != Regime::Super || params.b == 0.0) {
        throw RegimeError("an interior minimum of g needs qr - p + 1 > 0 and b > 0");
    }
    const double t0 = std::pow(params.b * (params.p - 1.0) / params.exponent(), 1.0 / params.q);
    return {t0, std::pow(norm_q, params.p - 1.0) * g_eval(t0, params)};
}

double relative_residual(double t, const ProblemParams& params, double rhs) {
    return std::abs(std::expm1(make_residual(params, rhs)(std::log(t))));
}

SolutionSet solve_scalar(const ProblemParams& params, double norm_q, double tol) {
    params.validate();
    if (!(tol > 0.0)) {
        throw DomainError("tol must be positive");
    }
    SolutionSet set;
    set.rhs = rhs_constant(params, norm_q);
    set.regime = classify(params);
    const LogResidual f = make_residual(params, set.rhs);

    auto accept = [&](double t, double root_tol) {
        require_root(t, params, set.rhs, root_tol);
        set.roots.push_back(t);
    };

    if (params.b == 0.0) {
        if (set.regime == Regime::Critical) {
            const double level = std::pow(norm_q, params.p - 1.0);
            if (std::abs(params.lambda - level) <= tol * level) {
                set.kind = SolutionKind::Unique;
                set.degenerate_continuum = true;
                set.roots.push_back(norm_q);
            }
            return set;
        }
        set.kind = SolutionKind::Unique;
        accept(std::exp(std::log(set.rhs) / params.exponent()), tol);
        return set;
    }

    switch (set.regime) {
    case Regime::Super: {
        const FoldPoint fold = critical_point(params, norm_q);
        set.fold = fold;
        const double gap = params.lambda - fold.lambda0;
        if (std::abs(gap) <= kTangentBand * fold.lambda0) {
            set.kind = SolutionKind::Tangent;
            accept(fold.t0, std::max(tol, kTangentBand));
        } else if (gap < 0.0) {
            set.kind = SolutionKind::Empty;
        } else {
            set.kind = SolutionKind::Pair;
            const double s0 = std::log(fold.t0);
            accept(std::exp(march(f, s0, -1)), tol);
            accept(std::exp(march(f, s0, +1)), tol);
        }
        return set;
    }
    case Regime::Critical:
        // g decreases from +∞ to 1, so a root exists iff rhs > 1.
        if (!(set.rhs > 1.0)) {
            return set;
        }
        [[fallthrough]];
    case Regime::Sub:
    case Regime::Generic: {
        set.kind = SolutionKind::Unique;
        const int direction = f(0.0) > 0.0 ? +1 : -1;  // f is decreasing in s
        accept(std::exp(march(f, 0.0, direction)), tol);
        return set;
    }
    }
    return set;
}

GeneralRoots solve_general(const CoefficientFn& M, double p, double lambda, double norm_q,
                           std::optional<ScanSpec> scan, double tol) {
    if (!(p > 1.0) || !(lambda > 0.0) || !(norm_q > 0.0)) {
        throw DomainError("solve_general needs p > 1, lambda > 0 and a positive norm");
    }
    const double rhs = lambda * std::pow(norm_q, 1.0 - p);
    if (!scan) {
        const double t_ref = std::pow(lambda, -1.0 / (p - 1.0)) * norm_q;
        scan = ScanSpec{1e-8 * t_ref, 1e8 * t_ref, 10'000};
    }
    if (!(scan->t_min > 0.0 && scan->t_max > scan->t_min) || scan->samples < 2) {
        throw DomainError("the scan range must satisfy 0 < t_min < t_max with at least 2 samples");
    }
    const double log_rhs = std::log(rhs);
    auto f = [&](double s) {
        const double m = M(std::exp(s));
        if (!(m > 0.0) || !std::isfinite(m)) {
            throw DomainError("M must be finite and positive on the scan range");
        }
        return std::log(m) - (p - 1.0) * s - log_rhs;
    };

    const double s_lo = std::log(scan->t_min);
    const double s_hi = std::log(scan->t_max);
    const std::size_t n = scan->samples;
    std::vector<double> s(n);
    std::vector<double> values(n);
    bool flat = true;
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = i + 1 == n ? s_hi : s_lo + (s_hi - s_lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        values[i] = f(s[i]);
        flat = flat && std::abs(std::expm1(values[i])) <= tol;
    }

    GeneralRoots out;
    if (flat) {
        out.degenerate_continuum = true;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (values[i] == 0.0) {
            out.roots.push_back(std::exp(s[i]));
        } else if (i + 1 < n && values[i + 1] != 0.0 && (values[i] < 0.0) != (values[i + 1] < 0.0)) {
            out.roots.push_back(std::exp(refine(f, s[i], s[i + 1], values[i], values[i + 1])));
        }
    }
    return out;
}

CoefficientFn power_family_M(const ProblemParams& params) {
    return [q = params.q, r = params.r, b = params.b](double t) {
        return std::pow(std::pow(t, q) + b, r);
    };
}

double BlowupSolution::operator()(double x) const {
    return scale * eval_U(*profile, x);
}

BlowupSolution build_solution(double t, std::shared_ptr<const Profile> profile, double q) {
    if (!(t > 0.0)) {
        throw DomainError("the solution amplitude t must be positive");
    }
    if (!profile) {
        throw DomainError("build_solution needs a profile");
    }
    const double scale = t / profile->norm(q);
    return {t, scale, q, std::move(profile)};
}

double lq_norm_numeric(const BlowupSolution& solution) {
    return solution.scale * lq_norm_numeric(*solution.profile, solution.q);
}

double ode_residual(const BlowupSolution& solution, const CoefficientFn& M, double lambda,
                    double x) {
    // Five-point centered second difference; h balances the O(h^4) truncation
    // against roundoff amplified by 1/h^2.
    constexpr double h = 5e-3;
    if (!(std::abs(x) + 2.0 * h < 1.0)) {
        throw DomainError("the difference stencil must stay inside (-1, 1)");
    }
    const double u = solution(x);
    const double upp = (-solution(x - 2.0 * h) + 16.0 * solution(x - h) - 30.0 * u +
                        16.0 * solution(x + h) - solution(x + 2.0 * h)) /
                       (12.0 * h * h);
    const double source = lambda * std::pow(u, solution.profile->p());
    return std::abs(M(lq_norm_numeric(solution)) * upp - source) / source;
}

} // namespace blowup
