#pragma once

#include "blowup/profile.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

namespace blowup {

/// Parameters of (‖u‖_q^q + b)^r u'' = λ u^p on (-1, 1).
struct ProblemParams {
    double p = 0.0;
    double q = 0.0;
    double r = 0.0;
    double b = 0.0;
    double lambda = 0.0;

    /// Throws DomainError naming the first violated assumption.
    void validate() const;
    /// qr - p + 1, the exponent that decides the shape of g.
    double exponent() const noexcept { return q * r - p + 1.0; }
};

enum class Regime { Super, Critical, Sub, Generic };

std::string_view to_string(Regime regime) noexcept;

/// Sign of qr - p + 1; |qr - p + 1| <= 1e-12·max(1, qr, p-1) counts as zero.
Regime classify(const ProblemParams& params) noexcept;

/// λ·‖U_p‖_q^{1-p}, the right-hand side of the scalar equation M(t)/t^{p-1} = rhs.
double rhs_constant(const ProblemParams& params, double norm_q);

/// g(t) = (t^q + b)^r / t^{p-1}.
double g_eval(double t, const ProblemParams& params);
/// g'(t) = (t^q + b)^{r-1} t^{-p} ((qr - p + 1) t^q - b(p - 1)).
double g_prime(double t, const ProblemParams& params);

struct FoldPoint {
    double t0 = 0.0;
    double lambda0 = 0.0;
};

/// Interior minimum of g and the fold value λ_0 = ‖U_p‖_q^{p-1} g(t_0).
/// Throws RegimeError unless qr - p + 1 > 0 and b > 0.
FoldPoint critical_point(const ProblemParams& params, double norm_q);

enum class SolutionKind { Empty, Unique, Pair, Tangent };

std::string_view to_string(SolutionKind kind) noexcept;

struct SolutionSet {
    SolutionKind kind = SolutionKind::Empty;
    std::vector<double> roots;  // ascending
    std::optional<FoldPoint> fold;
    /// b = 0 and qr = p - 1 at the one solvable λ: g is constant, so every t
    /// solves the scalar equation. roots then holds t = ‖U_p‖_q.
    bool degenerate_continuum = false;
    double rhs = 0.0;
    Regime regime = Regime::Generic;
};

inline constexpr double kDefaultRootTol = 1e-10;
/// |λ - λ_0| <= kTangentBand·λ_0 is reported as a tangent (double) root.
inline constexpr double kTangentBand = 1e-9;

/// Relative residual |g(t) - rhs| / rhs, computed in logarithms so that it
/// stays finite for very large or very small t.
double relative_residual(double t, const ProblemParams& params, double rhs);

/// Solves g(t) = λ‖U_p‖_q^{1-p} for the power family and classifies the roots.
/// Every returned root satisfies relative_residual <= tol (tangent roots:
/// <= max(tol, kTangentBand)); otherwise AccuracyError.
SolutionSet solve_scalar(const ProblemParams& params, double norm_q, double tol = kDefaultRootTol);

using CoefficientFn = std::function<double(double)>;

struct ScanSpec {
    double t_min = 0.0;
    double t_max = 0.0;
    std::size_t samples = 10'000;
};

struct GeneralRoots {
    std::vector<double> roots;  // ascending
    /// Every sample satisfied the equation to tol: M(t)/t^{p-1} is constant.
    bool degenerate_continuum = false;
};

/// Roots of M(t)/t^{p-1} = λ·norm_q^{1-p} for an arbitrary continuous M > 0,
/// found by sign changes on a log-spaced scan and refined by bracketing.
/// Default scan: [1e-8, 1e8]·t_ref with t_ref = λ^{-1/(p-1)}·norm_q.
/// Roots of even multiplicity between samples are not detected.
GeneralRoots solve_general(const CoefficientFn& M, double p, double lambda, double norm_q,
                           std::optional<ScanSpec> scan = std::nullopt,
                           double tol = kDefaultRootTol);

/// M(t) = (t^q + b)^r.
CoefficientFn power_family_M(const ProblemParams& params);

/// u(x) = t·U_p(x)/‖U_p‖_q.
struct BlowupSolution {
    double t = 0.0;
    double scale = 0.0;
    double q = 0.0;
    std::shared_ptr<const Profile> profile;

    double operator()(double x) const;
};

BlowupSolution build_solution(double t, std::shared_ptr<const Profile> profile, double q);

/// ‖u‖_q by quadrature of the profile.
double lq_norm_numeric(const BlowupSolution& solution);

/// |M(‖u‖_q) u''(x) - λ u(x)^p| / (λ u(x)^p), with u'' from a centered
/// difference and ‖u‖_q from quadrature.
double ode_residual(const BlowupSolution& solution, const CoefficientFn& M, double lambda,
                    double x);

} // namespace blowup
