#pragma once

#include <cstddef>
#include <functional>
#include <limits>

namespace blowup::quad {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;  // absolute
    std::size_t evaluations = 0;
};

/// Endpoints at which the integrand may behave like |x - endpoint|^{-1/2}.
enum class Endpoint : unsigned { none = 0, lower = 1, upper = 2, both = 3 };

/// Approximation of the neglected piece of an infinite integral,
/// ∫_T^∞ f ≈ value with |∫_T^∞ f - value| <= bound.
struct TailEstimate {
    double value = 0.0;
    double bound = 0.0;
};

using Integrand = std::function<double(double)>;
using TailModel = std::function<TailEstimate(double)>;

struct Options {
    double tol = 1e-12;
    std::size_t max_evaluations = 1'000'000;
    /// Tail model for an infinite upper limit. When empty, |f| is assumed to
    /// decay like a power law whose exponent is fitted from f(T) and f(2T).
    TailModel tail;
};

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// Globally adaptive 15-point Gauss-Kronrod on a finite interval with an
/// absolute tolerance. Throws AccuracyError when the budget is exhausted.
QuadResult integrate_adaptive(const Integrand& f, double a, double b, double tol = 1e-12,
                              std::size_t max_evaluations = 1'000'000);

/// ∫_a^b f with inverse-square-root singularities allowed at the declared
/// endpoints and b = +∞ allowed.
///
/// Singular endpoints are removed with x = a + u² (resp. x = b - u²) so no node
/// touches the singularity. An infinite range is split at c > 0; [c, T] is
/// integrated in s = log(x/c) and the remainder is taken from the tail model,
/// whose bound is added to the error estimate. T grows until the bound drops
/// below tol/10.
QuadResult integrate_singular(const Integrand& f, double a, double b, Endpoint singular_at,
                              const Options& options = {});

/// Euler Beta function B(x, y) = Γ(x)Γ(y)/Γ(x+y), evaluated through log-Gamma.
/// Exactly symmetric in its arguments.
double beta(double x, double y);

/// L_p = ∫_1^∞ dt / sqrt(t^{p+1} - 1) by quadrature.
QuadResult lp_constant(double p);

/// ∫_1^∞ t^q / sqrt(t^{p+1} - 1) dt by quadrature; requires q < (p-1)/2.
QuadResult tail_moment(double p, double q);

/// Closed form of tail_moment: B((p - 2q - 1)/(2(p+1)), 1/2) / (p+1).
double tail_moment_closed(double p, double q);

} // namespace blowup::quad
