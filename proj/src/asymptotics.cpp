#include "blowup/asymptotics.hpp"

#include "blowup/errors.hpp"
#include "blowup/quad.hpp"

#include <cmath>

namespace blowup {
namespace {

void require_b0_regime(const ProblemParams& params) {
    params.validate();
    if (params.b != 0.0) {
        throw DomainError("the explicit solution needs b = 0");
    }
    if (classify(params) == Regime::Critical) {
        throw RegimeError("qr - p + 1 = 0: solvable only at lambda = ||U_p||_q^{qr}");
    }
}

void require_fold_regime(const ProblemParams& params) {
    params.validate();
    if (classify(params) != Regime::Super || params.b == 0.0) {
        throw RegimeError("the two-branch expansion needs qr - p + 1 > 0 and b > 0");
    }
}

} // namespace

std::string_view to_string(Branch branch) noexcept {
    return branch == Branch::Lower ? "lower" : "upper";
}

double closed_form_b0(const ProblemParams& params, double norm_q) {
    require_b0_regime(params);
    const double e = params.exponent();
    return std::pow(params.lambda, 1.0 / e) * std::pow(norm_q, -params.q * params.r / e);
}

double closed_form_b0_expanded(const ProblemParams& params) {
    require_b0_regime(params);
    const double p = params.p;
    const double q = params.q;
    const double r = params.r;
    const double e = params.exponent();
    const double lp = quad::lp_constant(p).value;
    const double bpq = quad::beta((p - 2.0 * q - 1.0) / (2.0 * (p + 1.0)), 0.5);
    return std::pow(params.lambda, 1.0 / e) *
           std::pow(0.5 * (p + 1.0), r * (p - 1.0 - q) / ((p - 1.0) * e)) *
           std::pow(lp, -r * (2.0 * q - p + 1.0) / ((p - 1.0) * e)) * std::pow(bpq, -r / e);
}

void AsymptoticExpansion::attach(double numeric_root) {
    numeric = numeric_root;
    if (branch == Branch::Upper) {
        R = numeric_root - leading;
    } else {
        eta = numeric_root / leading - 1.0;
    }
    remainder_ratio = std::abs(numeric_root - approximation()) / std::abs(correction);
}

AsymptoticExpansion asymptotic_upper(const ProblemParams& params, double norm_q) {
    require_fold_regime(params);
    const double e = params.exponent();
    AsymptoticExpansion out;
    out.branch = Branch::Upper;
    out.lambda = params.lambda;
    out.m_pq = std::pow(norm_q, (1.0 - params.p) / e);
    out.leading = out.m_pq * std::pow(params.lambda, 1.0 / e);
    out.correction = -(params.b * params.r * std::pow(out.m_pq, 1.0 - params.q) / e) *
                     std::pow(params.lambda, (1.0 - params.q) / e);
    return out;
}

AsymptoticExpansion asymptotic_lower(const ProblemParams& params, double norm_q) {
    require_fold_regime(params);
    const double p = params.p;
    const double e = params.exponent();
    AsymptoticExpansion out;
    out.branch = Branch::Lower;
    out.lambda = params.lambda;
    out.m_pq = std::pow(norm_q, (1.0 - p) / e);
    out.leading = std::pow(params.b, params.r / (p - 1.0)) *
                  std::pow(params.lambda, -1.0 / (p - 1.0)) * norm_q;
    out.correction = out.leading * (params.r / (p - 1.0)) *
                     std::pow(params.b, e / (p - 1.0)) *
                     std::pow(params.lambda, -params.q / (p - 1.0)) * std::pow(norm_q, params.q);
    return out;
}

double exact_quadratic(double p, double b, double lambda, double norm_1) {
    if (!(p > 3.0)) {
        throw DomainError("q = 1 needs p > 3 (q must satisfy 0 < q < (p-1)/2)");
    }
    if (!(b >= 0.0) || !(lambda > 0.0) || !(norm_1 > 0.0)) {
        throw DomainError("exact_quadratic needs b >= 0, lambda > 0 and a positive norm");
    }
    // Both terms under the root are non-negative, so the + root has no cancellation.
    const double k = std::pow(lambda, 2.0 / (p - 1.0));
    return norm_1 * (norm_1 + std::sqrt(norm_1 * norm_1 + 4.0 * b * k)) / (2.0 * k);
}

} // namespace blowup
