#pragma once

#include "blowup/reduction.hpp"

#include <optional>
#include <string_view>

namespace blowup {

/// Scale factor λ^{1/(qr-p+1)} ‖U_p‖_q^{-qr/(qr-p+1)} multiplying U_p when b = 0.
/// Throws RegimeError when qr - p + 1 = 0 and DomainError when b != 0.
double closed_form_b0(const ProblemParams& params, double norm_q);

/// The same scale written through L_p and B_{p,q} = B((p-2q-1)/(2(p+1)), 1/2)
/// only, without going through a norm value.
double closed_form_b0_expanded(const ProblemParams& params);

enum class Branch { Lower, Upper };

std::string_view to_string(Branch branch) noexcept;

struct AsymptoticExpansion {
    Branch branch = Branch::Upper;
    double lambda = 0.0;
    double leading = 0.0;
    double correction = 0.0;
    /// ‖U_p‖_q^{(1-p)/(qr-p+1)}.
    double m_pq = 0.0;
    /// Upper branch: t_2 - leading. Lower branch: t_1/leading - 1.
    /// Filled with the numeric value once a numeric root is attached.
    std::optional<double> R;
    std::optional<double> eta;
    std::optional<double> numeric;
    /// |numeric - (leading + correction)| / |correction|.
    std::optional<double> remainder_ratio;

    double approximation() const noexcept { return leading + correction; }
    /// Records a numeric root and derives R or η and the remainder ratio.
    void attach(double numeric_root);
};

/// t_2 ≈ m λ^{1/e} - (b r m^{1-q}/e) λ^{(1-q)/e} with e = qr - p + 1.
/// Requires qr - p + 1 > 0 and b > 0 (RegimeError otherwise).
AsymptoticExpansion asymptotic_upper(const ProblemParams& params, double norm_q);

/// t_1 ≈ b^{r/(p-1)} λ^{-1/(p-1)} ‖U_p‖_q (1 + (r/(p-1)) b^{e/(p-1)} λ^{-q/(p-1)} ‖U_p‖_q^q).
/// Requires qr - p + 1 > 0 and b > 0 (RegimeError otherwise).
AsymptoticExpansion asymptotic_lower(const ProblemParams& params, double norm_q);

/// Root of (t + b)/t^2 = λ^{2/(p-1)} norm_1^{-2}, the case q = 1, r = (p-1)/2.
/// Requires p > 3 so that q = 1 is admissible.
double exact_quadratic(double p, double b, double lambda, double norm_1);

} // namespace blowup
