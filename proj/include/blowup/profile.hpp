#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

namespace blowup {

/// One node of the inverse time map: position x at which the profile takes value u.
struct TableRow {
    double u = 0.0;
    double x = 0.0;
};

/// Tabulated representation of the unique positive solution U_p of
/// U'' = U^p on (-1, 1) that blows up at both endpoints.
///
/// The table stores x(u) for u from the minimum μ_p up to u_max, where
/// x(u) = sqrt((p+1)/2) ∫_μ^u ds / sqrt(s^{p+1} - μ^{p+1}). Evaluation between
/// nodes inverts the time map; beyond the last node the leading boundary
/// asymptotic C_p (1 - |x|)^{-2/(p-1)} is used.
///
/// A Profile is immutable after construction. Copies share the L^q norm cache,
/// which is guarded so concurrent readers see consistent values.
class Profile {
public:
    double p() const noexcept { return p_; }
    double mu() const noexcept { return mu_; }
    double u_max() const noexcept { return table_.back().u; }
    std::span<const TableRow> table() const noexcept { return table_; }

    /// C_p = ((p-1)/sqrt(2(p+1)))^{-2/(p-1)}.
    double boundary_constant() const noexcept { return boundary_constant_; }
    /// 1 - x at the last table node, computed directly from the tail of the time map.
    double boundary_gap() const noexcept { return boundary_gap_; }

    /// x(u) for u >= μ_p.
    double time_map(double u) const;
    /// dx/du = sqrt((p+1)/2) / sqrt(u^{p+1} - μ^{p+1}).
    double time_map_derivative(double u) const;

    /// Closed-form ‖U_p‖_{L^q(-1,1)}, computed once per q and cached.
    double norm(double q) const;

private:
    friend Profile build_profile(double p, std::optional<double> u_max, std::size_t n_points);

    struct NormCache {
        std::mutex mutex;
        std::map<double, double> values;
    };

    Profile() = default;

    double segment(double u_from, double u_to) const;

    double p_ = 0.0;
    double mu_ = 0.0;
    double kappa_ = 0.0;  // sqrt((p+1)/2) μ^{(1-p)/2}
    double boundary_constant_ = 0.0;
    double boundary_gap_ = 0.0;
    std::vector<TableRow> table_;
    std::vector<double> gaps_;    // 1 - x_i, accumulated from the boundary side
    std::vector<double> slopes_;  // monotone cubic slopes du/dx at each node
    std::shared_ptr<NormCache> cache_;

    friend double eval_U(const Profile& profile, double x);
    friend double eval_U_near_boundary(const Profile& profile, double gap);
};

inline constexpr std::size_t kDefaultProfilePoints = 512;

/// μ_p = U_p(0) = (sqrt((p+1)/2) L_p)^{2/(p-1)}, with L_p from quadrature.
double mu(double p);

/// ‖U_p‖_{L^q} from the Beta-function closed form. Requires 0 < q < (p-1)/2.
double lq_norm_closed(double p, double q);

/// Largest u the default table reaches: μ_p·10^4, lowered when needed so that
/// 1 - x(u_max) stays resolvable in double precision.
double default_u_max(double p);

/// Builds the time-map table on a grid geometric in u - μ_p.
Profile build_profile(double p, std::optional<double> u_max = std::nullopt,
                      std::size_t n_points = kDefaultProfilePoints);

/// U_p(x) for |x| < 1.
double eval_U(const Profile& profile, double x);

/// U_p(1 - gap) for 0 < gap <= 1, without forming 1 - gap. Keeps full relative
/// precision when the point is within a few ulps of the blow-up boundary.
double eval_U_near_boundary(const Profile& profile, double gap);

/// ‖U_p‖_{L^q} by quadrature of eval_U in x, independent of the Beta closed form.
double lq_norm_numeric(const Profile& profile, double q);

} // namespace blowup
