#include "blowup/profile.hpp"

#include "blowup/errors.hpp"
#include "blowup/quad.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace blowup {
namespace {

constexpr double kSegmentTol = 1e-15;
// Smallest 1 - x(u_max) the default table is allowed to reach.
constexpr double kMinBoundaryGap = 1e-8;
constexpr int kNewtonSteps = 5;

void require_p(double p) {
    if (!(p > 1.0) || !std::isfinite(p)) {
        throw DomainError("p must satisfy p > 1");
    }
}

void require_q(double p, double q) {
    if (!(q > 0.0 && q < 0.5 * (p - 1.0))) {
        throw DomainError("q must satisfy 0 < q < (p-1)/2");
    }
}

// ∫_{t_from}^{t_to} dt / sqrt(t^{p+1} - 1) for 1 <= t_from <= t_to.
double unit_segment(double p, double t_from, double t_to) {
    if (t_to <= t_from) {
        return 0.0;
    }
    if (t_from == 1.0) {
        const quad::Integrand near = [p](double w) {
            if (w == 0.0) {
                return 2.0 / std::sqrt(p + 1.0);
            }
            const double w2 = w * w;
            return 2.0 / std::sqrt(std::expm1((p + 1.0) * std::log1p(w2)) / w2);
        };
        return quad::integrate_adaptive(near, 0.0, std::sqrt(t_to - 1.0), kSegmentTol).value;
    }
    const quad::Integrand f = [p](double t) {
        return 1.0 / std::sqrt(std::expm1((p + 1.0) * std::log(t)));
    };
    return quad::integrate_adaptive(f, t_from, t_to, kSegmentTol).value;
}

double closed_norm(double p, double mu_p, double q) {
    const double b = quad::beta((p - 2.0 * q - 1.0) / (2.0 * (p + 1.0)), 0.5);
    const double norm_q = std::sqrt(2.0 / (p + 1.0)) * std::pow(mu_p, 0.5 * (2.0 * q - p + 1.0)) * b;
    return std::pow(norm_q, 1.0 / q);
}

double time_map_scale(double p, double mu_p) {
    return std::sqrt(0.5 * (p + 1.0)) * std::pow(mu_p, 0.5 * (1.0 - p));
}

// Fritsch-Carlson monotone cubic slopes.
std::vector<double> monotone_slopes(const std::vector<TableRow>& rows) {
    const std::size_t n = rows.size();
    std::vector<double> h(n - 1);
    std::vector<double> delta(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        h[k] = rows[k + 1].x - rows[k].x;
        delta[k] = (rows[k + 1].u - rows[k].u) / h[k];
    }
    std::vector<double> d(n, 0.0);
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (delta[k - 1] * delta[k] <= 0.0) {
            continue;
        }
        const double w1 = 2.0 * h[k] + h[k - 1];
        const double w2 = h[k] + 2.0 * h[k - 1];
        d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (s * d0 <= 0.0) {
            s = 0.0;
        } else if (d0 * d1 <= 0.0 && std::abs(s) > 3.0 * std::abs(d0)) {
            s = 3.0 * d0;
        }
        return s;
    };
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    return d;
}

} // namespace

double mu(double p) {
    require_p(p);
    const double lp = quad::lp_constant(p).value;
    return std::pow(std::sqrt(0.5 * (p + 1.0)) * lp, 2.0 / (p - 1.0));
}

double lq_norm_closed(double p, double q) {
    require_p(p);
    require_q(p, q);
    return closed_norm(p, mu(p), q);
}

double default_u_max(double p) {
    require_p(p);
    const double mu_p = mu(p);
    // 1 - x(u) ≈ (2κ/(p-1)) (u/μ)^{(1-p)/2} for large u.
    const double kappa = time_map_scale(p, mu_p);
    const double ratio_cap = std::pow(2.0 * kappa / ((p - 1.0) * kMinBoundaryGap), 2.0 / (p - 1.0));
    return mu_p * std::min(1e4, ratio_cap);
}

Profile build_profile(double p, std::optional<double> u_max, std::size_t n_points) {
    require_p(p);
    if (n_points < 16) {
        throw DomainError("a profile table needs at least 16 points");
    }
    Profile profile;
    profile.p_ = p;
    profile.mu_ = mu(p);
    profile.kappa_ = time_map_scale(p, profile.mu_);
    profile.boundary_constant_ =
        std::pow((p - 1.0) / std::sqrt(2.0 * (p + 1.0)), -2.0 / (p - 1.0));
    profile.cache_ = std::make_shared<Profile::NormCache>();

    const double top = u_max.value_or(default_u_max(p));
    if (!(top > profile.mu_) || !std::isfinite(top)) {
        throw DomainError("u_max must exceed mu_p");
    }

    const double mu_p = profile.mu_;
    const double span = top - mu_p;
    const double first = std::min(1e-3 * mu_p, 1e-3 * span);
    const double ratio = span / first;

    auto& rows = profile.table_;
    std::vector<double> lengths;  // x_{i+1} - x_i before rounding into x
    rows.reserve(n_points);
    lengths.reserve(n_points - 1);
    rows.push_back({mu_p, 0.0});
    for (std::size_t i = 1; i < n_points; ++i) {
        const double frac = static_cast<double>(i - 1) / static_cast<double>(n_points - 2);
        const double u = i + 1 == n_points ? top : mu_p + first * std::pow(ratio, frac);
        lengths.push_back(profile.segment(rows.back().u, u));
        const double x = rows.back().x + lengths.back();
        if (!(x > rows.back().x) || !(x < 1.0)) {
            throw DomainError("u_max too large: the time map reaches x = 1 in double precision");
        }
        rows.push_back({u, x});
    }

    quad::Options tail_options;
    const double t_last = top / mu_p;
    const double gap_scale = 2.0 * std::pow(t_last, 0.5 * (1.0 - p)) / (p - 1.0);
    tail_options.tol = 1e-13 * gap_scale;
    const quad::Integrand f = [p](double t) {
        return 1.0 / std::sqrt(std::expm1((p + 1.0) * std::log(t)));
    };
    profile.boundary_gap_ =
        profile.kappa_ *
        quad::integrate_singular(f, t_last, quad::infinity, quad::Endpoint::none, tail_options)
            .value;

    profile.gaps_.assign(n_points, 0.0);
    profile.gaps_.back() = profile.boundary_gap_;
    for (std::size_t i = n_points - 1; i-- > 0;) {
        profile.gaps_[i] = profile.gaps_[i + 1] + lengths[i];
    }

    profile.slopes_ = monotone_slopes(rows);
    return profile;
}

double Profile::segment(double u_from, double u_to) const {
    const double t_from = u_from == mu_ ? 1.0 : u_from / mu_;
    return kappa_ * unit_segment(p_, t_from, u_to / mu_);
}

double Profile::time_map(double u) const {
    if (!(u >= mu_)) {
        throw DomainError("the time map is defined for u >= mu_p");
    }
    const auto it = std::upper_bound(table_.begin(), table_.end(), u,
                                     [](double value, const TableRow& row) { return value < row.u; });
    const TableRow& base = *std::prev(it);
    return base.x + segment(base.u, u);
}

double Profile::time_map_derivative(double u) const {
    const double t = u / mu_;
    return kappa_ / (mu_ * std::sqrt(std::expm1((p_ + 1.0) * std::log(t))));
}

double Profile::norm(double q) const {
    require_q(p_, q);
    std::lock_guard lock(cache_->mutex);
    auto [it, inserted] = cache_->values.try_emplace(q, 0.0);
    if (inserted) {
        it->second = closed_norm(p_, mu_, q);
    }
    return it->second;
}

namespace {

// Root of an increasing residual in (lo, hi): Newton from the guess, bisection
// when a step leaves the bracket or the step budget runs out.
template <typename Residual, typename Slope>
double polish(double lo, double hi, double guess, Residual residual, Slope slope) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    double u = guess > lo && guess < hi ? guess : 0.5 * (lo + hi);
    for (int step = 0; step < kNewtonSteps; ++step) {
        const double r = residual(u);
        if (r == 0.0) {
            return u;
        }
        (r > 0.0 ? hi : lo) = u;
        double next = u - r / slope(u);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - u) <= 4.0 * eps * u) {
            return next;
        }
        u = next;
    }
    while (hi - lo > 4.0 * eps * hi) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        (residual(mid) > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

double hermite(double x, const TableRow& a, const TableRow& b, double slope_a, double slope_b) {
    const double h = b.x - a.x;
    const double s = (x - a.x) / h;
    const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    const double h10 = s * (1.0 - s) * (1.0 - s);
    const double h01 = s * s * (3.0 - 2.0 * s);
    const double h11 = s * s * (s - 1.0);
    return h00 * a.u + h10 * h * slope_a + h01 * b.u + h11 * h * slope_b;
}

} // namespace

double eval_U(const Profile& profile, double x) {
    if (!(std::abs(x) < 1.0)) {
        throw DomainError("|x| must be < 1: U_p blows up at x = -1 and x = 1");
    }
    x = std::abs(x);
    if (x == 0.0) {
        return profile.mu_;
    }
    if (x >= 0.5) {
        return eval_U_near_boundary(profile, 1.0 - x);  // exact subtraction for x >= 1/2
    }
    const auto& rows = profile.table_;
    if (x >= rows.back().x) {
        return profile.boundary_constant_ * std::pow(1.0 - x, -2.0 / (profile.p_ - 1.0));
    }
    const auto it = std::upper_bound(rows.begin(), rows.end(), x,
                                     [](double value, const TableRow& row) { return value < row.x; });
    const std::size_t j = static_cast<std::size_t>(std::distance(rows.begin(), it)) - 1;
    const TableRow& a = rows[j];
    const TableRow& b = rows[j + 1];
    const double guess = hermite(x, a, b, profile.slopes_[j], profile.slopes_[j + 1]);
    return polish(
        a.u, b.u, guess, [&](double u) { return a.x + profile.segment(a.u, u) - x; },
        [&](double u) { return profile.time_map_derivative(u); });
}

double eval_U_near_boundary(const Profile& profile, double gap) {
    if (!(gap > 0.0 && gap <= 1.0)) {
        throw DomainError("the distance to the boundary must lie in (0, 1]");
    }
    if (gap > 0.5) {
        return eval_U(profile, 1.0 - gap);
    }
    const auto& gaps = profile.gaps_;
    if (gap <= gaps.back()) {
        return profile.boundary_constant_ * std::pow(gap, -2.0 / (profile.p_ - 1.0));
    }
    // gaps is decreasing; find j with gaps[j] >= gap > gaps[j+1].
    const auto it = std::upper_bound(gaps.begin(), gaps.end(), gap, std::greater<>());
    const std::size_t j = static_cast<std::size_t>(std::distance(gaps.begin(), it)) - 1;
    const auto& rows = profile.table_;
    const TableRow& a = rows[j];
    const TableRow& b = rows[j + 1];
    const double guess = hermite(1.0 - gap, a, b, profile.slopes_[j], profile.slopes_[j + 1]);
    // Measured from the outer node: gap(u) = gaps[j+1] + x(u_{j+1}) - x(u).
    return polish(
        a.u, b.u, guess, [&](double u) { return gap - gaps[j + 1] - profile.segment(u, b.u); },
        [&](double u) { return profile.time_map_derivative(u); });
}

double lq_norm_numeric(const Profile& profile, double q) {
    const double p = profile.p();
    require_q(p, q);
    const double x_last = profile.table().back().x;
    const double gap = profile.boundary_gap();
    const double tol = 1e-11 * std::pow(profile.mu(), q);

    const double split = std::min(0.5, x_last);
    const quad::Integrand centre = [&profile, q](double x) { return std::pow(eval_U(profile, x), q); };
    double mass = quad::integrate_adaptive(centre, 0.0, split, tol).value;

    if (split < x_last) {
        // x = 1 - e^{-s} stretches the approach to the blow-up point.
        const quad::Integrand stretched = [&profile, q](double s) {
            const double d = std::exp(-s);
            return std::pow(eval_U_near_boundary(profile, d), q) * d;
        };
        mass += quad::integrate_adaptive(stretched, -std::log1p(-split), -std::log(gap), tol).value;
    }

    // Beyond the table: ∫_0^gap (C_p d^{-2/(p-1)})^q dd.
    const double k = 2.0 / (p - 1.0);
    mass += std::pow(profile.boundary_constant(), q) * std::pow(gap, 1.0 - k * q) / (1.0 - k * q);
    return std::pow(2.0 * mass, 1.0 / q);
}

} // namespace blowup
