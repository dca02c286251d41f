#include "blowup/quad.hpp"

#include "blowup/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

namespace blowup::quad {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// 15-point Kronrod abscissae on [-1, 1] (non-negative half, descending) and
// weights; odd entries plus the centre are the embedded 7-point Gauss nodes.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr std::size_t kPanelEvaluations = 15;

struct Panel {
    double a = 0.0;
    double b = 0.0;
    double value = 0.0;
    double error = 0.0;
    double abs_value = 0.0;

    bool operator<(const Panel& other) const { return error < other.error; }
};

double checked(const Integrand& f, double x) {
    const double fx = f(x);
    if (!std::isfinite(fx)) {
        throw DomainError("integrand is not finite at x = " + std::to_string(x));
    }
    return fx;
}

Panel gauss_kronrod(const Integrand& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = checked(f, center);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    double abs_kronrod = std::abs(fc) * kKronrodWeights[7];
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kNodes[j];
        const double f1 = checked(f, center - dx);
        const double f2 = checked(f, center + dx);
        kronrod += kKronrodWeights[j] * (f1 + f2);
        abs_kronrod += kKronrodWeights[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) {
            gauss += kGaussWeights[j / 2] * (f1 + f2);
        }
    }
    Panel panel{a, b, kronrod * half, std::abs((kronrod - gauss) * half),
                abs_kronrod * std::abs(half)};
    // Differences below a few ulps of the panel mass are rounding, not truncation.
    panel.error = std::max(panel.error, 50.0 * kEps * panel.abs_value);
    return panel;
}

bool refinable(const Panel& panel) {
    const double mid = 0.5 * (panel.a + panel.b);
    const double scale = std::max(std::abs(panel.a), std::abs(panel.b));
    return mid > panel.a && mid < panel.b && (panel.b - panel.a) > 64.0 * kEps * scale;
}

QuadResult finite_part(const Integrand& f, double a, double b, bool lower, bool upper, double tol,
                       std::size_t budget) {
    if (lower && upper) {
        const double mid = 0.5 * (a + b);
        const QuadResult left = finite_part(f, a, mid, true, false, 0.5 * tol, budget);
        const QuadResult right = finite_part(f, mid, b, false, true, 0.5 * tol,
                                             budget - std::min(budget, left.evaluations));
        return {left.value + right.value, left.error_estimate + right.error_estimate,
                left.evaluations + right.evaluations};
    }
    if (lower) {
        const Integrand g = [&f, a](double u) { return u == 0.0 ? 0.0 : 2.0 * u * f(a + u * u); };
        return integrate_adaptive(g, 0.0, std::sqrt(b - a), tol, budget);
    }
    if (upper) {
        // x = b - u² reverses orientation: ∫_a^b f dx = ∫_0^{√(b-a)} 2u f(b - u²) du.
        const Integrand g = [&f, b](double u) { return u == 0.0 ? 0.0 : 2.0 * u * f(b - u * u); };
        return integrate_adaptive(g, 0.0, std::sqrt(b - a), tol, budget);
    }
    return integrate_adaptive(f, a, b, tol, budget);
}

TailEstimate power_law_tail(const Integrand& f, double t, std::size_t& evaluations) {
    const double f1 = std::abs(f(t));
    const double f2 = std::abs(f(2.0 * t));
    evaluations += 2;
    if (f1 == 0.0 && f2 == 0.0) {
        return {0.0, 0.0};
    }
    const double decay = std::log2(f1 / f2);
    if (!(decay > 1.0) || !std::isfinite(decay)) {
        return {0.0, infinity};
    }
    return {0.0, f1 * t / (decay - 1.0)};
}

} // namespace

QuadResult integrate_adaptive(const Integrand& f, double a, double b, double tol,
                              std::size_t max_evaluations) {
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw DomainError("integrate_adaptive requires finite limits");
    }
    if (!(tol > 0.0)) {
        throw DomainError("integration tolerance must be positive");
    }
    if (max_evaluations < kPanelEvaluations) {
        throw AccuracyError("evaluation budget smaller than one panel", 0.0, infinity);
    }
    if (b < a) {
        QuadResult flipped = integrate_adaptive(f, b, a, tol, max_evaluations);
        flipped.value = -flipped.value;
        return flipped;
    }

    std::priority_queue<Panel> active;
    std::vector<Panel> settled;
    Panel first = gauss_kronrod(f, a, b);
    std::size_t evaluations = kPanelEvaluations;
    double value = first.value;
    double error = first.error;
    double abs_value = first.abs_value;
    active.push(first);

    auto target = [&] { return std::max(tol, 100.0 * kEps * abs_value); };

    while (error > target()) {
        if (active.empty()) {
            throw AccuracyError("adaptive quadrature reached the resolution limit", value, error);
        }
        if (evaluations + 2 * kPanelEvaluations > max_evaluations) {
            throw AccuracyError("adaptive quadrature exhausted its evaluation budget", value,
                                error);
        }
        const Panel worst = active.top();
        active.pop();
        if (!refinable(worst)) {
            settled.push_back(worst);
            continue;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        const Panel left = gauss_kronrod(f, worst.a, mid);
        const Panel right = gauss_kronrod(f, mid, worst.b);
        evaluations += 2 * kPanelEvaluations;
        value += left.value + right.value - worst.value;
        error = std::max(0.0, error + left.error + right.error - worst.error);
        abs_value += left.abs_value + right.abs_value - worst.abs_value;
        active.push(left);
        active.push(right);
    }

    // Re-sum from the panels so running-update drift does not leak into the result.
    QuadResult result{0.0, 0.0, evaluations};
    for (; !active.empty(); active.pop()) {
        settled.push_back(active.top());
    }
    std::sort(settled.begin(), settled.end(),
              [](const Panel& l, const Panel& r) { return l.a < r.a; });
    for (const Panel& panel : settled) {
        result.value += panel.value;
        result.error_estimate += panel.error;
    }
    return result;
}

QuadResult integrate_singular(const Integrand& f, double a, double b, Endpoint singular_at,
                              const Options& options) {
    if (!std::isfinite(a) || std::isnan(b) || !(b > a)) {
        throw DomainError("integrate_singular requires a finite a and b > a");
    }
    if (!(options.tol > 0.0)) {
        throw DomainError("integration tolerance must be positive");
    }
    const bool lower = (static_cast<unsigned>(singular_at) & 1u) != 0;
    const bool upper = (static_cast<unsigned>(singular_at) & 2u) != 0;

    std::size_t evaluations = 0;
    const Integrand counted = [&f, &evaluations](double x) {
        ++evaluations;
        return f(x);
    };

    if (std::isfinite(b)) {
        QuadResult r = finite_part(counted, a, b, lower, upper, options.tol, options.max_evaluations);
        r.evaluations = evaluations;
        return r;
    }
    if (upper) {
        throw DomainError("an infinite endpoint cannot carry an inverse-square-root singularity");
    }

    QuadResult result;
    double c = a;
    double tol_body = 0.9 * options.tol;
    if (lower || a <= 0.0) {
        c = a > 0.0 ? 2.0 * a : std::max(1.0, a + 1.0);
        const QuadResult head =
            finite_part(counted, a, c, lower, false, 0.5 * options.tol, options.max_evaluations);
        result.value += head.value;
        result.error_estimate += head.error_estimate;
        tol_body = 0.4 * options.tol;
    }

    const auto tail_at = [&](double t) {
        return options.tail ? options.tail(t) : power_law_tail(f, t, evaluations);
    };
    const double s_max = std::log(1e300 / c);
    double s_end = 1.0;
    TailEstimate tail = tail_at(c * std::exp(s_end));
    while (tail.bound > 0.1 * options.tol) {
        if (s_end >= s_max) {
            throw AccuracyError("integrand tail does not decay fast enough for truncation",
                                result.value, infinity);
        }
        s_end = std::min(2.0 * s_end, s_max);
        tail = tail_at(c * std::exp(s_end));
    }

    const Integrand log_mapped = [&counted, c](double s) {
        const double t = c * std::exp(s);
        return counted(t) * t;
    };
    const std::size_t used = std::min(evaluations, options.max_evaluations);
    const QuadResult body =
        integrate_adaptive(log_mapped, 0.0, s_end, tol_body, options.max_evaluations - used);

    result.value += body.value + tail.value;
    result.error_estimate += body.error_estimate + tail.bound;
    result.evaluations = evaluations;
    return result;
}

double beta(double x, double y) {
    if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
        throw DomainError("beta requires positive finite arguments");
    }
    const auto [lo, hi] = std::minmax(x, y);
    return std::exp(boost::math::lgamma(lo) + boost::math::lgamma(hi) -
                    boost::math::lgamma(lo + hi));
}

QuadResult tail_moment(double p, double q) {
    if (!(p > 1.0) || !std::isfinite(p)) {
        throw DomainError("p must satisfy p > 1");
    }
    if (!(q < 0.5 * (p - 1.0)) || !std::isfinite(q)) {
        throw DomainError("the tail moment diverges unless q < (p-1)/2");
    }
    constexpr double tol = 1e-12;
    constexpr std::size_t budget = 1'000'000;
    const double decay = q - 0.5 * (p + 1.0);  // < -1

    // [1, 2] in t = 1 + u²; expm1/log1p keep (1+u²)^{p+1} - 1 accurate near u = 0.
    const Integrand near = [p, q](double u) {
        if (u == 0.0) {
            return 2.0 / std::sqrt(p + 1.0);
        }
        const double u2 = u * u;
        return 2.0 * std::pow(1.0 + u2, q) / std::sqrt(std::expm1((p + 1.0) * std::log1p(u2)) / u2);
    };
    const QuadResult head = integrate_adaptive(near, 0.0, 1.0, 0.5 * tol, budget);

    const Integrand far = [p, decay](double t) {
        const double lt = std::log(t);
        return std::exp(decay * lt) / std::sqrt(-std::expm1(-(p + 1.0) * lt));
    };
    // Up to T = 1e20 only the rigorous bound is used; past it the first two
    // terms of the binomial series of (1 - t^{-(p+1)})^{-1/2} are added.
    const TailModel tail = [p, decay](double t) -> TailEstimate {
        const double lt = std::log(t);
        const double lead = std::exp((decay + 1.0) * lt) / (-decay - 1.0);
        const double x = std::exp(-(p + 1.0) * lt);
        if (t < 1e20) {
            return {0.0, lead / std::sqrt(1.0 - x)};
        }
        const double second = 0.5 * std::exp((decay + 1.0) * lt) * x / (p - decay);
        return {lead + second, lead * x * x / (1.0 - x)};
    };
    Options options;
    options.tol = 0.5 * tol;
    options.max_evaluations = budget - head.evaluations;
    options.tail = tail;
    const QuadResult body = integrate_singular(far, 2.0, infinity, Endpoint::none, options);

    return {head.value + body.value, head.error_estimate + body.error_estimate,
            head.evaluations + body.evaluations};
}

QuadResult lp_constant(double p) {
    if (!(p > 1.0) || !std::isfinite(p)) {
        throw DomainError("L_p diverges unless p > 1");
    }
    return tail_moment(p, 0.0);
}

double tail_moment_closed(double p, double q) {
    if (!(p > 1.0) || !std::isfinite(p)) {
        throw DomainError("p must satisfy p > 1");
    }
    if (!(q < 0.5 * (p - 1.0))) {
        throw DomainError("the tail moment diverges unless q < (p-1)/2");
    }
    return beta((p - 2.0 * q - 1.0) / (2.0 * (p + 1.0)), 0.5) / (p + 1.0);
}

} // namespace blowup::quad
