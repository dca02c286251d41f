#pragma once

#include <stdexcept>
#include <string>

namespace blowup {

/// An argument lies outside the region where the problem is defined
/// (p <= 1, q outside (0, (p-1)/2), |x| >= 1, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The requested quantity does not exist in the parameter regime at hand,
/// e.g. an interior fold point when qr - p + 1 <= 0.
class RegimeError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A numerical procedure ran out of budget before meeting its tolerance.
/// Carries the best estimate reached so callers can still inspect it.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double best_estimate, double error_estimate)
        : std::runtime_error(what), best_(best_estimate), error_(error_estimate) {}

    double best_estimate() const noexcept { return best_; }
    double error_estimate() const noexcept { return error_; }

private:
    double best_;
    double error_;
};

} // namespace blowup
