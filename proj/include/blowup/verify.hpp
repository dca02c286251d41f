#pragma once

#include "blowup/profile.hpp"

#include <string>
#include <vector>

namespace blowup {

struct Check {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;
};

/// Largest relative residual of (U')² = (2/(p+1))(U^{p+1} - μ^{p+1}) over the
/// interior table nodes, with U' from 5-point differences on the table itself.
double energy_identity_residual(const Profile& profile);

/// Least-squares slope of log U_p(x) against -log(1 - x) on points log-spaced
/// in 1 - x between 1 - x_lo and 1 - x_hi.
double boundary_rate_exponent(const Profile& profile, double x_lo = 0.99, double x_hi = 0.9999,
                              int samples = 41);

/// Runs the invariant suites of every module. Each check reports the measured
/// value and the threshold it was held to.
std::vector<Check> run_verification();

} // namespace blowup
