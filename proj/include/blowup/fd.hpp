#pragma once

#include <span>
#include <vector>

namespace blowup {

/// Finite-difference weights w_j such that f^{(m)}(z) ≈ Σ_j w_j f(x_j) on an
/// arbitrary set of distinct nodes (Fornberg's recursion).
std::vector<double> fd_weights(double z, std::span<const double> x, int m);

} // namespace blowup
