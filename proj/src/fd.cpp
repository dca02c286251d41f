#include "blowup/fd.hpp"

#include "blowup/errors.hpp"

#include <cstddef>

namespace blowup {

std::vector<double> fd_weights(double z, std::span<const double> x, int m) {
    const std::size_t n = x.size();
    if (m < 0 || n < static_cast<std::size_t>(m) + 1) {
        throw DomainError("fd_weights needs at least m + 1 nodes");
    }
    const std::size_t order = static_cast<std::size_t>(m);
    // c[j][k]: weight of node j for the k-th derivative.
    std::vector<std::vector<double>> c(n, std::vector<double>(order + 1, 0.0));
    double c1 = 1.0;
    double c4 = x[0] - z;
    c[0][0] = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t mn = std::min(i, order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - z;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (std::size_t k = mn; k >= 1; --k) {
                    c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (std::size_t k = mn; k >= 1; --k) {
                c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (std::size_t j = 0; j < n; ++j) {
        w[j] = c[j][order];
    }
    return w;
}

} // namespace blowup
