#include "blowup/fd.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using blowup::fd_weights;
using doctest::Approx;

TEST_CASE("uniform centered weights") {
    const std::vector<double> x = {-2.0, -1.0, 0.0, 1.0, 2.0};
    const std::vector<double> d1 = fd_weights(0.0, x, 1);
    const std::vector<double> d2 = fd_weights(0.0, x, 2);
    const double e1[] = {1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12};
    const double e2[] = {-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12};
    for (int i = 0; i < 5; ++i) {
        CHECK(d1[i] == Approx(e1[i]).epsilon(1e-14));
        CHECK(d2[i] == Approx(e2[i]).epsilon(1e-14));
    }
}

TEST_CASE("nonuniform weights are exact on quartics") {
    const std::vector<double> x = {0.1, 0.25, 0.3, 0.6, 0.71};
    const double z = 0.3;
    const std::vector<double> w = fd_weights(z, x, 1);
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sum += w[i] * std::pow(x[i], 4.0);
    }
    CHECK(sum == Approx(4.0 * z * z * z).epsilon(1e-11));
}
