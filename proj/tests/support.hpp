#pragma once

#include "fastrcs/dataset.hpp"
#include "fastrcs/random.hpp"

namespace fastrcs::testing {

/// n rows of N(0, I) predictors (p - 1 columns) with y = x'slope + noise * N(0, 1).
inline Dataset gaussian_data(Index n, Index p, std::uint64_t seed, double noise = 1.0,
                             double slope = 0.0)
{
    Rng rng(seed);
    std::normal_distribution<double> g;
    Matrix x(n, p - 1);
    Vector y(n);
    for (Index i = 0; i < n; ++i) {
        double fitted = 0.0;
        for (Index j = 0; j < p - 1; ++j) {
            x(i, j) = g(rng);
            fitted += slope * x(i, j);
        }
        y(i) = fitted + noise * g(rng);
    }
    return Dataset(std::move(x), std::move(y));
}

} // namespace fastrcs::testing
