#pragma once

#include <random>

#include "projangles/matrix.hpp"

namespace testutil {

inline pa::Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    pa::Matrix m(rows, cols);
    for (double& v : m.data()) v = gauss(rng);
    return m;
}

inline pa::Matrix random_symmetric(std::size_t n, std::uint64_t seed) {
    pa::Matrix m = random_matrix(n, n, seed);
    return (m + m.transposed()) * 0.5;
}

}  // namespace testutil
