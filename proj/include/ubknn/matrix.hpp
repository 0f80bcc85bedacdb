#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ubknn {

/// Dense row-major matrix of doubles. Rows are feature vectors.
struct Matrix {
    std::int64_t rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::int64_t r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    std::span<const double> row(std::int64_t i) const {
        return {data.data() + static_cast<std::size_t>(i) * cols, static_cast<std::size_t>(cols)};
    }
    std::span<double> row(std::int64_t i) {
        return {data.data() + static_cast<std::size_t>(i) * cols, static_cast<std::size_t>(cols)};
    }
    double at(std::int64_t i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
    double& at(std::int64_t i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
};

} // namespace ubknn
