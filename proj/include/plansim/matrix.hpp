// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The plansim Authors

#pragma once

#include <plansim/error.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace plansim {

/// Labeled dense matrix of scores in [0,1], row-major.
struct SimilarityMatrix {
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    std::vector<double> values;

    SimilarityMatrix() = default;
    SimilarityMatrix(std::vector<std::string> rows, std::vector<std::string> cols)
        : row_labels(std::move(rows)), col_labels(std::move(cols)),
          values(row_labels.size() * col_labels.size(), 0.0) {}

    std::size_t rows() const noexcept { return row_labels.size(); }
    std::size_t cols() const noexcept { return col_labels.size(); }

    double& at(std::size_t r, std::size_t c) { return values[r * cols() + c]; }
    double at(std::size_t r, std::size_t c) const { return values[r * cols() + c]; }

    bool is_square_labeled() const { return row_labels == col_labels; }

    friend bool operator==(const SimilarityMatrix&, const SimilarityMatrix&) = default;
};

} // namespace plansim
