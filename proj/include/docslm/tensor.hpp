// Copyright 2026 The docslm-lite Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace docslm {

/// Dense row-major matrix of token embeddings. Rows are tokens, columns are
/// embedding dimensions. A matrix may have zero rows but always has at least
/// one column.
class FeatureMatrix {
public:
    FeatureMatrix(std::size_t rows, std::size_t cols);
    FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    /// Builds a matrix from nested rows; all rows must share the same width.
    static FeatureMatrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0; }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    const std::vector<double>& data() const noexcept { return data_; }

    /// "RxC" for error messages.
    std::string shape_string() const;

    bool all_finite() const noexcept;

    /// Appends the rows of `other` below this matrix. Column counts must match.
    void append_rows(const FeatureMatrix& other);

    friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

FeatureMatrix matmul(const FeatureMatrix& a, const FeatureMatrix& b);

FeatureMatrix transpose(const FeatureMatrix& m);

/// Elementwise a + b; shapes must match.
FeatureMatrix add(const FeatureMatrix& a, const FeatureMatrix& b);

/// Row-wise softmax with max subtraction.
FeatureMatrix softmax_rows(const FeatureMatrix& m);

}  // namespace docslm
