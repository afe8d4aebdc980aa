// Copyright 2026 The docslm-lite Authors
// SPDX-License-Identifier: Apache-2.0

#include "docslm/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "docslm/errors.hpp"

namespace docslm {

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t cols)
    : FeatureMatrix(rows, cols, std::vector<double>(rows * cols, 0.0)) {}

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (cols_ == 0) {
        throw ShapeError("FeatureMatrix needs at least one column");
    }
    if (data_.size() != rows_ * cols_) {
        throw ShapeError("FeatureMatrix data size " + std::to_string(data_.size()) +
                         " does not match shape " + shape_string());
    }
}

FeatureMatrix FeatureMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) {
        throw ShapeError("from_rows: cannot infer column count from zero rows");
    }
    const std::size_t cols = rows.front().size();
    std::vector<double> data;
    data.reserve(rows.size() * cols);
    for (const auto& r : rows) {
        if (r.size() != cols) {
            throw ShapeError("from_rows: ragged rows");
        }
        data.insert(data.end(), r.begin(), r.end());
    }
    return FeatureMatrix(rows.size(), cols, std::move(data));
}

std::string FeatureMatrix::shape_string() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
}

bool FeatureMatrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void FeatureMatrix::append_rows(const FeatureMatrix& other) {
    if (other.cols_ != cols_) {
        throw ShapeError("append_rows: " + shape_string() + " vs " + other.shape_string());
    }
    data_.insert(data_.end(), other.data_.begin(), other.data_.end());
    rows_ += other.rows_;
}

FeatureMatrix matmul(const FeatureMatrix& a, const FeatureMatrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("matmul: cannot multiply " + a.shape_string() + " by " + b.shape_string());
    }
    FeatureMatrix out(a.rows(), b.cols());
    // i-k-j order keeps the inner loop contiguous in both b and out.
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto out_row = out.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            const auto b_row = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out_row[j] += aik * b_row[j];
            }
        }
    }
    return out;
}

FeatureMatrix transpose(const FeatureMatrix& m) {
    if (m.rows() == 0) {
        throw ShapeError("transpose: zero-row matrix has no column-count-preserving transpose");
    }
    FeatureMatrix out(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out(j, i) = m(i, j);
        }
    }
    return out;
}

FeatureMatrix add(const FeatureMatrix& a, const FeatureMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError("add: " + a.shape_string() + " vs " + b.shape_string());
    }
    std::vector<double> data(a.data());
    const auto& bd = b.data();
    for (std::size_t i = 0; i < data.size(); ++i) {
        data[i] += bd[i];
    }
    return FeatureMatrix(a.rows(), a.cols(), std::move(data));
}

FeatureMatrix softmax_rows(const FeatureMatrix& m) {
    FeatureMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto in = m.row(i);
        auto dst = out.row(i);
        const double mx = *std::max_element(in.begin(), in.end());
        double sum = 0.0;
        for (std::size_t j = 0; j < in.size(); ++j) {
            dst[j] = std::exp(in[j] - mx);
            sum += dst[j];
        }
        for (double& v : dst) {
            v /= sum;
        }
    }
    return out;
}

}  // namespace docslm
