#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "ressize/errors.hpp"

namespace ressize {

struct Triplet {
    int row = 0;
    int col = 0;
    double value = 0.0;
};

// Compressed-sparse-column matrix. Column-major because the simplex method
// works column-wise (basis columns, entering-column FTRAN).
class SparseMatrix {
  public:
    SparseMatrix() = default;

    static SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> trips) {
        SparseMatrix m;
        m.rows_ = rows;
        m.cols_ = cols;
        std::sort(trips.begin(), trips.end(), [](const Triplet& a, const Triplet& b) {
            return a.col != b.col ? a.col < b.col : a.row < b.row;
        });
        m.col_ptr_.assign(std::size_t(cols) + 1, 0);
        m.row_idx_.reserve(trips.size());
        m.values_.reserve(trips.size());
        for (std::size_t i = 0; i < trips.size(); ++i) {
            const auto& t = trips[i];
            if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
                throw DimensionError("triplet index out of range");
            // merge duplicates
            if (!m.row_idx_.empty() && !trips.empty() && i > 0 && trips[i - 1].col == t.col &&
                trips[i - 1].row == t.row) {
                m.values_.back() += t.value;
                continue;
            }
            m.col_ptr_[std::size_t(t.col) + 1]++;
            m.row_idx_.push_back(t.row);
            m.values_.push_back(t.value);
        }
        for (int j = 0; j < cols; ++j) m.col_ptr_[std::size_t(j) + 1] += m.col_ptr_[std::size_t(j)];
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t nnz() const { return values_.size(); }

    std::span<const int> col_rows(int j) const {
        return {row_idx_.data() + col_ptr_[std::size_t(j)], row_idx_.data() + col_ptr_[std::size_t(j) + 1]};
    }
    std::span<const double> col_values(int j) const {
        return {values_.data() + col_ptr_[std::size_t(j)], values_.data() + col_ptr_[std::size_t(j) + 1]};
    }

    // y += alpha * A(:,j)
    void add_column_to(int j, double alpha, std::vector<double>& y) const {
        auto r = col_rows(j);
        auto v = col_values(j);
        for (std::size_t k = 0; k < r.size(); ++k) y[std::size_t(r[k])] += alpha * v[k];
    }

    // dot(A(:,j), y)
    double col_dot(int j, const std::vector<double>& y) const {
        auto r = col_rows(j);
        auto v = col_values(j);
        double s = 0.0;
        for (std::size_t k = 0; k < r.size(); ++k) s += v[k] * y[std::size_t(r[k])];
        return s;
    }

    std::vector<double> multiply(const std::vector<double>& x) const {
        std::vector<double> y(std::size_t(rows_), 0.0);
        for (int j = 0; j < cols_; ++j)
            if (x[std::size_t(j)] != 0.0) add_column_to(j, x[std::size_t(j)], y);
        return y;
    }

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<int> col_ptr_{0};
    std::vector<int> row_idx_;
    std::vector<double> values_;
};

} // namespace ressize
