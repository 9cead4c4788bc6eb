#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace wg {

/// Compressed-row sparse matrix. Symmetric operators store the full pattern.
struct SparseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<int> row_ptr;
    std::vector<int> col;
    std::vector<double> val;

    int nnz() const { return static_cast<int>(val.size()); }

    void multiply(const std::vector<double>& x, std::vector<double>& y) const {
        assert(static_cast<int>(x.size()) == cols);
        y.assign(rows, 0.0);
        for (int i = 0; i < rows; ++i) {
            double s = 0.0;
            for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
                s += val[k] * x[col[k]];
            }
            y[i] = s;
        }
    }

    std::vector<double> multiply(const std::vector<double>& x) const {
        std::vector<double> y;
        multiply(x, y);
        return y;
    }

    /// Entry lookup; zero when the position is not stored.
    double coeff(int i, int j) const {
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
            if (col[k] == j) return val[k];
        }
        return 0.0;
    }

    std::vector<double> diagonal() const {
        std::vector<double> d(rows, 0.0);
        for (int i = 0; i < rows; ++i) d[i] = coeff(i, i);
        return d;
    }
};

/// Coordinate-format accumulator; compress() sorts and merges duplicates,
/// which keeps assembly deterministic for a fixed insertion order.
class CooBuilder {
  public:
    CooBuilder(int rows, int cols) : rows_(rows), cols_(cols) {}

    void add(int i, int j, double v) {
        assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
        entries_.emplace_back(i, j, v);
    }

    SparseMatrix compress() const {
        std::vector<std::tuple<int, int, double>> sorted = entries_;
        std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
            return std::tie(std::get<0>(a), std::get<1>(a)) <
                   std::tie(std::get<0>(b), std::get<1>(b));
        });

        SparseMatrix m;
        m.rows = rows_;
        m.cols = cols_;
        m.row_ptr.assign(rows_ + 1, 0);
        for (std::size_t k = 0; k < sorted.size();) {
            const int i = std::get<0>(sorted[k]);
            const int j = std::get<1>(sorted[k]);
            double v = 0.0;
            while (k < sorted.size() && std::get<0>(sorted[k]) == i &&
                   std::get<1>(sorted[k]) == j) {
                v += std::get<2>(sorted[k]);
                ++k;
            }
            m.col.push_back(j);
            m.val.push_back(v);
            ++m.row_ptr[i + 1];
        }
        for (int i = 0; i < rows_; ++i) m.row_ptr[i + 1] += m.row_ptr[i];
        return m;
    }

  private:
    int rows_;
    int cols_;
    std::vector<std::tuple<int, int, double>> entries_;
};

/// Largest absolute asymmetry max|A - A'| over the stored pattern.
inline double max_asymmetry(const SparseMatrix& a) {
    double worst = 0.0;
    for (int i = 0; i < a.rows; ++i) {
        for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
            worst = std::max(worst, std::abs(a.val[k] - a.coeff(a.col[k], i)));
        }
    }
    return worst;
}

/// Returns s*A + diag(d), requiring the pattern of A to contain the diagonal.
inline SparseMatrix scale_add_diagonal(const SparseMatrix& a, double s,
                                       const std::vector<double>& d) {
    if (static_cast<int>(d.size()) != a.rows || a.rows != a.cols) {
        throw std::invalid_argument("scale_add_diagonal: size mismatch");
    }
    SparseMatrix m = a;
    for (double& v : m.val) v *= s;
    for (int i = 0; i < m.rows; ++i) {
        bool found = false;
        for (int k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k) {
            if (m.col[k] == i) {
                m.val[k] += d[i];
                found = true;
                break;
            }
        }
        if (!found && d[i] != 0.0) {
            throw std::invalid_argument("scale_add_diagonal: diagonal entry missing from pattern");
        }
    }
    return m;
}

}  // namespace wg
