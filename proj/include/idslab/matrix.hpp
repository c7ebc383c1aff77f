#pragma once

#include <cassert>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace idslab {

using cplx = std::complex<double>;

/// Dense row-major matrix. Small helper used by the dense eigensolver and
/// the audit modules; not meant to scale past the dense cap.
template <typename T>
class Matrix {
  public:
    Matrix() = default;
    Matrix(int rows, int cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = T{1};
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    T& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    const T& operator()(int i, int j) const {
        return data_[static_cast<std::size_t>(i) * cols_ + j];
    }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    std::vector<T> apply(const std::vector<T>& x) const {
        assert(static_cast<int>(x.size()) == cols_);
        std::vector<T> y(rows_, T{});
        for (int i = 0; i < rows_; ++i) {
            T acc{};
            const T* row = data_.data() + static_cast<std::size_t>(i) * cols_;
            for (int j = 0; j < cols_; ++j) acc += row[j] * x[j];
            y[i] = acc;
        }
        return y;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        assert(a.cols_ == b.rows_);
        Matrix c(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                T aik = a(i, k);
                if (aik == T{}) continue;
                for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        assert(a.rows_ == b.rows_ && a.cols_ == b.cols_);
        Matrix c = a;
        for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
        return c;
    }

    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        assert(a.rows_ == b.rows_ && a.cols_ == b.cols_);
        Matrix c = a;
        for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
        return c;
    }

    friend Matrix operator*(T s, const Matrix& a) {
        Matrix c = a;
        for (auto& v : c.data_) v *= s;
        return c;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : data_) m = std::max(m, std::abs(v));
        return m;
    }

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<T> data_;
};

using DMatrix = Matrix<double>;
using ZMatrix = Matrix<cplx>;

/// Symmetric banded matrix. Band b of length n-b stores A(i, i+b); only the
/// upper triangle is kept, symmetry is implicit in the storage.
class SymBandMatrix {
  public:
    SymBandMatrix() = default;
    SymBandMatrix(int n, int bandwidth)
        : n_(n), bw_(bandwidth), bands_(static_cast<std::size_t>(n) * (bandwidth + 1), 0.0) {
        if (bandwidth >= n && n > 0) bw_ = n - 1;
        bands_.assign(static_cast<std::size_t>(n_) * (bw_ + 1), 0.0);
    }

    int dim() const { return n_; }
    int bandwidth() const { return bw_; }

    // entry A(i, i+b), 0 <= b <= bw, i+b < n
    double& band(int b, int i) { return bands_[static_cast<std::size_t>(b) * n_ + i]; }
    double band(int b, int i) const { return bands_[static_cast<std::size_t>(b) * n_ + i]; }

    double at(int i, int j) const {
        int b = j - i;
        if (b < 0) {
            std::swap(i, j);
            b = -b;
        }
        if (b > bw_) return 0.0;
        return band(b, i);
    }

    void add(int i, int j, double v) {
        int b = j - i;
        if (b < 0) {
            std::swap(i, j);
            b = -b;
        }
        if (b > bw_) throw std::out_of_range("SymBandMatrix::add outside bandwidth");
        band(b, i) += v;
    }

    std::vector<double> apply(const std::vector<double>& x) const {
        assert(static_cast<int>(x.size()) == n_);
        std::vector<double> y(n_, 0.0);
        for (int i = 0; i < n_; ++i) y[i] = band(0, i) * x[i];
        for (int b = 1; b <= bw_; ++b)
            for (int i = 0; i + b < n_; ++i) {
                double v = band(b, i);
                if (v == 0.0) continue;
                y[i] += v * x[i + b];
                y[i + b] += v * x[i];
            }
        return y;
    }

    /// Infinity norm (max row sum); cheap upper bound used for pivot and
    /// tie tolerances.
    double inf_norm() const {
        std::vector<double> row(n_, 0.0);
        for (int i = 0; i < n_; ++i) row[i] = std::abs(band(0, i));
        for (int b = 1; b <= bw_; ++b)
            for (int i = 0; i + b < n_; ++i) {
                double v = std::abs(band(b, i));
                row[i] += v;
                row[i + b] += v;
            }
        double m = 0.0;
        for (double r : row) m = std::max(m, r);
        return m;
    }

    DMatrix to_dense() const {
        DMatrix m(n_, n_);
        for (int b = 0; b <= bw_; ++b)
            for (int i = 0; i + b < n_; ++i) {
                m(i, i + b) = band(b, i);
                m(i + b, i) = band(b, i);
            }
        return m;
    }

    /// Restriction to a subset of indices (kept in ascending order). The
    /// result's bandwidth never exceeds the original one.
    SymBandMatrix restricted(const std::vector<int>& keep) const {
        SymBandMatrix r(static_cast<int>(keep.size()), std::min<int>(bw_, std::max<int>(0, static_cast<int>(keep.size()) - 1)));
        for (std::size_t a = 0; a < keep.size(); ++a) {
            for (std::size_t c = a; c < keep.size(); ++c) {
                int gap = keep[c] - keep[a];
                if (gap > bw_) break;
                double v = at(keep[a], keep[c]);
                if (v != 0.0) r.add(static_cast<int>(a), static_cast<int>(c), v);
            }
        }
        return r;
    }

  private:
    int n_ = 0;
    int bw_ = 0;
    std::vector<double> bands_;
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace idslab
