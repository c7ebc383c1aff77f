#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "idslab/matrix.hpp"

namespace idslab {

/// Dense LU with partial pivoting. Throws on (numerically) singular input.
template <typename T>
class DenseLU {
  public:
    explicit DenseLU(Matrix<T> a) : lu_(std::move(a)), piv_(lu_.rows()) {
        const int n = lu_.rows();
        if (n != lu_.cols()) throw std::invalid_argument("DenseLU: matrix not square");
        std::iota(piv_.begin(), piv_.end(), 0);
        sign_ = 1;
        for (int k = 0; k < n; ++k) {
            int p = k;
            double best = std::abs(lu_(k, k));
            for (int i = k + 1; i < n; ++i) {
                double v = std::abs(lu_(i, k));
                if (v > best) {
                    best = v;
                    p = i;
                }
            }
            if (best == 0.0) throw std::runtime_error("DenseLU: singular matrix");
            if (p != k) {
                for (int j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
                std::swap(piv_[k], piv_[p]);
                sign_ = -sign_;
            }
            const T pivot = lu_(k, k);
            for (int i = k + 1; i < n; ++i) {
                T m = lu_(i, k) / pivot;
                lu_(i, k) = m;
                if (m == T{}) continue;
                for (int j = k + 1; j < n; ++j) lu_(i, j) -= m * lu_(k, j);
            }
        }
    }

    std::vector<T> solve(const std::vector<T>& b) const {
        const int n = lu_.rows();
        std::vector<T> x(n);
        for (int i = 0; i < n; ++i) x[i] = b[piv_[i]];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
        for (int i = n - 1; i >= 0; --i) {
            for (int j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
            x[i] /= lu_(i, i);
        }
        return x;
    }

    Matrix<T> inverse() const {
        const int n = lu_.rows();
        Matrix<T> inv(n, n);
        std::vector<T> e(n, T{});
        for (int j = 0; j < n; ++j) {
            std::fill(e.begin(), e.end(), T{});
            e[j] = T{1};
            auto col = solve(e);
            for (int i = 0; i < n; ++i) inv(i, j) = col[i];
        }
        return inv;
    }

    /// log|det| together with the sign (for real T) of the determinant.
    double log_abs_det() const {
        double s = 0.0;
        for (int i = 0; i < lu_.rows(); ++i) s += std::log(std::abs(lu_(i, i)));
        return s;
    }

    int det_sign() const {
        int s = sign_;
        for (int i = 0; i < lu_.rows(); ++i)
            if (std::real(cplx(lu_(i, i))) < 0.0) s = -s;
        return s;
    }

  private:
    Matrix<T> lu_;
    std::vector<int> piv_;
    int sign_ = 1;
};

/// Banded LU with partial pivoting, LAPACK gbtrf storage convention:
/// kl sub-diagonals, ku super-diagonals, with kl extra rows of fill.
/// Row index r = ku + kl + i - j addresses A(i, j) in column j.
template <typename T>
class BandLU {
  public:
    BandLU(int n, int kl, int ku) : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1) {
        ab_.assign(static_cast<std::size_t>(ldab_) * n_, T{});
        piv_.resize(n_);
    }

    /// entry accessor before factorization
    T& at(int i, int j) {
        int r = ku_ + kl_ + i - j;
        return ab_[static_cast<std::size_t>(j) * ldab_ + r];
    }

    void factor() {
        const int n = n_, kl = kl_, ku = ku_;
        const int kv = kl + ku;  // working superdiagonal count
        for (int j = 0; j < n; ++j) {
            int km = std::min(kl, n - 1 - j);  // sub-diagonal length in column j
            // partial pivot among rows j..j+km
            int p = 0;
            double best = std::abs(entry(kv, j));
            for (int i = 1; i <= km; ++i) {
                double v = std::abs(entry(kv + i, j));
                if (v > best) {
                    best = v;
                    p = i;
                }
            }
            piv_[j] = j + p;
            if (best == 0.0) throw std::runtime_error("BandLU: singular matrix");
            if (p != 0) {
                int cols = std::min(kv, n - 1 - j);
                for (int c = 0; c <= cols; ++c)
                    std::swap(entry(kv - c, j + c), entry(kv + p - c, j + c));
            }
            T pivot = entry(kv, j);
            for (int i = 1; i <= km; ++i) {
                T m = entry(kv + i, j) / pivot;
                entry(kv + i, j) = m;
                if (m == T{}) continue;
                int cols = std::min(kv, n - 1 - j);
                for (int c = 1; c <= cols; ++c)
                    entry(kv + i - c, j + c) -= m * entry(kv - c, j + c);
            }
        }
        factored_ = true;
    }

    std::vector<T> solve(std::vector<T> b) const {
        if (!factored_) throw std::logic_error("BandLU::solve before factor");
        const int n = n_, kl = kl_;
        const int kv = kl_ + ku_;
        for (int j = 0; j < n; ++j) {
            if (piv_[j] != j) std::swap(b[j], b[piv_[j]]);
            int km = std::min(kl, n - 1 - j);
            for (int i = 1; i <= km; ++i) b[j + i] -= entry(kv + i, j) * b[j];
        }
        for (int j = n - 1; j >= 0; --j) {
            b[j] /= entry(kv, j);
            int km = std::min(kv, j);
            for (int c = 1; c <= km; ++c) b[j - c] -= entry(kv - c, j) * b[j];
        }
        return b;
    }

    double log_abs_det() const {
        double s = 0.0;
        const int kv = kl_ + ku_;
        for (int j = 0; j < n_; ++j) s += std::log(std::abs(entry(kv, j)));
        return s;
    }

    int dim() const { return n_; }

  private:
    // ab_ entry with explicit row index r in column j
    T& entry(int r, int j) { return ab_[static_cast<std::size_t>(j) * ldab_ + r]; }
    const T& entry(int r, int j) const { return ab_[static_cast<std::size_t>(j) * ldab_ + r]; }

    int n_, kl_, ku_, ldab_;
    std::vector<T> ab_;
    std::vector<int> piv_;
    bool factored_ = false;
};

/// Banded LU of (A - shift I) for a symmetric banded A.
template <typename T>
BandLU<T> shifted_band_lu(const SymBandMatrix& a, T shift) {
    const int n = a.dim(), bw = a.bandwidth();
    BandLU<T> lu(n, bw, bw);
    for (int i = 0; i < n; ++i) {
        lu.at(i, i) = T(a.band(0, i)) - shift;
        for (int b = 1; b <= bw && i + b < n; ++b) {
            double v = a.band(b, i);
            if (v != 0.0) {
                lu.at(i, i + b) = T(v);
                lu.at(i + b, i) = T(v);
            }
        }
    }
    lu.factor();
    return lu;
}

}  // namespace idslab
