#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "idslab/linalg.hpp"

namespace idslab {

/// Welford accumulator (Knuth TAOCP vol. 2, p. 232).
class RunningStat {
  public:
    void add(double x) {
        ++n_;
        double d = x - mean_;
        mean_ += d / n_;
        m2_ += d * (x - mean_);
    }
    std::uint64_t count() const { return n_; }
    double mean() const { return n_ ? mean_ : 0.0; }
    double variance() const { return n_ > 1 ? m2_ / (n_ - 1) : 0.0; }
    double stddev() const { return std::sqrt(variance()); }
    double stderror() const { return n_ ? std::sqrt(variance() / n_) : 0.0; }

  private:
    std::uint64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double residual_rms = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw std::invalid_argument("fit_line: need >= 2 points");
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - (f.intercept + f.slope * x[i]);
        ss += r * r;
    }
    f.residual_rms = std::sqrt(ss / n);
    if (n > 2) f.slope_stderr = std::sqrt(ss / (n - 2) / sxx);
    return f;
}

/// Ordinary least squares y ~ X beta with coefficient standard errors.
struct OlsFit {
    std::vector<double> beta;
    std::vector<double> stderr_beta;
    double residual_rms = 0.0;
};

inline OlsFit fit_ols(const DMatrix& x, const std::vector<double>& y) {
    const int n = x.rows(), p = x.cols();
    if (n != static_cast<int>(y.size()) || n <= p)
        throw std::invalid_argument("fit_ols: shape mismatch or underdetermined");
    DMatrix xtx(p, p);
    std::vector<double> xty(p, 0.0);
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < p; ++a) {
            xty[a] += x(i, a) * y[i];
            for (int b = 0; b < p; ++b) xtx(a, b) += x(i, a) * x(i, b);
        }
    DenseLU<double> lu(xtx);
    OlsFit f;
    f.beta = lu.solve(xty);
    double ss = 0.0;
    for (int i = 0; i < n; ++i) {
        double pred = 0.0;
        for (int a = 0; a < p; ++a) pred += x(i, a) * f.beta[a];
        ss += (y[i] - pred) * (y[i] - pred);
    }
    f.residual_rms = std::sqrt(ss / n);
    double sigma2 = ss / (n - p);
    auto inv = lu.inverse();
    f.stderr_beta.resize(p);
    for (int a = 0; a < p; ++a) f.stderr_beta[a] = std::sqrt(sigma2 * inv(a, a));
    return f;
}

/// Wilson score interval for a binomial proportion.
struct WilsonInterval {
    double lo = 0.0, hi = 1.0, center = 0.0;
};

inline WilsonInterval wilson_interval(std::uint64_t hits, std::uint64_t trials, double z = 1.96) {
    WilsonInterval w;
    if (trials == 0) return w;
    double n = static_cast<double>(trials);
    double phat = hits / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    w.center = (phat + z2 / (2 * n)) / denom;
    double half = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / denom;
    w.lo = std::max(0.0, w.center - half);
    w.hi = std::min(1.0, w.center + half);
    return w;
}

}  // namespace idslab
