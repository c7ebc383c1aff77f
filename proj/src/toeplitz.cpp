#include "idslab/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace idslab {

namespace {

std::array<int, 3> sub(const std::array<int, 3>& a, const std::array<int, 3>& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

// banded LU of a (generally unsymmetric) Toeplitz operator in the
// flattened Lambda+ enumeration
BandLU<double> band_lu_of(const ToeplitzOperator& op, bool transposed) {
    const int n = op.dim();
    int bw = 0;
    // flattened index shift of each alpha offset within the Lambda+ box
    std::vector<std::pair<int, double>> shifts;
    {
        // Lambda+ is a product of intervals; reconstruct its sides
        std::array<int, 3> lo = op.lambda_plus.front(), hi = op.lambda_plus.front();
        for (auto& c : op.lambda_plus)
            for (int j = 0; j < 3; ++j) {
                lo[j] = std::min(lo[j], c[j]);
                hi[j] = std::max(hi[j], c[j]);
            }
        std::array<int, 3> sides = {hi[0] - lo[0] + 1, hi[1] - lo[1] + 1, hi[2] - lo[2] + 1};
        for (auto& [off, val] : op.alpha) {
            int s = off[0] + sides[0] * (off[1] + sides[1] * off[2]);
            shifts.emplace_back(s, val);
            bw = std::max(bw, std::abs(s));
        }
    }
    BandLU<double> lu(n, bw, bw);
    for (int j = 0; j < n; ++j) {
        for (int col = std::max(0, j - bw); col <= std::min(n - 1, j + bw); ++col) {
            double v = transposed ? op.entry(col, j) : op.entry(j, col);
            if (v != 0.0) lu.at(j, col) = v;
        }
    }
    lu.factor();
    return lu;
}

}  // namespace

double ToeplitzOperator::entry(int row, int col) const {
    auto d = sub(lambda_plus[row], lambda_plus[col]);
    for (auto& [off, val] : alpha)
        if (off == d) return val;
    return 0.0;
}

DMatrix ToeplitzOperator::to_dense() const {
    const int n = dim();
    DMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = entry(i, j);
    return m;
}

std::vector<double> ToeplitzOperator::apply(const std::vector<double>& x) const {
    const int n = dim();
    if (static_cast<int>(x.size()) != n)
        throw std::invalid_argument("ToeplitzOperator::apply: dimension mismatch");
    std::vector<double> y(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double v = entry(i, j);
            if (v != 0.0) y[i] += v * x[j];
        }
    return y;
}

ToeplitzOperator toeplitz_matrix(
    const std::vector<std::pair<std::array<int, 3>, double>>& alpha, const BoxSpec& box) {
    if (alpha.empty()) throw std::invalid_argument("toeplitz_matrix: empty convolution vector");
    box.validate();
    ToeplitzOperator op;
    op.alpha = alpha;
    op.box = box;
    for (auto& [off, val] : alpha) {
        if (off == std::array<int, 3>{0, 0, 0})
            op.alpha_zero = val;
        else
            op.alpha_star += std::abs(val);
    }
    // Lambda+ = box sites minus Gamma, a product of integer intervals
    std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
    for (int j = 0; j < box.dim; ++j) hi[j] = box.sides[j] - 1;
    for (auto& [off, val] : alpha)
        for (int j = 0; j < 3; ++j) {
            lo[j] = std::min(lo[j], -off[j] + (j < box.dim ? 0 : 0));
            hi[j] = std::max(hi[j], (j < box.dim ? box.sides[j] - 1 : 0) - off[j]);
        }
    for (int z = lo[2]; z <= hi[2]; ++z)
        for (int y = lo[1]; y <= hi[1]; ++y)
            for (int x = lo[0]; x <= hi[0]; ++x) op.lambda_plus.push_back({x, y, z});
    return op;
}

SymbolReport symbol_analysis(const std::vector<std::pair<std::array<int, 3>, double>>& alpha,
                             int dim) {
    if (alpha.empty()) throw std::invalid_argument("symbol_analysis: empty convolution vector");
    SymbolReport rep;
    for (auto& [off, val] : alpha) {
        double j1 = 0.0;
        for (int a = 0; a < dim; ++a) j1 += std::abs(off[a]);
        rep.lipschitz_bound += j1 * std::abs(val);
    }
    using std::numbers::pi;
    if (dim == 1) {
        const int n = 1 << 14;
        double min_abs = std::numeric_limits<double>::infinity();
        double phase_sum = 0.0;
        std::complex<double> prev;
        std::complex<double> first;
        for (int k = 0; k < n; ++k) {
            double theta = -pi + 2.0 * pi * k / n;
            std::complex<double> s = 0.0;
            for (auto& [off, val] : alpha)
                s += val * std::exp(std::complex<double>(0.0, off[0] * theta));
            min_abs = std::min(min_abs, std::abs(s));
            if (k == 0)
                first = s;
            else
                phase_sum += std::arg(s / prev);
            prev = s;
        }
        phase_sum += std::arg(first / prev);
        rep.min_abs_grid = min_abs;
        rep.certified_min = min_abs - rep.lipschitz_bound * (pi / n);
        double w = phase_sum / (2.0 * pi);
        rep.winding = static_cast<int>(std::lround(w));
        rep.winding_residue = std::abs(w - rep.winding);
        rep.has_winding = true;
        if (rep.certified_min <= 0.0 && rep.min_abs_grid <= rep.lipschitz_bound * (pi / n))
            throw std::runtime_error("symbol_analysis: certified minimum indistinguishable from 0");
        return rep;
    }
    // multi-level symbol: certified minimum only, on a tensor grid
    const int per_axis = dim == 2 ? 128 : 32;
    double min_abs = std::numeric_limits<double>::infinity();
    std::array<int, 3> idx{0, 0, 0};
    std::array<int, 3> lim{1, 1, 1};
    for (int a = 0; a < dim; ++a) lim[a] = per_axis;
    for (idx[2] = 0; idx[2] < lim[2]; ++idx[2])
        for (idx[1] = 0; idx[1] < lim[1]; ++idx[1])
            for (idx[0] = 0; idx[0] < lim[0]; ++idx[0]) {
                std::complex<double> s = 0.0;
                for (auto& [off, val] : alpha) {
                    double phase = 0.0;
                    for (int a = 0; a < dim; ++a)
                        phase += off[a] * (-pi + 2.0 * pi * idx[a] / lim[a]);
                    s += val * std::exp(std::complex<double>(0.0, phase));
                }
                min_abs = std::min(min_abs, std::abs(s));
            }
    rep.min_abs_grid = min_abs;
    rep.certified_min = min_abs - rep.lipschitz_bound * (pi / per_axis) * std::sqrt(double(dim));
    return rep;
}

RowSumVerdict inverse_rowsum(const ToeplitzOperator& op) {
    const int n = op.dim();
    RowSumVerdict v;
    if (op.alpha_zero == 0.0 && op.alpha_star == 0.0)
        throw std::invalid_argument("inverse_rowsum: zero operator");
    // rows of B = A^-1 come from solves with A^T
    auto lut = band_lu_of(op, true);
    double worst = 0.0;
    std::vector<double> e(n, 0.0);
    for (int i = 0; i < n; ++i) {
        std::fill(e.begin(), e.end(), 0.0);
        e[i] = 1.0;
        auto row = lut.solve(e);
        double s = 0.0;
        for (double x : row) s += std::abs(x);
        worst = std::max(worst, s);
    }
    v.row_sum_norm = worst;
    v.normalized_norm = std::abs(op.alpha_zero) * worst;
    if (op.alpha_star < std::abs(op.alpha_zero)) {
        v.bound = 1.0 / (1.0 - op.alpha_star / std::abs(op.alpha_zero));
        v.ok = v.normalized_norm <= v.bound * (1.0 + 1e-10);
    }
    return v;
}

std::vector<double> transform_couplings(const ToeplitzOperator& op,
                                        const std::vector<double>& omega) {
    return op.apply(omega);
}

std::vector<double> inverse_transform(const ToeplitzOperator& op, const std::vector<double>& eta) {
    if (static_cast<int>(eta.size()) != op.dim())
        throw std::invalid_argument("inverse_transform: dimension mismatch");
    auto lu = band_lu_of(op, false);
    return lu.solve(eta);
}

double common_density(const ToeplitzOperator& op, const DensityTable& f,
                      const std::vector<double>& eta) {
    f.validate(f.mass());  // structural checks; mass may differ from 1 for sub-densities
    auto lu = band_lu_of(op, false);
    auto omega = lu.solve(eta);
    double logdet_a = lu.log_abs_det();
    double k = std::exp(-logdet_a);  // |det B| = 1/|det A|
    for (double w : omega) {
        k *= f.pdf(w);
        if (k == 0.0) return 0.0;
    }
    return k;
}

std::vector<ConditionalDensityPoint> conditional_density_probe(const ToeplitzOperator& op,
                                                               const DensityTable& f, int j,
                                                               const std::vector<double>& grid) {
    const int n = op.dim();
    if (j < 0 || j + 1 >= n) throw std::invalid_argument("conditional_density_probe: bad index");
    auto lu = band_lu_of(op, false);
    double absdet_b = std::exp(-lu.log_abs_det());

    std::vector<double> ej(n, 0.0);
    ej[j] = 1.0;
    auto bj = lu.solve(ej);  // omega responds affinely: omega(s) = B eta0 + s B e_j

    std::vector<ConditionalDensityPoint> out;
    for (double c : grid) {
        std::vector<double> eta0(n, 0.0);
        eta0[j + 1] = c;
        auto w0 = lu.solve(eta0);

        // product of f along omega(s); breakpoints where any coordinate
        // crosses a table breakpoint make the integrand piecewise smooth
        std::vector<double> cuts;
        double s_lo = -std::numeric_limits<double>::infinity();
        double s_hi = std::numeric_limits<double>::infinity();
        for (int k = 0; k < n; ++k) {
            if (bj[k] == 0.0) continue;
            for (double bp : f.x) {
                double s = (bp - w0[k]) / bj[k];
                cuts.push_back(s);
            }
            // support window of coordinate k
            double a = (f.x.front() - w0[k]) / bj[k];
            double b = (f.x.back() - w0[k]) / bj[k];
            if (a > b) std::swap(a, b);
            s_lo = std::max(s_lo, a);
            s_hi = std::min(s_hi, b);
        }
        ConditionalDensityPoint pt;
        pt.eta_next = c;
        if (!(s_hi > s_lo) || !std::isfinite(s_lo) || !std::isfinite(s_hi)) {
            pt.diverged = true;
            out.push_back(pt);
            continue;
        }
        cuts.push_back(s_lo);
        cuts.push_back(s_hi);
        std::sort(cuts.begin(), cuts.end());
        auto product_at = [&](double s) {
            double pr = absdet_b;
            for (int k = 0; k < n; ++k) {
                pr *= f.pdf(w0[k] + s * bj[k]);
                if (pr == 0.0) return 0.0;
            }
            return pr;
        };
        // 8-point Gauss-Legendre per cut segment
        static const double gx[4] = {0.1834346424956498, 0.5255324099163290,
                                     0.7966664774136267, 0.9602898564975363};
        static const double gw[4] = {0.3626837833783620, 0.3137066458778873,
                                     0.2223810344533745, 0.1012285362903763};
        double g = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            double a = std::max(cuts[i], s_lo), b = std::min(cuts[i + 1], s_hi);
            if (!(b > a)) continue;
            double mid = 0.5 * (a + b), half = 0.5 * (b - a);
            for (int q = 0; q < 4; ++q)
                g += half * gw[q] * (product_at(mid + half * gx[q]) + product_at(mid - half * gx[q]));
        }
        pt.marginal = g;
        double k_eta = product_at(0.0);
        if (g < 1e-13 * std::max(1.0, k_eta)) {
            pt.diverged = true;  // the expected terminal state as eta_{j+1} -> 1
        } else {
            pt.rho = k_eta / g;
        }
        out.push_back(pt);
    }
    return out;
}

}  // namespace idslab
