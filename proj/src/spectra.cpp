#include "idslab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>

namespace idslab {

namespace {

// Householder reduction and implicit-shift QL below follow the Algol
// procedures tred2/tql2 (Bowdler, Martin, Reinsch, Wilkinson) via the
// EISPACK/JAMA lineage, 0-based.

void tred2_reduce(DMatrix& v, std::vector<double>& d, std::vector<double>& e) {
    const int n = v.rows();
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    for (int j = 0; j < n; j++) d[j] = v(n - 1, j);

    for (int i = n - 1; i > 0; i--) {
        double scale = 0.0, h = 0.0;
        for (int k = 0; k < i; k++) scale += std::abs(d[k]);
        if (scale == 0.0) {
            e[i] = d[i - 1];
            for (int j = 0; j < i; j++) {
                d[j] = v(i - 1, j);
                v(i, j) = 0.0;
                v(j, i) = 0.0;
            }
        } else {
            for (int k = 0; k < i; k++) {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            double f = d[i - 1];
            double g = std::sqrt(h);
            if (f > 0) g = -g;
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for (int j = 0; j < i; j++) e[j] = 0.0;

            for (int j = 0; j < i; j++) {
                f = d[j];
                v(j, i) = f;
                g = e[j] + v(j, j) * f;
                for (int k = j + 1; k <= i - 1; k++) {
                    g += v(k, j) * d[k];
                    e[k] += v(k, j) * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for (int j = 0; j < i; j++) {
                e[j] /= h;
                f += e[j] * d[j];
            }
            double hh = f / (h + h);
            for (int j = 0; j < i; j++) e[j] -= hh * d[j];
            for (int j = 0; j < i; j++) {
                f = d[j];
                g = e[j];
                for (int k = j; k <= i - 1; k++) v(k, j) -= (f * e[k] + g * d[k]);
                d[j] = v(i - 1, j);
                v(i, j) = 0.0;
            }
        }
        d[i] = h;
    }

    for (int i = 0; i < n - 1; i++) {
        v(n - 1, i) = v(i, i);
        v(i, i) = 1.0;
        double h = d[i + 1];
        if (h != 0.0) {
            for (int k = 0; k <= i; k++) d[k] = v(k, i + 1) / h;
            for (int j = 0; j <= i; j++) {
                double g = 0.0;
                for (int k = 0; k <= i; k++) g += v(k, i + 1) * v(k, j);
                for (int k = 0; k <= i; k++) v(k, j) -= g * d[k];
            }
        }
        for (int k = 0; k <= i; k++) v(k, i + 1) = 0.0;
    }
    for (int j = 0; j < n; j++) {
        d[j] = v(n - 1, j);
        v(n - 1, j) = 0.0;
    }
    v(n - 1, n - 1) = 1.0;
    e[0] = 0.0;
}

// d = diagonal, e[i] couples (i-1, i) on input (e[0] unused); v may be
// null when eigenvectors are not wanted. Eigenvalues leave sorted
// ascending, v's columns sorted alongside.
void tql2_iterate(std::vector<double>& d, std::vector<double>& e, DMatrix* v) {
    const int n = static_cast<int>(d.size());
    if (n == 0) return;
    for (int i = 1; i < n; i++) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    double f = 0.0;
    double tst1 = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    for (int l = 0; l < n; l++) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        int m = l;
        while (m < n) {
            if (std::abs(e[m]) <= eps * tst1) break;
            m++;
        }
        if (m > l) {
            int iter = 0;
            do {
                if (++iter > 80) throw std::runtime_error("tql2: QL iteration did not converge");
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                double dl1 = d[l + 1];
                double h = g - d[l];
                for (int i = l + 2; i < n; i++) d[i] -= h;
                f += h;

                p = d[m];
                double c = 1.0, c2 = c, c3 = c;
                double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (int i = m - 1; i >= l; i--) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = std::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if (v) {
                        for (int k = 0; k < v->rows(); k++) {
                            h = (*v)(k, i + 1);
                            (*v)(k, i + 1) = s * (*v)(k, i) + c * h;
                            (*v)(k, i) = c * (*v)(k, i) - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }

    for (int i = 0; i < n - 1; i++) {
        int k = i;
        double p = d[i];
        for (int j = i + 1; j < n; j++) {
            if (d[j] < p) {
                k = j;
                p = d[j];
            }
        }
        if (k != i) {
            d[k] = d[i];
            d[i] = p;
            if (v)
                for (int j = 0; j < v->rows(); j++) std::swap((*v)(j, i), (*v)(j, k));
        }
    }
}

double sign_like(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

}  // namespace

void tridiag_eigen(std::vector<double>& diag, std::vector<double>& off, DMatrix* z) {
    const int n = static_cast<int>(diag.size());
    std::vector<double> e(n, 0.0);
    for (int i = 1; i < n; i++) e[i] = off[i - 1];  // tql2 wants e[i] ~ (i-1, i)
    tql2_iterate(diag, e, z);
    off.assign(std::max(n - 1, 0), 0.0);
}

void householder_tridiagonalize(DMatrix& a, std::vector<double>& diag, std::vector<double>& off,
                                bool /*accumulate (always on)*/) {
    std::vector<double> e;
    tred2_reduce(a, diag, e);
    // convert to off[i] ~ (i, i+1)
    const int n = static_cast<int>(diag.size());
    off.assign(std::max(n - 1, 0), 0.0);
    for (int i = 1; i < n; i++) off[i - 1] = e[i];
}

EigenList dense_symmetric_eigen(DMatrix a, bool want_vectors) {
    const int n = a.rows();
    EigenList out;
    if (n == 0) return out;
    if (n != a.cols()) throw std::invalid_argument("dense_symmetric_eigen: not square");
    std::vector<double> d, e;
    tred2_reduce(a, d, e);
    tql2_iterate(d, e, &a);
    out.values = std::move(d);
    if (want_vectors) {
        out.vectors = std::move(a);
        out.has_vectors = true;
    }
    return out;
}

EigenList eigenvalues(const SymBandMatrix& h, bool want_vectors, const NumericPolicy& pol) {
    const int n = h.dim();
    if (n > pol.dense_cap)
        throw std::invalid_argument("eigenvalues: dimension exceeds dense cap");
    EigenList out;
    if (n == 0) return out;
    if (h.bandwidth() <= 1) {
        std::vector<double> d(n), e(n, 0.0);
        for (int i = 0; i < n; ++i) d[i] = h.band(0, i);
        if (h.bandwidth() == 1)
            for (int i = 1; i < n; ++i) e[i] = h.band(1, i - 1);
        if (want_vectors) {
            DMatrix z = DMatrix::identity(n);
            tql2_iterate(d, e, &z);
            out.vectors = std::move(z);
            out.has_vectors = true;
        } else {
            tql2_iterate(d, e, nullptr);
        }
        out.values = std::move(d);
        return out;
    }
    return dense_symmetric_eigen(h.to_dense(), want_vectors);
}

namespace {

// Sturm pivot recurrence on a tridiagonal: the number of negative pivots
// of T - E I equals #{lambda < E}.
int sturm_count(const SymBandMatrix& h, double energy, double pivot_floor,
                SolveDiagnostics* diag) {
    const int n = h.dim();
    int count = 0;
    double prev = 1.0;
    for (int j = 0; j < n; ++j) {
        double b = (j > 0 && h.bandwidth() >= 1) ? h.band(1, j - 1) : 0.0;
        double d = (h.band(0, j) - energy) - (j > 0 ? b * b / prev : 0.0);
        if (std::abs(d) < pivot_floor) {
            if (diag) ++diag->perturbed_pivots;
            d = pivot_floor;  // bump upward: ties resolve toward exclusion
        }
        if (d < 0.0) ++count;
        prev = d;
    }
    return count;
}

// Banded LDL^T of H - E I without pivoting; negative pivots give the
// inertia by Sylvester's law. nullopt on non-finite pivots lets the
// caller retry with a nudged shift.
std::optional<int> band_inertia(const SymBandMatrix& h, double energy, double pivot_floor,
                                SolveDiagnostics* diag) {
    const int n = h.dim(), bw = h.bandwidth();
    std::vector<double> dpiv(n, 0.0);
    std::vector<std::vector<double>> lband(bw, std::vector<double>(n, 0.0));
    int count = 0;
    for (int j = 0; j < n; ++j) {
        double s = h.band(0, j) - energy;
        for (int k = std::max(0, j - bw); k < j; ++k) {
            double ljk = lband[j - k - 1][k];
            s -= ljk * ljk * dpiv[k];
        }
        if (!std::isfinite(s)) return std::nullopt;
        if (std::abs(s) < pivot_floor) {
            if (diag) ++diag->perturbed_pivots;
            s = pivot_floor;  // bump upward: ties resolve toward exclusion
        }
        dpiv[j] = s;
        if (s < 0.0) ++count;
        for (int i = j + 1; i <= std::min(j + bw, n - 1); ++i) {
            double t = h.at(i, j);
            for (int k = std::max(0, i - bw); k < j; ++k)
                t -= lband[i - k - 1][k] * dpiv[k] * lband[j - k - 1][k];
            lband[i - j - 1][j] = t / s;
        }
    }
    return count;
}

}  // namespace

int count_below(const SymBandMatrix& h, double energy, const NumericPolicy& pol,
                SolveDiagnostics* diag) {
    if (!std::isfinite(energy)) throw std::invalid_argument("count_below: non-finite energy");
    const int n = h.dim();
    if (n == 0) return 0;
    const double scale = std::max(h.inf_norm() + std::abs(energy), 1.0);
    // the tie window tracks factorization roundoff, which grows with n
    const double floor = std::numeric_limits<double>::epsilon() * scale * std::max(16, n);
    if (h.bandwidth() <= 1) return sturm_count(h, energy, floor, diag);
    for (int attempt = 0; attempt <= pol.pivot_retries; ++attempt) {
        auto c = band_inertia(h, energy + attempt * floor, floor, diag);
        if (c) return *c;
    }
    throw std::runtime_error(
        "count_below: factorization breakdown; energy indistinguishable from an eigenvalue");
}

namespace {

// Deterministic start vector for the iterative refiners.
std::vector<double> seeded_vector(int n, std::uint64_t seed) {
    std::vector<double> v(n);
    std::uint64_t s = seed * 0x9E3779B97F4A7C15ull + 0xD1B54A32D192ED03ull;
    for (int i = 0; i < n; ++i) {
        s ^= s >> 12;
        s ^= s << 25;
        s ^= s >> 27;
        v[i] = static_cast<double>((s * 0x2545F4914F6CDD1Dull) >> 11) * 0x1.0p-53 - 0.5;
    }
    double nm = norm2(v);
    for (auto& x : v) x /= nm;
    return v;
}

void orthogonalize_against(std::vector<double>& v, const std::vector<std::vector<double>>& basis) {
    for (const auto& b : basis) {
        double c = dot(v, b);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
    }
}

double rayleigh(const SymBandMatrix& h, const std::vector<double>& v) {
    auto hv = h.apply(v);
    return dot(v, hv);
}

double residual_norm(const SymBandMatrix& h, double lambda, const std::vector<double>& v) {
    auto hv = h.apply(v);
    for (std::size_t i = 0; i < hv.size(); ++i) hv[i] -= lambda * v[i];
    return norm2(hv);
}

EigenPair inverse_iterate(const SymBandMatrix& h, double shift,
                          const std::vector<std::vector<double>>& locked,
                          const NumericPolicy& pol, std::uint64_t seed) {
    const int n = h.dim();
    const double hnorm = std::max(h.inf_norm(), 1.0);
    auto v = seeded_vector(n, seed);
    orthogonalize_against(v, locked);
    double mu = shift;
    double lambda = shift;
    std::unique_ptr<BandLU<double>> lu;
    auto refactor = [&](double s) {
        // nudge keeps the factorization alive when s sits on an eigenvalue
        for (int k = 0; k < 8; ++k) {
            try {
                double nudge = k * 64.0 * std::numeric_limits<double>::epsilon() * hnorm;
                lu = std::make_unique<BandLU<double>>(shifted_band_lu<double>(h, s + nudge));
                return;
            } catch (const std::runtime_error&) {
            }
        }
        throw std::runtime_error("eigenpair_near: shifted factorization failed");
    };
    refactor(mu);
    for (int it = 0; it < pol.max_inverse_iter; ++it) {
        auto w = lu->solve(v);
        orthogonalize_against(w, locked);
        double nm = norm2(w);
        if (nm == 0.0 || !std::isfinite(nm)) {
            w = seeded_vector(n, seed + 17 * (it + 1));
            orthogonalize_against(w, locked);
            nm = norm2(w);
        }
        for (auto& x : w) x /= nm;
        v = std::move(w);
        lambda = rayleigh(h, v);
        if (residual_norm(h, lambda, v) <= pol.residual_rel_tol * hnorm) return {lambda, v};
        if (it >= 2 && std::abs(lambda - mu) >
                           1e3 * std::numeric_limits<double>::epsilon() * hnorm) {
            mu = lambda;  // Rayleigh refinement
            refactor(mu);
        }
    }
    if (residual_norm(h, lambda, v) <= 1e2 * pol.residual_rel_tol * hnorm) return {lambda, v};
    throw std::runtime_error("eigenpair_near: inverse iteration did not converge");
}

}  // namespace

std::vector<EigenPair> eigenpair_near(const SymBandMatrix& h, double target,
                                      const NumericPolicy& pol) {
    const int n = h.dim();
    if (n == 0) throw std::invalid_argument("eigenpair_near: empty matrix");
    const double hnorm = std::max(h.inf_norm(), 1.0);
    auto first = inverse_iterate(h, target, {}, pol, 1);
    const double ctol = pol.degeneracy_rel_tol * hnorm;
    int lo = count_below(h, first.value - ctol, pol);
    int hi = count_below(h, first.value + ctol, pol);
    int mult = std::max(1, hi - lo);
    std::vector<EigenPair> block{first};
    std::vector<std::vector<double>> locked{first.vector};
    for (int m = 1; m < mult; ++m) {
        auto next = inverse_iterate(h, first.value, locked, pol, 2 + m);
        locked.push_back(next.vector);
        block.push_back(std::move(next));
    }
    std::stable_sort(block.begin(), block.end(),
                     [](const EigenPair& a, const EigenPair& b) { return a.value < b.value; });
    return block;
}

EigenPair eigenpair_at_index(const SymBandMatrix& h, int index, const NumericPolicy& pol) {
    const int n = h.dim();
    if (index < 0 || index >= n) throw std::invalid_argument("eigenpair_at_index: bad index");
    double span = h.inf_norm() + 1.0;
    double lo = -span, hi = span;
    while (hi - lo > 1e-13 * std::max(1.0, span)) {
        double mid = 0.5 * (lo + hi);
        if (count_below(h, mid, pol) <= index)
            lo = mid;
        else
            hi = mid;
    }
    auto block = eigenpair_near(h, 0.5 * (lo + hi), pol);
    int base = count_below(h, block.front().value - pol.degeneracy_rel_tol * h.inf_norm(), pol);
    int offset = std::clamp(index - base, 0, static_cast<int>(block.size()) - 1);
    return block[static_cast<std::size_t>(offset)];
}

std::vector<EigenPair> lowest_eigenpairs(const SymBandMatrix& h, int k, const NumericPolicy& pol) {
    const int n = h.dim();
    k = std::min(k, n);
    if (k <= 0) return {};
    const double hnorm = std::max(h.inf_norm(), 1.0);
    // Gershgorin lower bound -> shift strictly below the spectrum
    double glo = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        double off = 0.0;
        for (int b = 1; b <= h.bandwidth(); ++b) {
            if (i + b < n) off += std::abs(h.band(b, i));
            if (i - b >= 0) off += std::abs(h.band(b, i - b));
        }
        glo = std::min(glo, h.band(0, i) - off);
    }
    // a shift just below the Gershgorin bound keeps the inverse-power
    // ratios small for the low modes
    double shift = glo - std::max(1e-6 * hnorm, 1e-9);
    auto lu = shifted_band_lu<double>(h, shift);

    const int m = std::min(n, k + std::max(4, k / 2));
    std::vector<std::vector<double>> x(m);
    for (int j = 0; j < m; ++j) x[j] = seeded_vector(n, 1000 + j);

    auto orthonormalize = [&] {
        for (int j = 0; j < m; ++j) {
            for (int i = 0; i < j; ++i) {
                double c = dot(x[j], x[i]);
                for (int t = 0; t < n; ++t) x[j][t] -= c * x[i][t];
            }
            double nm = norm2(x[j]);
            if (nm < 1e-14) {
                x[j] = seeded_vector(n, 5000 + j);
                nm = norm2(x[j]);
            }
            for (auto& v : x[j]) v /= nm;
        }
    };
    orthonormalize();

    const int max_sweeps = 600;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        for (int j = 0; j < m; ++j) x[j] = lu.solve(std::move(x[j]));
        orthonormalize();
        if (sweep % 5 != 4 && sweep != max_sweeps - 1) continue;
        // Rayleigh-Ritz on the current subspace
        DMatrix b(m, m);
        std::vector<std::vector<double>> hx(m);
        for (int j = 0; j < m; ++j) hx[j] = h.apply(x[j]);
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) b(i, j) = b(j, i) = dot(x[i], hx[j]);
        auto ritz = dense_symmetric_eigen(b, true);
        std::vector<std::vector<double>> y(m, std::vector<double>(n, 0.0));
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < m; ++i) {
                double c = ritz.vectors(i, j);
                if (c == 0.0) continue;
                for (int t = 0; t < n; ++t) y[j][t] += c * x[i][t];
            }
        x = std::move(y);
        bool converged = true;
        for (int j = 0; j < k; ++j) {
            if (residual_norm(h, ritz.values[j], x[j]) > pol.residual_rel_tol * hnorm) {
                converged = false;
                break;
            }
        }
        if (converged) {
            std::vector<EigenPair> out;
            for (int j = 0; j < k; ++j) out.push_back({ritz.values[j], x[j]});
            return out;
        }
    }
    throw std::runtime_error("lowest_eigenpairs: no convergence");
}

std::vector<cplx> shifted_solve(const SymBandMatrix& h, cplx z, const std::vector<cplx>& b,
                                const NumericPolicy& pol) {
    if (static_cast<int>(b.size()) != h.dim())
        throw std::invalid_argument("shifted_solve: dimension mismatch");
    BandLU<cplx> lu = shifted_band_lu<cplx>(h, z);
    auto x = lu.solve(b);
    std::vector<double> xr(x.size()), xi(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        xr[i] = x[i].real();
        xi[i] = x[i].imag();
    }
    auto hr = h.apply(xr);
    auto hi = h.apply(xi);
    double rnorm = 0.0, bnorm = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        cplx r = cplx(hr[i], hi[i]) - z * x[i] - b[i];
        rnorm += std::norm(r);
        bnorm += std::norm(b[i]);
    }
    if (bnorm > 0.0 && std::sqrt(rnorm) > 1e2 * pol.residual_rel_tol * std::sqrt(bnorm))
        throw std::runtime_error("shifted_solve: residual too large (shift near spectrum?)");
    return x;
}

std::vector<double> singular_values(const DMatrix& m) {
    DMatrix a = m.rows() >= m.cols() ? m : m.transposed();
    const int rows = a.rows(), cols = a.cols();
    if (cols == 0 || rows == 0) return {};
    const double eps = std::numeric_limits<double>::epsilon();
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < cols - 1; ++p) {
            for (int q = p + 1; q < cols; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (int i = 0; i < rows; ++i) {
                    app += a(i, p) * a(i, p);
                    aqq += a(i, q) * a(i, q);
                    apq += a(i, p) * a(i, q);
                }
                if (std::abs(apq) <= 1e2 * eps * std::sqrt(app * aqq)) continue;
                rotated = true;
                double zeta = (aqq - app) / (2.0 * apq);
                double t = sign_like(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = c * t;
                for (int i = 0; i < rows; ++i) {
                    double vp = a(i, p), vq = a(i, q);
                    a(i, p) = c * vp - s * vq;
                    a(i, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }
    std::vector<double> sv(cols, 0.0);
    for (int j = 0; j < cols; ++j) {
        double s = 0.0;
        for (int i = 0; i < rows; ++i) s += a(i, j) * a(i, j);
        sv[j] = std::sqrt(s);
    }
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

}  // namespace idslab
