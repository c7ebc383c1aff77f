#include "idslab/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "idslab/linalg.hpp"
#include "idslab/parallel.hpp"

namespace idslab {

namespace {

using std::numbers::pi;

const double kGx[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                       0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                       0.9445750230732326, 0.9894009349916499};
const double kGw[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                       0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                       0.0622535239386479, 0.0271524594117541};

// 16-point Gauss-Legendre on [a, b]
template <typename F>
auto gauss16(F&& f, double a, double b) -> decltype(f(0.0)) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    decltype(f(0.0)) acc{};
    for (int q = 0; q < 8; ++q)
        acc += half * kGw[q] * (f(mid + half * kGx[q]) + f(mid - half * kGx[q]));
    return acc;
}

template <typename F>
auto panel_integrate(F&& f, double a, double b, int panels) -> decltype(f(0.0)) {
    decltype(f(0.0)) acc{};
    for (int p = 0; p < panels; ++p) {
        double lo = a + (b - a) * p / panels;
        double hi = a + (b - a) * (p + 1) / panels;
        acc += gauss16(f, lo, hi);
    }
    return acc;
}

// dyadically graded symmetric edges on [-z, z]: the integrands peak near
// the origin on an O(1) scale and decay polynomially
std::vector<double> graded_edges(double z) {
    std::vector<double> pos{0.0};
    for (double w = 0.5; pos.back() < z; w *= 2.0) pos.push_back(std::min(z, pos.back() + w));
    std::vector<double> edges;
    for (auto it = pos.rbegin(); it != pos.rend(); ++it) edges.push_back(-*it);
    for (std::size_t i = 1; i < pos.size(); ++i) edges.push_back(pos[i]);
    return edges;
}

template <typename F>
auto graded_integrate(F&& f, double z, int per_panel, decltype(f(0.0))* coarse_out)
    -> decltype(f(0.0)) {
    auto edges = graded_edges(z);
    decltype(f(0.0)) fine{}, coarse{};
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        coarse += panel_integrate(f, edges[i], edges[i + 1], per_panel);
        fine += panel_integrate(f, edges[i], edges[i + 1], 2 * per_panel);
    }
    if (coarse_out) *coarse_out = coarse;
    return fine;
}

void check_norm_one(const std::vector<double>& v, const char* who) {
    if (std::abs(norm2(v) - 1.0) > 1e-8)
        throw std::invalid_argument(std::string(who) + ": vector not normalised");
}

// J^2 <= W checked through the smallest eigenvalue of W - J*J
void check_j2_le_w(const DMatrix& w, const DMatrix& j) {
    auto eig = dense_symmetric_eigen(w - j * j, false);
    double scale = std::max(1.0, w.max_abs());
    if (eig.values.front() < -1e-10 * scale)
        throw std::invalid_argument("spectral averaging: precondition J^2 <= W violated");
}

ZMatrix complex_shifted(const DMatrix& h, const DMatrix& w, double zeta, cplx z) {
    const int n = h.rows();
    ZMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) m(i, k) = cplx(h(i, k) + zeta * w(i, k), 0.0) - (i == k ? z : cplx{});
    return m;
}

}  // namespace

void QuadratureSpec::validate() const {
    if (!(truncation_z > 0.0)) throw std::invalid_argument("QuadratureSpec: Z must be positive");
    if (nodes < 16) throw std::invalid_argument("QuadratureSpec: need at least 16 nodes");
}

AverageVerdict resolvent_average(const DMatrix& h, const DMatrix& w, const DMatrix& j, cplx z,
                                 double t, const QuadratureSpec& quad,
                                 const std::vector<double>& phi) {
    quad.validate();
    if (!(z.imag() < 0.0)) throw std::invalid_argument("resolvent_average: need Im z < 0");
    if (!(t > 0.0)) throw std::invalid_argument("resolvent_average: need t > 0");
    check_norm_one(phi, "resolvent_average");
    check_j2_le_w(w, j);

    auto jphi = j.apply(phi);
    auto integrand = [&](double zeta) -> cplx {
        ZMatrix m = complex_shifted(h, w, zeta, z);
        DenseLU<cplx> lu(std::move(m));
        std::vector<cplx> rhs(jphi.size());
        for (std::size_t i = 0; i < jphi.size(); ++i) rhs[i] = jphi[i];
        auto x = lu.solve(rhs);
        cplx val{};
        for (std::size_t i = 0; i < jphi.size(); ++i) val += jphi[i] * x[i];
        return val / (1.0 + t * zeta * zeta);
    };

    const double zmax = quad.truncation_z;
    int per_panel = std::max(1, quad.nodes / 16 / static_cast<int>(graded_edges(zmax).size()));
    AverageVerdict v;
    cplx coarse{};
    v.value = graded_integrate(integrand, zmax, per_panel, &coarse);
    v.quadrature_error = std::abs(v.value - coarse);

    double jnorm = dense_symmetric_eigen(j, false).values.back();
    double tail_weight = 2.0 * (pi / 2.0 - std::atan(std::sqrt(t) * zmax)) / std::sqrt(t);
    v.tail_bound = jnorm * jnorm / std::abs(z.imag()) * tail_weight;
    v.bound = pi;
    v.ok = std::abs(v.value) <= pi + v.tail_bound + v.quadrature_error + 1e-9;
    return v;
}

AverageVerdict projection_average(const DMatrix& h, const DMatrix& w, const DMatrix& j,
                                  double e1, double e2, const DensityTable& rho,
                                  const QuadratureSpec& quad, const std::vector<double>& psi) {
    quad.validate();
    if (!(e1 <= e2)) throw std::invalid_argument("projection_average: need E1 <= E2");
    check_norm_one(psi, "projection_average");
    {
        auto weig = dense_symmetric_eigen(w, false);
        if (weig.values.front() < -1e-10 * std::max(1.0, w.max_abs()))
            throw std::invalid_argument("projection_average: W must be >= 0");
    }
    check_j2_le_w(w, j);

    auto jpsi = j.apply(psi);
    const int n = h.rows();
    auto form = [&](double zeta) -> double {
        DMatrix m = h;
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) m(i, k) += zeta * w(i, k);
        auto eig = dense_symmetric_eigen(std::move(m), true);
        double acc = 0.0;
        for (int a = 0; a < n; ++a) {
            if (eig.values[a] < e1 || eig.values[a] >= e2) continue;
            double c = 0.0;
            for (int i = 0; i < n; ++i) c += eig.vectors(i, a) * jpsi[i];
            acc += c * c;
        }
        return acc;
    };
    auto integrand = [&](double zeta) { return rho.pdf(zeta) * form(zeta); };

    // eigenvalue curves are monotone in zeta; locate crossings of E1/E2 by
    // bisection so quadrature panels stay smooth
    double lo = rho.x.front(), hi = rho.x.back();
    auto eigs_at = [&](double zeta) {
        DMatrix m = h;
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) m(i, k) += zeta * w(i, k);
        return dense_symmetric_eigen(std::move(m), false).values;
    };
    auto at_lo = eigs_at(lo), at_hi = eigs_at(hi);
    std::vector<double> cuts{lo, hi};
    for (double bp : rho.x) cuts.push_back(bp);
    for (double edge : {e1, e2}) {
        for (int a = 0; a < n; ++a) {
            if (!(at_lo[a] < edge && at_hi[a] >= edge)) continue;
            double a0 = lo, b0 = hi;
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (a0 + b0);
                if (eigs_at(mid)[a] < edge)
                    a0 = mid;
                else
                    b0 = mid;
            }
            cuts.push_back(0.5 * (a0 + b0));
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    AverageVerdict v;
    double value = 0.0, coarse = 0.0;
    int per_panel = std::max(1, quad.nodes / 16 / std::max<int>(1, cuts.size() - 1));
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (!(cuts[i + 1] > cuts[i])) continue;
        value += panel_integrate(integrand, cuts[i], cuts[i + 1], per_panel * 2);
        coarse += panel_integrate(integrand, cuts[i], cuts[i + 1], per_panel);
    }
    v.value = value;
    v.quadrature_error = std::abs(value - coarse);
    v.bound = rho.sup_norm() * (e2 - e1);
    v.ok = value <= v.bound + v.quadrature_error + 1e-9;
    return v;
}

StoneReport stone_projection(const DMatrix& h, double e1, double e2,
                             const std::vector<double>& deltas) {
    if (!(e1 <= e2)) throw std::invalid_argument("stone_projection: need E1 <= E2");
    for (std::size_t i = 1; i < deltas.size(); ++i)
        if (!(deltas[i] < deltas[i - 1]))
            throw std::invalid_argument("stone_projection: deltas must decrease");
    auto eig = dense_symmetric_eigen(h, true);
    const int n = h.rows();
    double scale = std::max({1.0, std::abs(e1), std::abs(e2), std::abs(eig.values.front()),
                             std::abs(eig.values.back())});
    StoneReport rep;
    rep.deltas = deltas;
    auto limit_weight = [&](double x) {
        double tol = 1e-12 * scale;
        if (std::abs(x - e1) <= tol || std::abs(x - e2) <= tol) {
            rep.endpoint_hit = true;
            return 0.5;  // arctan limit gives half weight at an endpoint
        }
        return (x > e1 && x < e2) ? 1.0 : 0.0;
    };
    for (double d : deltas) {
        if (!(d > 0.0)) throw std::invalid_argument("stone_projection: delta must be positive");
        double err = 0.0;
        for (int a = 0; a < n; ++a) {
            double fd = (std::atan((eig.values[a] - e1) / d) - std::atan((eig.values[a] - e2) / d)) / pi;
            err = std::max(err, std::abs(fd - limit_weight(eig.values[a])));
        }
        rep.errors.push_back(err);
    }
    // f_delta(H) at the smallest delta, assembled spectrally
    double d = deltas.back();
    DMatrix f(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            double s = 0.0;
            for (int a = 0; a < n; ++a) {
                double fd =
                    (std::atan((eig.values[a] - e1) / d) - std::atan((eig.values[a] - e2) / d)) / pi;
                s += eig.vectors(i, a) * fd * eig.vectors(k, a);
            }
            f(i, k) = s;
        }
    rep.last_f_delta = std::move(f);
    return rep;
}

GreenDecayReport green_decay(const HamiltonianMatrix& h, double energy, double gamma,
                             const NumericPolicy& pol) {
    const auto& box = h.box;
    int l = box.sides[0];
    for (int s : box.sides)
        if (s != l) throw std::invalid_argument("green_decay: box must be a cube");
    if (l % 6 != 0) throw std::invalid_argument("green_decay: side must be a multiple of 6");

    auto centred = [&](int r) {
        std::vector<int> sites;
        for (int idx = 0; idx < box.site_count(); ++idx) {
            auto c = box.coord_of(idx);
            bool inside = true;
            for (int j = 0; j < box.dim; ++j) {
                int lo = (l - r) / 2;
                if (c[j] < lo || c[j] >= lo + r) inside = false;
            }
            if (inside) sites.push_back(idx);
        }
        return sites;
    };
    auto inner = centred(l / 3);
    auto big = centred(l - 1);
    auto core = centred(l - 3);
    std::vector<int> belt;
    std::set_difference(big.begin(), big.end(), core.begin(), core.end(),
                        std::back_inserter(belt));

    // resonance test: an eigenvalue within tolerance of E makes the
    // sandwiched inverse meaningless
    double scale = std::max(h.matrix.inf_norm(), 1.0);
    double res_tol = 1e-9 * scale;
    if (count_below(h.matrix, energy + res_tol, pol) != count_below(h.matrix, energy - res_tol, pol))
        throw std::runtime_error("green_decay: energy resonant with the spectrum");
    BandLU<double> lu = shifted_band_lu<double>(h.matrix, energy);
    DMatrix block(static_cast<int>(belt.size()), static_cast<int>(inner.size()));
    std::vector<double> e(h.matrix.dim(), 0.0);
    for (std::size_t c = 0; c < inner.size(); ++c) {
        std::fill(e.begin(), e.end(), 0.0);
        e[inner[c]] = 1.0;
        auto x = lu.solve(e);
        // resolvent sign: (H - E)^-1
        double rmax = 0.0;
        for (double t : x) rmax = std::max(rmax, std::abs(t));
        if (!std::isfinite(rmax) || rmax > 1e14)
            throw std::runtime_error("green_decay: energy resonant with the spectrum");
        for (std::size_t r = 0; r < belt.size(); ++r) block(static_cast<int>(r), static_cast<int>(c)) = x[belt[r]];
    }
    GreenDecayReport rep;
    auto sv = singular_values(block);
    rep.norm = sv.empty() ? 0.0 : sv.front();
    rep.gamma_hat = rep.norm > 0.0 ? -std::log(rep.norm) / l : std::numeric_limits<double>::infinity();
    rep.regular = rep.norm <= std::exp(-gamma * l);
    if (h.matrix.dim() <= pol.dense_cap) {
        auto eig = eigenvalues(h.matrix, false, pol);
        double dist = std::numeric_limits<double>::infinity();
        for (double lam : eig.values) dist = std::min(dist, std::abs(lam - energy));
        if (dist > 0.0) rep.spectral_bound = 1.0 / dist;
    }
    return rep;
}

RegularityEstimate regularity_probability(const AlloyModel& model, double energy, double gamma,
                                          int l, int trials, std::uint64_t seed, int workers,
                                          const NumericPolicy& pol) {
    BoxSpec box = model.box_at_scale(l);
    auto hits = parallel_map<int>(trials, workers, [&](int t) {
        auto h = model.sample(box, seed, t);
        try {
            return green_decay(h, energy, gamma, pol).regular ? 1 : 0;
        } catch (const std::runtime_error&) {
            return 0;  // resonant energy counts as irregular
        }
    });
    RegularityEstimate est;
    est.trials = trials;
    std::uint64_t k = 0;
    for (int hit : hits) k += hit;
    est.probability = trials ? static_cast<double>(k) / trials : 0.0;
    est.ci = wilson_interval(k, trials);
    return est;
}

DistanceTailReport eigenvalue_distance_tail(const AlloyModel& model, double energy,
                                            const std::vector<int>& scales, double beta,
                                            double gamma, int trials, std::uint64_t seed,
                                            int workers, const NumericPolicy& pol) {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("eigenvalue_distance_tail: beta must lie in (0,1)");
    DistanceTailReport rep;
    std::vector<double> xs, ys;
    for (int l : scales) {
        double thr = std::exp(-gamma * std::pow(static_cast<double>(l), beta));
        BoxSpec box = model.box_at_scale(l);
        auto hits = parallel_map<int>(trials, workers, [&](int t) {
            auto h = model.sample(box, seed, t);
            int below = count_below(h.matrix, energy - thr, pol);
            int above = count_below(h.matrix, energy + thr, pol);
            return above > below ? 1 : 0;
        });
        std::uint64_t k = 0;
        for (int hit : hits) k += hit;
        DistanceTailRow row;
        row.scale = l;
        row.threshold = thr;
        row.probability = static_cast<double>(k) / trials;
        row.ci = wilson_interval(k, trials);
        rep.rows.push_back(row);
        if (k > 0) {
            xs.push_back(std::pow(static_cast<double>(l), beta));
            ys.push_back(-std::log(row.probability));
        }
    }
    if (xs.size() >= 2) {
        rep.alpha_hat = fit_line(xs, ys).slope;
        rep.alpha_valid = true;
    }
    return rep;
}

SpencerReport spencer_double_well(double depth, int width, int rho, WellMode mode, double detune,
                                  const NumericPolicy& pol) {
    if (width < 1 || depth <= 0.0) throw std::invalid_argument("spencer_double_well: bad well");
    if (rho < 2 * width) throw std::invalid_argument("spencer_double_well: wells overlap");

    const int margin = std::max(20, rho / 2);
    const int n = 2 * margin + rho + width;  // total chain length
    BoxSpec box{1, {n}, 1.0, Bc::Dirichlet};
    // well 1 occupies [a1, a1+width), well 2 its mirror image
    int a1 = margin;
    int a2 = margin + rho;
    std::vector<double> v1(n, 0.0), v2(n, 0.0);
    for (int i = 0; i < width; ++i) {
        v1[a1 + i] = -depth;
        // Symmetric: exact reflection of well 1 through the chain centre
        v2[a2 + i] = -(depth + (mode == WellMode::Detuned ? detune : 0.0));
    }

    auto spectrum_neg = [&](const std::vector<double>& v) {
        PotentialField p;
        p.values = v;
        auto eig = eigenvalues(build_hamiltonian(box, p).matrix, false, pol);
        std::vector<double> neg;
        for (double lam : eig.values)
            if (lam < 0.0) neg.push_back(lam);
        return neg;
    };
    auto s1 = spectrum_neg(v1), s2 = spectrum_neg(v2);
    SpencerReport rep;
    rep.sigma_distance = std::numeric_limits<double>::infinity();
    for (double a : s1)
        for (double b : s2) rep.sigma_distance = std::min(rep.sigma_distance, std::abs(a - b));
    if (s1.empty() || s2.empty())
        throw std::runtime_error("spencer_double_well: wells carry no bound state");

    PotentialField both;
    both.values.resize(n);
    for (int i = 0; i < n; ++i) both.values[i] = v1[i] + v2[i];
    auto h = build_hamiltonian(box, both);
    auto eig = eigenvalues(h.matrix, true, pol);
    rep.ground_energy = eig.values[0];
    rep.splitting = eig.values[1] - eig.values[0];

    auto amp = [&](int col, int a) {
        double m = 0.0;
        for (int i = 0; i < width; ++i) m = std::max(m, std::abs(eig.vectors(a + i, col)));
        return m;
    };
    rep.amp_product_ground = amp(0, a1) * amp(0, a2);
    rep.amp_product_second = amp(1, a1) * amp(1, a2);

    double m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < width; ++i) {
        m1 += eig.vectors(a1 + i, 0) * eig.vectors(a1 + i, 0);
        m2 += eig.vectors(a2 + i, 0) * eig.vectors(a2 + i, 0);
    }
    rep.mass_ratio = std::max(m1, m2) / std::max(std::min(m1, m2), 1e-300);
    return rep;
}

}  // namespace idslab
