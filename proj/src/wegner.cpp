#include "idslab/wegner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "idslab/parallel.hpp"

namespace idslab {

double SwitchFunction::operator()(double x) const {
    if (x <= -eps) return -1.0;
    if (x >= eps) return 0.0;
    return 0.5 * (std::sin(std::numbers::pi * x / (2.0 * eps)) - 1.0);
}

double SwitchFunction::derivative(double x) const {
    if (x <= -eps || x >= eps) return 0.0;
    return std::numbers::pi / (4.0 * eps) * std::cos(std::numbers::pi * x / (2.0 * eps));
}

int interval_trace(const SymBandMatrix& h, double e1, double e2, const NumericPolicy& pol) {
    if (!(e1 <= e2)) throw std::invalid_argument("interval_trace: need E1 <= E2");
    if (e1 == e2) return 0;
    return count_below(h, e2, pol) - count_below(h, e1, pol);
}

int interval_trace(const CountingFunction& cf, double e1, double e2) {
    if (!(e1 <= e2)) throw std::invalid_argument("interval_trace: need E1 <= E2");
    return cf.count_strict(e2) - cf.count_strict(e1);
}

ScalingReport wegner_scaling(const AlloyModel& model, double energy,
                             const std::vector<double>& eps_list, const std::vector<int>& scales,
                             int trials, std::uint64_t seed, int workers,
                             const NumericPolicy& pol) {
    if (eps_list.size() < 2 || scales.empty())
        throw std::invalid_argument("wegner_scaling: need an eps ladder and at least one scale");
    ScalingReport rep;
    rep.energy = energy;

    bool any_positive = false;
    bool any_variation = false;
    for (int l : scales) {
        BoxSpec box = model.box_at_scale(l);
        auto rows = parallel_map<std::vector<int>>(trials, workers, [&](int t) {
            auto h = model.sample(box, seed, t);
            std::vector<int> counts(eps_list.size());
            for (std::size_t i = 0; i < eps_list.size(); ++i)
                counts[i] = interval_trace(h.matrix, energy - eps_list[i], energy + eps_list[i], pol);
            return counts;
        });
        for (std::size_t i = 0; i < eps_list.size(); ++i) {
            RunningStat st;
            for (auto& row : rows) st.add(row[i]);
            if (st.variance() > 0.0) any_variation = true;
            if (st.mean() > 0.0) any_positive = true;
            rep.cells.push_back({eps_list[i], l, st.mean(), st.stderror()});
        }
    }
    if (!any_positive)
        throw std::runtime_error("wegner_scaling: zero counts across the grid (energy outside spectrum?)");
    rep.degenerate = !any_variation;

    const int d = model.box.dim;
    std::vector<double> ys;
    DMatrix x(0, 0);
    {
        std::vector<std::array<double, 3>> rows;
        for (auto& c : rep.cells)
            if (c.mean_trace > 0.0)
                rows.push_back({1.0, std::log(2.0 * c.eps), d * std::log(static_cast<double>(c.scale))});
        x = DMatrix(static_cast<int>(rows.size()), 3);
        int i = 0;
        for (auto& c : rep.cells) {
            if (!(c.mean_trace > 0.0)) continue;
            x(i, 0) = 1.0;
            x(i, 1) = std::log(2.0 * c.eps);
            x(i, 2) = d * std::log(static_cast<double>(c.scale));
            ys.push_back(std::log(c.mean_trace));
            ++i;
        }
    }
    if (static_cast<int>(ys.size()) >= 4 && scales.size() >= 2) {
        auto fit = fit_ols(x, ys);
        rep.a = fit.beta[1];
        rep.a_stderr = fit.stderr_beta[1];
        rep.b = fit.beta[2];
        rep.b_stderr = fit.stderr_beta[2];
        rep.residual_rms = fit.residual_rms;
        rep.fitted = true;
    }

    for (auto& c : rep.cells) {
        double denom = 2.0 * c.eps * std::pow(static_cast<double>(c.scale), d);
        rep.c_w_hat = std::max(rep.c_w_hat, c.mean_trace / denom);
    }
    double fsup = model.disorder.sup_density();
    double astar = model.profile.alpha_star();
    double a0 = std::abs(model.profile.alpha_zero());
    if (std::isfinite(fsup) && astar < a0)
        rep.c_ref = (fsup / a0) / (1.0 - astar / a0);
    else
        rep.c_ref = std::numeric_limits<double>::infinity();
    return rep;
}

DosReport dos_estimate(const EnsembleTable& table) {
    const auto& g = table.grid;
    if (g.size() < 3) throw std::invalid_argument("dos_estimate: need at least 3 grid points");
    double step = g[1] - g[0];
    for (std::size_t i = 1; i + 1 < g.size(); ++i)
        if (std::abs((g[i + 1] - g[i]) - step) > 1e-9 * std::max(1.0, std::abs(step)))
            throw std::invalid_argument("dos_estimate: grid spacing not uniform");

    DosReport rep;
    double noise = 0.0, signal = 0.0;
    for (std::size_t i = 1; i + 1 < g.size(); ++i) {
        double d = (table.mean[i + 1] - table.mean[i - 1]) / (2.0 * step);
        rep.energies.push_back(g[i]);
        rep.dos.push_back(d);
        rep.sup_dos = std::max(rep.sup_dos, d);
        double se = std::sqrt((table.variance[i + 1] + table.variance[i - 1]) /
                              std::max<std::uint64_t>(table.trials, 1));
        noise += se / (2.0 * step);
        signal += std::abs(d);
    }
    rep.noisy = table.trials > 0 && noise > 0.5 * std::max(signal, 1e-300);
    return rep;
}

namespace {

// diagonal potential contributed by a unit coupling at `site`
std::vector<double> site_potential(const AlloyModel& model, const BoxSpec& box, int site) {
    CouplingField unit;
    unit.values.assign(box.site_count(), 0.0);
    unit.values[site] = 1.0;
    return assemble_alloy_potential(unit, model.profile, box).values;
}

}  // namespace

HellmannFeynmanAudit hellmann_feynman_audit(const AlloyModel& model, std::uint64_t seed,
                                            std::uint64_t trial, int site, int level,
                                            double step, const NumericPolicy& pol) {
    const BoxSpec& box = model.box;
    if (site < 0 || site >= box.site_count())
        throw std::invalid_argument("hellmann_feynman_audit: bad site");
    auto omega = sample_couplings(model.disorder, box, seed, trial);
    auto assemble = [&](double delta) {
        CouplingField om = omega;
        om.values[site] += delta;
        auto v = assemble_alloy_potential(om, model.profile, box);
        if (!model.vper_cell.empty()) {
            auto vp = periodic_background(model.vper_cell, model.vper_sides, box);
            for (std::size_t i = 0; i < v.values.size(); ++i) v.values[i] += vp.values[i];
        }
        return build_hamiltonian(box, v);
    };

    auto h0 = assemble(0.0);
    auto eig = eigenvalues(h0.matrix, true, pol);
    const int n = h0.matrix.dim();
    if (level < 0 || level >= n) throw std::invalid_argument("hellmann_feynman_audit: bad level");

    auto uj = site_potential(model, box, site);
    double unorm = 0.0;
    for (double u : uj) unorm = std::max(unorm, std::abs(u));

    // degeneracy handling per the cluster-sum rule
    double gap_tol = 10.0 * step * std::max(unorm, 1.0);
    int lo = level, hi = level;
    while (lo > 0 && eig.values[lo] - eig.values[lo - 1] < gap_tol) --lo;
    while (hi + 1 < n && eig.values[hi + 1] - eig.values[hi] < gap_tol) ++hi;

    HellmannFeynmanAudit audit;
    audit.cluster_size = hi - lo + 1;
    audit.degenerate_cluster = audit.cluster_size > 1;

    auto ep = eigenvalues(assemble(step).matrix, false, pol);
    auto em = eigenvalues(assemble(-step).matrix, false, pol);
    double fd = 0.0, form = 0.0;
    for (int a = lo; a <= hi; ++a) {
        fd += (ep.values[a] - em.values[a]) / (2.0 * step);
        double f = 0.0;
        for (int i = 0; i < n; ++i) f += uj[i] * eig.vectors(i, a) * eig.vectors(i, a);
        form += f;
    }
    audit.fd = fd;
    audit.form = form;
    audit.abs_err = std::abs(fd - form);

    // covering-constant cross-check: sum over all lattice sites
    double sum_forms = 0.0;
    std::vector<double> coverage(box.site_count(), 0.0);
    for (int k = 0; k < box.site_count(); ++k) {
        if (!model.disorder.mask_contains(box, k)) continue;
        auto uk = site_potential(model, box, k);
        for (int i = 0; i < n; ++i) coverage[i] += uk[i];
        double f = 0.0;
        for (int i = 0; i < n; ++i) f += uk[i] * eig.vectors(i, level) * eig.vectors(i, level);
        sum_forms += f;
    }
    audit.sum_forms = sum_forms;
    audit.kappa = *std::min_element(coverage.begin(), coverage.end());
    return audit;
}

SparseLowerBoundReport sparse_lower_bound_audit(const AlloyModel& model, std::uint64_t seed,
                                                std::uint64_t trial, double e_prime,
                                                const NumericPolicy& pol) {
    if (!(e_prime > 0.0)) throw std::invalid_argument("sparse_lower_bound_audit: need E' > 0");
    const BoxSpec& box = model.box;
    auto omega = sample_couplings(model.disorder, box, seed, trial);
    auto v = assemble_alloy_potential(omega, model.profile, box);
    auto h = build_hamiltonian(box, v);
    auto eig = eigenvalues(h.matrix, true, pol);

    SparseLowerBoundReport rep;
    rep.e_prime = e_prime;
    rep.omega_plus = model.disorder.support_max();

    const int n = h.matrix.dim();
    for (int a = 0; a < n && eig.values[a] <= -e_prime; ++a) {
        SparseLowerBoundRow row;
        row.level = a;
        row.lambda = eig.values[a];
        for (int k = 0; k < box.site_count(); ++k) {
            if (!model.disorder.mask_contains(box, k)) continue;
            auto uk = site_potential(model, box, k);
            double f = 0.0;
            for (int i = 0; i < n; ++i) f += (-uk[i]) * eig.vectors(i, a) * eig.vectors(i, a);
            row.derivative_sum += f;
            row.coupling_weighted_sum += omega.values[k] * f;
        }
        double tol = 1e-9 * std::max(1.0, e_prime);
        row.ok = row.coupling_weighted_sum >= e_prime - tol &&
                 row.derivative_sum >= e_prime / rep.omega_plus - tol;
        rep.rows.push_back(row);
    }
    rep.skipped = rep.rows.empty();
    return rep;
}

TailPerturbationReport tail_perturbation_audit(const AlloyModel& model, int l, int r,
                                               std::uint64_t seed, const NumericPolicy& pol) {
    if (r < 1) throw std::invalid_argument("tail_perturbation_audit: need r >= 1");
    if (!model.profile.tail_m || !model.profile.tail_c)
        throw std::invalid_argument("tail_perturbation_audit: profile lacks tail metadata");
    const double m_exp = *model.profile.tail_m;
    const double c_tail = *model.profile.tail_c;
    const int d = model.box.dim;
    if (!(m_exp > d)) throw std::invalid_argument("tail_perturbation_audit: need m > d");

    // profile reach from its effective support
    auto terms = model.profile.effective_terms();
    int reach = 0;
    for (auto& [off, val] : terms)
        for (int j = 0; j < d; ++j) reach = std::max(reach, std::abs(off[j]));

    const int big_side = l + 2 * r + 2 * reach;
    BoxSpec big = model.box_at_scale(big_side);
    auto om1 = sample_couplings(model.disorder, big, seed, 0);
    auto om2 = sample_couplings(model.disorder, big, seed, 1);
    // agree inside the centred window of side l + 2r
    const int agree_lo = (big_side - (l + 2 * r)) / 2;
    const int agree_hi = agree_lo + l + 2 * r;
    for (int idx = 0; idx < big.site_count(); ++idx) {
        auto c = big.coord_of(idx);
        bool inside = true;
        for (int j = 0; j < d; ++j)
            if (c[j] < agree_lo || c[j] >= agree_hi) inside = false;
        if (inside) om2.values[idx] = om1.values[idx];
    }
    auto v1 = assemble_alloy_potential(om1, model.profile, big);
    auto v2 = assemble_alloy_potential(om2, model.profile, big);

    // restrict both potentials to the centred inner box of side l
    BoxSpec inner = model.box_at_scale(l);
    const int off = (big_side - l) / 2;
    PotentialField w1, w2;
    w1.values.resize(inner.site_count());
    w2.values.resize(inner.site_count());
    TailPerturbationReport rep;
    for (int idx = 0; idx < inner.site_count(); ++idx) {
        auto c = inner.coord_of(idx);
        for (int j = 0; j < d; ++j) c[j] += off;
        int bidx = big.index_of(c);
        w1.values[idx] = v1.values[bidx];
        w2.values[idx] = v2.values[bidx];
        rep.sup_potential_shift =
            std::max(rep.sup_potential_shift, std::abs(v1.values[bidx] - v2.values[bidx]));
    }
    auto e1 = eigenvalues(build_hamiltonian(inner, w1).matrix, false, pol);
    auto e2 = eigenvalues(build_hamiltonian(inner, w2).matrix, false, pol);
    for (std::size_t i = 0; i < e1.values.size(); ++i)
        rep.sup_eigenvalue_shift =
            std::max(rep.sup_eigenvalue_shift, std::abs(e1.values[i] - e2.values[i]));

    // certified bound: coupling range x exact truncated tail sum; the
    // couplings that may differ sit at sup-distance > r from the inner box
    double w_range = model.disorder.support_max() - model.disorder.support_min();
    double tail_sum = 0.0;
    for (auto& [offv, val] : terms) {
        int dist = 0;
        for (int j = 0; j < d; ++j) dist = std::max(dist, std::abs(offv[j]));
        if (dist > r) tail_sum += std::abs(val);
    }
    // sup over x in the inner box of the sum of |u(x-k)| over differing k:
    // every such k has sup-distance > r from x, so the offset tail bounds it
    rep.exact_tail_bound = w_range * tail_sum;
    rep.power_law_bound = c_tail * w_range * std::pow(static_cast<double>(r), -(m_exp - d));
    rep.ok = rep.sup_eigenvalue_shift <= rep.power_law_bound + 1e-12 &&
             rep.sup_potential_shift <= rep.power_law_bound + 1e-12 &&
             rep.sup_eigenvalue_shift <= rep.sup_potential_shift + 1e-12;
    return rep;
}

HolderWegnerReport holder_wegner_audit(const AlloyModel& model, double e1, double e2,
                                       const std::vector<int>& scales, int trials,
                                       std::uint64_t seed, int workers,
                                       const NumericPolicy& pol) {
    if (!(e1 < e2)) throw std::invalid_argument("holder_wegner_audit: need E1 < E2");
    HolderWegnerReport rep;
    rep.s_of_interval = holder_modulus(model.disorder, e2 - e1);
    for (int l : scales) {
        BoxSpec box = model.box_at_scale(l);
        auto counts = parallel_map<int>(trials, workers, [&](int t) {
            auto h = model.sample(box, seed, t);
            return interval_trace(h.matrix, e1, e2, pol);
        });
        HolderWegnerRow row;
        row.scale = l;
        std::uint64_t hits = 0;
        RunningStat tr;
        for (int c : counts) {
            hits += c > 0 ? 1 : 0;
            tr.add(c);
        }
        row.hit_probability = static_cast<double>(hits) / trials;
        row.ci = wilson_interval(hits, trials);
        row.mean_trace = tr.mean();
        row.chebyshev_ok = row.hit_probability <= row.mean_trace + 1e-12;
        rep.rows.push_back(row);
    }
    return rep;
}

MassRatioReport small_support_mass_audit(const HamiltonianMatrix& h, double s, double e1,
                                         double e2, const NumericPolicy& pol) {
    const BoxSpec& box = h.box;
    if (box.dim != 1) throw std::invalid_argument("small_support_mass_audit: 1D only");
    if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("small_support_mass_audit: s in (0,1]");
    const int m = static_cast<int>(std::lround(1.0 / box.spacing));
    const int sub = static_cast<int>(std::lround(s * m));
    if (sub < 1)
        throw std::invalid_argument("small_support_mass_audit: window unresolvable at this spacing");
    if (box.sides[0] % m != 0)
        throw std::invalid_argument("small_support_mass_audit: box does not tile into unit cells");
    const int cells = box.sides[0] / m;

    auto eig = eigenvalues(h.matrix, true, pol);
    MassRatioReport rep;
    rep.cells = cells;
    rep.min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < eig.values.size(); ++a) {
        if (eig.values[a] < e1 || eig.values[a] >= e2) continue;
        ++rep.eigenfunctions;
        for (int k = 0; k < cells; ++k) {
            double cell_mass = 0.0, sub_mass = 0.0;
            int lo = k * m;
            int sub_lo = lo + (m - sub) / 2;
            for (int i = 0; i < m; ++i) {
                double p = eig.vectors(lo + i, static_cast<int>(a));
                p *= p;
                cell_mass += p;
                if (lo + i >= sub_lo && lo + i < sub_lo + sub) sub_mass += p;
            }
            if (cell_mass > 0.0) rep.min_ratio = std::min(rep.min_ratio, sub_mass / cell_mass);
        }
    }
    if (rep.eigenfunctions == 0) rep.min_ratio = 1.0;
    return rep;
}

}  // namespace idslab
