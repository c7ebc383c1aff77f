#include "idslab/ids.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "idslab/parallel.hpp"
#include "idslab/stats.hpp"

namespace idslab {

int CountingFunction::count_strict(double energy) const {
    // ties at machine precision resolve toward exclusion, matching the
    // pivot-perturbation convention of count_below
    double scale = std::max({1.0, std::abs(energy),
                             eigenvalues.empty() ? 0.0 : std::abs(eigenvalues.back()),
                             eigenvalues.empty() ? 0.0 : std::abs(eigenvalues.front())});
    double tol = 64.0 * std::numeric_limits<double>::epsilon() * scale;
    return static_cast<int>(
        std::lower_bound(eigenvalues.begin(), eigenvalues.end(), energy - tol) -
        eigenvalues.begin());
}

CountingFunction counting_function(const HamiltonianMatrix& h, const NumericPolicy& pol) {
    CountingFunction cf;
    cf.eigenvalues = eigenvalues(h.matrix, false, pol).values;
    cf.volume = h.box.volume();
    return cf;
}

std::vector<int> counts_on_grid(const SymBandMatrix& m, const std::vector<double>& grid,
                                const NumericPolicy& pol) {
    std::vector<int> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = count_below(m, grid[i], pol);
    return out;
}

double laplace_transform(const CountingFunction& cf, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("laplace_transform: t must be positive");
    double s = 0.0;
    for (double lam : cf.eigenvalues) s += std::exp(-t * lam);
    return s / cf.volume;
}

EnsembleTable EnsembleTable::from_rows(const std::vector<double>& grid,
                                       const std::vector<std::vector<double>>& rows,
                                       std::uint64_t master_seed, int scale) {
    EnsembleTable t;
    t.grid = grid;
    t.master_seed = master_seed;
    t.scale = scale;
    t.trials = rows.size();
    std::vector<RunningStat> acc(grid.size());
    for (const auto& row : rows)
        for (std::size_t i = 0; i < grid.size(); ++i) acc[i].add(row[i]);
    t.mean.resize(grid.size());
    t.variance.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        t.mean[i] = acc[i].mean();
        t.variance[i] = acc[i].variance();
    }
    return t;
}

IdsEnsembleResult ids_ensemble(const AlloyModel& model, const std::vector<int>& scales,
                               int trials, const std::vector<double>& grid, std::uint64_t seed,
                               int workers, const NumericPolicy& pol) {
    if (trials < 1) throw std::invalid_argument("ids_ensemble: trials must be >= 1");
    IdsEnsembleResult res;
    for (int l : scales) {
        BoxSpec box = model.box_at_scale(l);
        auto rows = parallel_map<std::vector<double>>(trials, workers, [&](int t) {
            auto h = model.sample(box, seed, t);
            auto counts = counts_on_grid(h.matrix, grid, pol);
            std::vector<double> row(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i) row[i] = counts[i] / box.volume();
            return row;
        });
        res.per_scale.push_back(EnsembleTable::from_rows(grid, rows, seed, l));
    }

    // Pastur-Subin localised-trace estimator on a single larger box. The
    // estimate needs eigenvectors, so it is limited to boxes whose full
    // decomposition stays affordable; past that the estimator is skipped.
    // The comparison box must be at least 4x the largest ladder scale;
    // when that exceeds the vector budget the estimator is skipped.
    const long vector_cap = std::min<long>(pol.dense_cap, 1280);
    int lmax = *std::max_element(scales.begin(), scales.end());
    long big_sites = 1;
    for (int j = 0; j < model.box.dim; ++j) big_sites *= 4L * lmax;
    if (big_sites > vector_cap) {
        res.localized_trace.assign(grid.size(), 0.0);
        res.localized_side = 0;
        return res;
    }
    int side = 4 * lmax;
    res.localized_side = side;
    BoxSpec big = model.box_at_scale(side);
    int cell_per_axis = std::max(1, static_cast<int>(std::lround(1.0 / big.spacing)));
    std::vector<int> cell_sites;
    for (int idx = 0; idx < big.site_count(); ++idx) {
        auto c = big.coord_of(idx);
        bool in_cell = true;
        for (int j = 0; j < big.dim; ++j) {
            int lo = big.sides[j] / 2 - cell_per_axis / 2;
            if (c[j] < lo || c[j] >= lo + cell_per_axis) in_cell = false;
        }
        if (in_cell) cell_sites.push_back(idx);
    }
    double cell_volume = cell_sites.size() * std::pow(big.spacing, big.dim);
    int big_trials = std::min(trials, 16);
    auto traces = parallel_map<std::vector<double>>(big_trials, workers, [&](int t) {
        auto h = model.sample(big, seed, t);
        auto eig = eigenvalues(h.matrix, true, pol);
        std::vector<double> row(grid.size(), 0.0);
        // cumulative cell mass over eigenvalues below each grid energy
        std::vector<double> mass(eig.values.size(), 0.0);
        for (std::size_t k = 0; k < eig.values.size(); ++k)
            for (int j : cell_sites) mass[k] += eig.vectors(j, static_cast<int>(k)) *
                                                eig.vectors(j, static_cast<int>(k));
        for (std::size_t i = 0; i < grid.size(); ++i) {
            double acc = 0.0;
            for (std::size_t k = 0; k < eig.values.size() && eig.values[k] < grid[i]; ++k)
                acc += mass[k];
            row[i] = acc / cell_volume;
        }
        return row;
    });
    res.localized_trace.assign(grid.size(), 0.0);
    for (const auto& row : traces)
        for (std::size_t i = 0; i < grid.size(); ++i) res.localized_trace[i] += row[i];
    for (auto& v : res.localized_trace) v /= big_trials;
    return res;
}

namespace {

PotentialField restrict_potential(const PotentialField& v, const BoxSpec& box,
                                  const BoxSpec& sub, int axis, int offset) {
    PotentialField out;
    out.values.resize(sub.site_count());
    for (int idx = 0; idx < sub.site_count(); ++idx) {
        auto c = sub.coord_of(idx);
        c[axis] += offset;
        out.values[idx] = v.values[box.index_of(c)];
    }
    return out;
}

std::vector<double> midpoint_grid(std::vector<double> all) {
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    std::vector<double> grid;
    if (all.empty()) return grid;
    grid.push_back(all.front() - 1.0);
    for (std::size_t i = 0; i + 1 < all.size(); ++i)
        grid.push_back(0.5 * (all[i] + all[i + 1]));
    grid.push_back(all.back() + 1.0);
    return grid;
}

}  // namespace

BracketingReport bracketing_audit(const AlloyModel& model, const BoxSpec& box, int axis,
                                  int split, std::uint64_t seed, std::uint64_t trial,
                                  const NumericPolicy& pol) {
    box.validate();
    if (axis < 0 || axis >= box.dim) throw std::invalid_argument("bracketing_audit: bad axis");
    if (split <= 0 || split >= box.sides[axis])
        throw std::invalid_argument("bracketing_audit: split must cut the box");

    auto v = model.potential(box, seed, trial);

    BoxSpec sub1 = box, sub2 = box;
    sub1.sides[axis] = split;
    sub2.sides[axis] = box.sides[axis] - split;
    auto v1 = restrict_potential(v, box, sub1, axis, 0);
    auto v2 = restrict_potential(v, box, sub2, axis, split);

    auto spectrum = [&](const BoxSpec& b, const PotentialField& pot, Bc bc) {
        BoxSpec bb = b;
        bb.bc = bc;
        return eigenvalues(build_hamiltonian(bb, pot).matrix, false, pol).values;
    };
    // the superadditive Dirichlet chain needs the decoupled variant; the
    // clamped stencil provably loses superadditivity near the band top
    auto d0 = spectrum(box, v, Bc::DirichletDecoupled), n0 = spectrum(box, v, Bc::Neumann);
    auto d1 = spectrum(sub1, v1, Bc::DirichletDecoupled), n1 = spectrum(sub1, v1, Bc::Neumann);
    auto d2 = spectrum(sub2, v2, Bc::DirichletDecoupled), n2 = spectrum(sub2, v2, Bc::Neumann);

    std::vector<double> all;
    for (auto* s : {&d0, &n0, &d1, &n1, &d2, &n2}) all.insert(all.end(), s->begin(), s->end());
    auto grid = midpoint_grid(all);

    auto count = [](const std::vector<double>& spec, double e) {
        return static_cast<int>(std::lower_bound(spec.begin(), spec.end(), e) - spec.begin());
    };

    BracketingReport rep;
    rep.energies_checked = static_cast<int>(grid.size());
    for (double e : grid) {
        int fd = count(d0, e), fn = count(n0, e);
        int fd1 = count(d1, e), fd2 = count(d2, e);
        int fn1 = count(n1, e), fn2 = count(n2, e);
        bool bad = false;
        if (fd < fd1 + fd2) {
            ++rep.violations_dirichlet_super;
            bad = true;
        }
        if (fn > fn1 + fn2) {
            ++rep.violations_neumann_sub;
            bad = true;
        }
        if (fn < fd) {
            ++rep.violations_neumann_vs_dirichlet;
            bad = true;
        }
        if (bad) rep.worst_energy = e;
    }
    return rep;
}

std::vector<double> bc_gap(const AlloyModel& model, const std::vector<int>& scales,
                           const std::vector<double>& grid, int trials, std::uint64_t seed,
                           int workers, const NumericPolicy& pol) {
    std::vector<double> gaps;
    for (int l : scales) {
        BoxSpec bd = model.box_at_scale(l);
        bd.bc = Bc::Dirichlet;
        BoxSpec bn = bd;
        bn.bc = Bc::Neumann;
        auto rows = parallel_map<std::vector<double>>(trials, workers, [&](int t) {
            auto v = model.potential(bd, seed, t);  // identical couplings for both b.c.
            auto hd = build_hamiltonian(bd, v);
            auto hn = build_hamiltonian(bn, v);
            auto cd = counts_on_grid(hd.matrix, grid, pol);
            auto cn = counts_on_grid(hn.matrix, grid, pol);
            std::vector<double> row(2 * grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i) {
                row[i] = cd[i] / bd.volume();
                row[grid.size() + i] = cn[i] / bn.volume();
            }
            return row;
        });
        double sup = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            RunningStat d, n;
            for (const auto& row : rows) {
                d.add(row[i]);
                n.add(row[grid.size() + i]);
            }
            sup = std::max(sup, std::abs(d.mean() - n.mean()));
        }
        gaps.push_back(sup);
    }
    return gaps;
}

SymBandMatrix cluster_laplacian(const ActiveSiteSet& set) {
    const auto& box = set.box;
    const int m = static_cast<int>(set.retained.size());
    std::vector<int> position(box.site_count(), -1);
    for (int i = 0; i < m; ++i) position[set.retained[i]] = i;
    SymBandMatrix lap(m, std::min(box.bandwidth(), std::max(m - 1, 1)));
    for (int i = 0; i < m; ++i) {
        auto c = box.coord_of(set.retained[i]);
        int degree = 0;
        for (int j = 0; j < box.dim; ++j) {
            for (int dir : {+1, -1}) {
                auto nb = c;
                nb[j] += dir;
                if (!box.contains(nb)) continue;
                int pos = position[box.index_of(nb)];
                if (pos < 0) continue;
                ++degree;
                if (dir == +1) lap.add(i, pos, -1.0);
            }
        }
        lap.add(i, i, static_cast<double>(degree));
    }
    return lap;
}

JumpReport detect_jumps(const EnsembleTable& table, double threshold) {
    if (table.grid.size() < 2)
        throw std::invalid_argument("detect_jumps: grid too coarse (need >= 2 points)");
    JumpReport rep;
    for (std::size_t i = 0; i + 1 < table.grid.size(); ++i) {
        double inc = table.mean[i + 1] - table.mean[i];
        if (inc >= threshold)
            rep.jumps.emplace_back(table.grid[i], inc);
        else
            rep.max_background_step = std::max(rep.max_background_step, inc);
    }
    // background steps close to the threshold mean the grid cannot separate
    // jumps from the absolutely continuous part
    rep.grid_adequate = rep.max_background_step < 0.5 * threshold;
    return rep;
}

PercolationIdsResult percolation_ids(const BoxSpec& box_template, double p,
                                     const std::vector<int>& scales, int trials,
                                     const std::vector<double>& grid, std::uint64_t seed,
                                     double jump_threshold, int workers,
                                     const NumericPolicy& pol) {
    if (!(p > 0.0 && p <= 1.0))
        throw std::invalid_argument("percolation_ids: p must lie in (0, 1]");
    PercolationIdsResult res;
    for (int l : scales) {
        BoxSpec box = box_template;
        for (auto& s : box.sides) s = l;
        std::vector<int> empties(trials, 0);
        auto rows = parallel_map<std::vector<double>>(trials, workers, [&](int t) {
            auto set = percolation_cluster(box, p, seed, t);
            std::vector<double> row(grid.size(), 0.0);
            if (set.retained.empty()) {
                empties[t] = 1;  // all-zero contribution
                return row;
            }
            auto lap = cluster_laplacian(set);
            auto counts = counts_on_grid(lap, grid, pol);
            for (std::size_t i = 0; i < grid.size(); ++i)
                row[i] = static_cast<double>(counts[i]) / box.site_count();
            return row;
        });
        for (int e : empties) res.empty_clusters += e;
        auto table = EnsembleTable::from_rows(grid, rows, seed, l);
        res.jumps.push_back(detect_jumps(table, jump_threshold));
        res.per_scale.push_back(std::move(table));
    }
    return res;
}

}  // namespace idslab
