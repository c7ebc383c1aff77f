#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "idslab/model.hpp"
#include "idslab/spectra.hpp"

namespace idslab {

/// Finite-volume normalised eigenvalue counting function
/// N(E) = #{ lambda_n < E } / |box|, kept as the sorted spectrum plus the
/// physical volume (site count * h^d).
struct CountingFunction {
    std::vector<double> eigenvalues;  // ascending
    double volume = 1.0;

    int count_strict(double energy) const;
    double value(double energy) const { return count_strict(energy) / volume; }
};

CountingFunction counting_function(const HamiltonianMatrix& h,
                                   const NumericPolicy& pol = default_policy());

/// Strict-below counts on a grid via count_below; the large-box route when
/// the full spectrum is not wanted.
std::vector<int> counts_on_grid(const SymBandMatrix& m, const std::vector<double>& grid,
                                const NumericPolicy& pol = default_policy());

/// |box|^-1 sum_n exp(-t lambda_n), exact finite sum.
double laplace_transform(const CountingFunction& cf, double t);

/// Per-energy mean/variance/trial-count accumulator with seed provenance.
/// Trials merge in fixed index order, making the table bitwise
/// deterministic for any worker count.
struct EnsembleTable {
    std::vector<double> grid;
    std::vector<double> mean;
    std::vector<double> variance;
    std::uint64_t trials = 0;
    std::uint64_t master_seed = 0;
    std::string fingerprint;
    int scale = 0;

    static EnsembleTable from_rows(const std::vector<double>& grid,
                                   const std::vector<std::vector<double>>& rows,
                                   std::uint64_t master_seed, int scale);
};

struct IdsEnsembleResult {
    std::vector<EnsembleTable> per_scale;
    /// localised-trace IDS estimate E{ Tr[chi_cell P(]-inf,E[)] } / |cell|
    /// from a single larger box, for comparison with the ensemble means
    std::vector<double> localized_trace;
    int localized_side = 0;
};

IdsEnsembleResult ids_ensemble(const AlloyModel& model, const std::vector<int>& scales,
                               int trials, const std::vector<double>& grid, std::uint64_t seed,
                               int workers = 1, const NumericPolicy& pol = default_policy());

/// One-sample Dirichlet/Neumann bracketing audit over an exhaustive energy
/// grid (midpoints between all spectral breakpoints).
struct BracketingReport {
    int violations_dirichlet_super = 0;
    int violations_neumann_sub = 0;
    int violations_neumann_vs_dirichlet = 0;
    int energies_checked = 0;
    double worst_energy = 0.0;

    int total_violations() const {
        return violations_dirichlet_super + violations_neumann_sub +
               violations_neumann_vs_dirichlet;
    }
};

BracketingReport bracketing_audit(const AlloyModel& model, const BoxSpec& box, int axis,
                                  int split, std::uint64_t seed, std::uint64_t trial,
                                  const NumericPolicy& pol = default_policy());

/// sup_E |mean N^D - mean N^N| per scale (paired couplings).
std::vector<double> bc_gap(const AlloyModel& model, const std::vector<int>& scales,
                           const std::vector<double>& grid, int trials, std::uint64_t seed,
                           int workers = 1, const NumericPolicy& pol = default_policy());

struct JumpReport {
    std::vector<std::pair<double, double>> jumps;  // (left grid energy, increment)
    bool grid_adequate = true;
    double max_background_step = 0.0;
};

/// Upward steps of the mean table exceeding the threshold across one grid
/// interval. Throws when the grid cannot carry the requested resolution.
JumpReport detect_jumps(const EnsembleTable& table, double threshold);

struct PercolationIdsResult {
    std::vector<EnsembleTable> per_scale;
    std::vector<JumpReport> jumps;  // detect_jumps on each mean table
    int empty_clusters = 0;         // all-zero contributions, logged per spec
};

/// Quantum percolation IDS: graph Laplacian of boundary-connected clusters,
/// normalised by the full-box site count.
PercolationIdsResult percolation_ids(const BoxSpec& box_template, double p,
                                     const std::vector<int>& scales, int trials,
                                     const std::vector<double>& grid, std::uint64_t seed,
                                     double jump_threshold, int workers = 1,
                                     const NumericPolicy& pol = default_policy());

/// Graph Laplacian of the retained percolation cluster (cluster-degree
/// diagonal, -1 on retained edges), renumbered in ascending site order.
SymBandMatrix cluster_laplacian(const ActiveSiteSet& set);

}  // namespace idslab
