#pragma once

#include <cstdint>
#include <vector>

#include "idslab/ids.hpp"
#include "idslab/model.hpp"
#include "idslab/stats.hpp"

namespace idslab {

/// Smooth monotone switch: -1 on ]-inf,-eps], 0 on [eps,inf[, with
/// ||rho'||_inf <= 1/eps.
struct SwitchFunction {
    double eps = 1.0;

    double operator()(double x) const;
    double derivative(double x) const;
};

/// Tr P([e1, e2)) for one sample, unnormalised.
int interval_trace(const SymBandMatrix& h, double e1, double e2,
                   const NumericPolicy& pol = default_policy());
int interval_trace(const CountingFunction& cf, double e1, double e2);

struct ScalingCell {
    double eps = 0.0;
    int scale = 0;
    double mean_trace = 0.0;
    double stderr_trace = 0.0;
};

struct ScalingReport {
    std::vector<ScalingCell> cells;
    double energy = 0.0;
    double a = 0.0, a_stderr = 0.0;  // energy exponent fit on log-log data
    double b = 0.0, b_stderr = 0.0;  // volume exponent
    double residual_rms = 0.0;
    double c_w_hat = 0.0;            // max over cells of mean/(2 eps l^d)
    double c_ref = 0.0;              // ||f||_inf / (1 - alpha*)
    bool degenerate = false;         // no disorder averaging possible
    bool fitted = false;
};

/// Monte Carlo estimate of E{Tr P([E-eps, E+eps))} on an (eps, scale)
/// grid with unweighted least-squares exponent fits on the log means.
ScalingReport wegner_scaling(const AlloyModel& model, double energy,
                             const std::vector<double>& eps_list, const std::vector<int>& scales,
                             int trials, std::uint64_t seed, int workers = 1,
                             const NumericPolicy& pol = default_policy());

struct DosReport {
    std::vector<double> energies;  // interior grid points
    std::vector<double> dos;       // central differences of the mean IDS
    double sup_dos = 0.0;
    bool noisy = false;  // grid too coarse relative to the ensemble variance
};

DosReport dos_estimate(const EnsembleTable& table);

struct HellmannFeynmanAudit {
    double fd = 0.0;    // central finite difference of lambda_n in omega_j
    double form = 0.0;  // <psi_n, u_j psi_n> (cluster-summed when degenerate)
    double abs_err = 0.0;
    bool degenerate_cluster = false;
    int cluster_size = 1;
    double sum_forms = 0.0;  // sum_j <psi_n, u_j psi_n>
    double kappa = 0.0;      // min_x sum_k u(x-k) over the masked lattice
};

HellmannFeynmanAudit hellmann_feynman_audit(const AlloyModel& model, std::uint64_t seed,
                                            std::uint64_t trial, int site, int level,
                                            double step,
                                            const NumericPolicy& pol = default_policy());

struct SparseLowerBoundRow {
    int level = 0;
    double lambda = 0.0;
    double coupling_weighted_sum = 0.0;  // sum_k omega_k <psi, -u_k psi> >= E'
    double derivative_sum = 0.0;         // sum_k <psi, -u_k psi> >= E'/omega_+
    bool ok = false;
};

struct SparseLowerBoundReport {
    std::vector<SparseLowerBoundRow> rows;
    bool skipped = false;  // no spectrum below -E'
    double e_prime = 0.0;
    double omega_plus = 0.0;
};

SparseLowerBoundReport sparse_lower_bound_audit(const AlloyModel& model, std::uint64_t seed,
                                                std::uint64_t trial, double e_prime,
                                                const NumericPolicy& pol = default_policy());

struct TailPerturbationReport {
    double sup_potential_shift = 0.0;
    double sup_eigenvalue_shift = 0.0;
    double exact_tail_bound = 0.0;  // coupling range x truncated tail sum
    double power_law_bound = 0.0;   // c r^{-(m-d)} with c from the profile metadata
    bool ok = false;
};

/// Couplings agree inside the centred window of side l + 2r; the audit
/// bounds the potential and eigenvalue shifts on the inner box of side l.
TailPerturbationReport tail_perturbation_audit(const AlloyModel& model, int l, int r,
                                               std::uint64_t seed,
                                               const NumericPolicy& pol = default_policy());

struct HolderWegnerRow {
    int scale = 0;
    double hit_probability = 0.0;  // P{ sigma(H) meets I }
    WilsonInterval ci;
    double mean_trace = 0.0;       // E{ Tr P(I) }
    bool chebyshev_ok = false;     // hit probability <= mean trace
};

struct HolderWegnerReport {
    std::vector<HolderWegnerRow> rows;
    double s_of_interval = 0.0;  // holder_modulus(|I|)
};

HolderWegnerReport holder_wegner_audit(const AlloyModel& model, double e1, double e2,
                                       const std::vector<int>& scales, int trials,
                                       std::uint64_t seed, int workers = 1,
                                       const NumericPolicy& pol = default_policy());

struct MassRatioReport {
    double min_ratio = 1.0;  // min over eigenfunctions and cells
    int eigenfunctions = 0;
    int cells = 0;
};

/// 1D continuum-approximation audit of the sub-cell mass lower bound:
/// min over eigenfunctions with eigenvalue in [e1, e2) and all unit cells
/// of  int_{Lambda_s(k)} |psi|^2 / int_{Lambda_1(k)} |psi|^2.
MassRatioReport small_support_mass_audit(const HamiltonianMatrix& h, double s, double e1,
                                         double e2, const NumericPolicy& pol = default_policy());

}  // namespace idslab
