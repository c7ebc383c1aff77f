#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "idslab/lattice.hpp"

namespace idslab {

/// Philox4x32-10 counter-based generator (Salmon et al., SC 2011).
/// Pure function of (key, counter); identical output on every platform.
struct Philox {
    static std::array<std::uint32_t, 4> block(const std::array<std::uint32_t, 4>& counter,
                                              const std::array<std::uint32_t, 2>& key);

    /// one double in (0,1), keyed by (seed, trial, site, draw)
    static double uniform01(std::uint64_t seed, std::uint64_t trial, std::uint64_t site,
                            std::uint32_t draw = 0);
};

/// Piecewise density table. Step tables carry one value per interval,
/// linear (trapezoid) tables one value per breakpoint.
struct DensityTable {
    std::vector<double> x;  // breakpoints, strictly ascending
    std::vector<double> f;  // step: |x|-1 values; linear: |x| values
    bool linear = false;

    void validate(double expected_mass = 1.0) const;
    double mass() const;
    double pdf(double t) const;
    double cdf(double t) const;
    double quantile(double u) const;  // u in (0, mass)
    double sup_norm() const;
    double total_variation() const;   // as a function on R (zero outside the table)
    double deriv_l1() const;          // linear tables only: ||f'||_L1 inside the support

    static DensityTable uniform(double a, double b);
};

enum class DistClass { Uniform, Bernoulli, Piecewise, Laplace, LocallyContinuous };
enum class MaskKind { Full, Sublattice, Surface, Explicit };

/// Law of one coupling constant plus the support mask. Couplings are
/// always i.i.d.; correlations enter only through the Toeplitz transform.
struct DisorderSpec {
    DistClass dist = DistClass::Uniform;

    double uniform_a = 0.0, uniform_b = 1.0;
    double bernoulli_p = 0.5, bernoulli_qa = 1.0, bernoulli_qb = 0.0;
    DensityTable table;  // Piecewise
    double laplace_scale = 1.0;
    // LocallyContinuous: point masses at/below omega_c plus a density above
    double omega_c = 0.0;
    std::vector<std::pair<double, double>> atoms;  // (value, weight)
    DensityTable upper_table;                      // mass 1 - sum(weights)

    MaskKind mask = MaskKind::Full;
    std::vector<int> explicit_sites;

    void validate() const;
    double quantile(double u) const;
    bool mask_contains(const BoxSpec& box, int site) const;
    /// sup of the density; infinity for laws with atoms
    double sup_density() const;
    double support_min() const;
    double support_max() const;
};

/// Per-site couplings with their seed provenance; regeneration from
/// (master_seed, trial_index) reproduces the field bitwise.
struct CouplingField {
    std::vector<double> values;
    std::uint64_t master_seed = 0;
    std::uint64_t trial_index = 0;
};

CouplingField sample_couplings(const DisorderSpec& spec, const BoxSpec& box,
                               std::uint64_t master_seed, std::uint64_t trial_index);

/// Generalised step function u(x) = sum_gamma alpha_gamma w(x - gamma),
/// given by the convolution vector alpha over Gamma and a base profile w.
struct SingleSiteProfile {
    std::vector<std::array<int, 3>> gamma;      // support offsets of alpha
    std::vector<double> alpha;                  // one per gamma entry
    std::vector<std::array<int, 3>> w_offsets;  // base profile support
    std::vector<double> w_values;
    // optional long-range tail bound |u(x)| <= C (1+|x|^2)^(-m/2)
    std::optional<double> tail_c;
    std::optional<double> tail_m;

    void validate() const;
    double alpha_zero() const;   // coefficient at gamma = 0 (0 when absent)
    double alpha_star() const;   // sum_{gamma != 0} |alpha_gamma|
    /// effective u = alpha (*) w as (offset, value) pairs
    std::vector<std::pair<std::array<int, 3>, double>> effective_terms() const;

    static SingleSiteProfile delta();  // u = indicator of the origin
    static SingleSiteProfile from_terms(
        const std::vector<std::pair<std::array<int, 3>, double>>& alpha_terms);
};

/// V(x) = sum_k omega_k u(x - k); contributions falling outside the box
/// are truncated (wrapped for periodic boxes).
PotentialField assemble_alloy_potential(const CouplingField& couplings,
                                        const SingleSiteProfile& profile, const BoxSpec& box);

/// Site percolation sample: the retained set is the union of active
/// clusters touching the box boundary, certified by breadth-first search.
struct ActiveSiteSet {
    BoxSpec box;
    std::vector<bool> active;
    std::vector<int> retained;  // ascending site indices, all boundary-connected
};

ActiveSiteSet percolation_cluster(const BoxSpec& box, double p, std::uint64_t master_seed,
                                  std::uint64_t trial_index);

/// Hoelder modulus of continuity s(eps) = sup { mu([a,b]) : b-a <= eps },
/// exact for the table/atomic distribution classes.
double holder_modulus(const DisorderSpec& spec, double eps);

}  // namespace idslab
