#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "idslab/disorder.hpp"
#include "idslab/matrix.hpp"
#include "idslab/model.hpp"
#include "idslab/spectra.hpp"
#include "idslab/stats.hpp"

namespace idslab {

struct QuadratureSpec {
    double truncation_z = 40.0;  // integrate zeta over [-Z, Z]
    int nodes = 512;             // total Gauss-Legendre nodes across panels
    bool trapezoid = false;      // fall back to the trapezoid rule
    void validate() const;
};

struct AverageVerdict {
    std::complex<double> value;
    double tail_bound = 0.0;
    double quadrature_error = 0.0;  // refinement estimate
    double bound = 0.0;             // the inequality's right-hand side
    bool ok = false;
};

/// | integral of <phi, J (H + zeta W - z)^-1 J phi> dzeta/(1+t zeta^2) |
/// against pi, with certified truncation tail and quadrature estimate.
/// Requires W symmetric, J >= 0, J^2 <= W (checked), Im z < 0, ||phi|| = 1.
AverageVerdict resolvent_average(const DMatrix& h, const DMatrix& w, const DMatrix& j, cplx z,
                                 double t, const QuadratureSpec& quad,
                                 const std::vector<double>& phi);

/// integral of rho(zeta) <psi, J P_{H + zeta W}(I) J psi> dzeta against
/// sup|rho| |I|; panels split where an eigenvalue of H + zeta W crosses an
/// endpoint of I (located by bisection, W >= 0 makes the curves monotone).
AverageVerdict projection_average(const DMatrix& h, const DMatrix& w, const DMatrix& j,
                                  double e1, double e2, const DensityTable& rho,
                                  const QuadratureSpec& quad, const std::vector<double>& psi);

struct StoneReport {
    std::vector<double> deltas;
    std::vector<double> errors;  // ||f_delta(H) - limit|| per delta (exact, same eigenbasis)
    bool endpoint_hit = false;   // an eigenvalue sits at E1 or E2 (half weight used)
    DMatrix last_f_delta;        // f_delta(H) at the smallest delta
};

StoneReport stone_projection(const DMatrix& h, double e1, double e2,
                             const std::vector<double>& deltas);

struct GreenDecayReport {
    double norm = 0.0;       // || chi_out (H - E)^-1 chi_in ||
    double gamma_hat = 0.0;  // -log(norm)/l
    bool regular = false;    // norm <= exp(-gamma l) for the queried gamma
    double spectral_bound = 0.0;  // 1/d(E, sigma(H)) when available (0 = not computed)
};

/// Sandwiched resolvent norm: chi_in the centred box of side l/3, chi_out
/// the boundary belt between sides l-3 and l-1. Requires l in 6N.
GreenDecayReport green_decay(const HamiltonianMatrix& h, double energy, double gamma,
                             const NumericPolicy& pol = default_policy());

struct RegularityEstimate {
    double probability = 0.0;
    WilsonInterval ci;
    int trials = 0;
};

RegularityEstimate regularity_probability(const AlloyModel& model, double energy, double gamma,
                                          int l, int trials, std::uint64_t seed, int workers = 1,
                                          const NumericPolicy& pol = default_policy());

struct DistanceTailRow {
    int scale = 0;
    double threshold = 0.0;  // exp(-gamma l^beta)
    double probability = 0.0;
    WilsonInterval ci;
};

struct DistanceTailReport {
    std::vector<DistanceTailRow> rows;
    double alpha_hat = 0.0;  // slope of -log P against l^beta, when fittable
    bool alpha_valid = false;
};

/// P{ d(sigma(H_omega^l), E) <= exp(-gamma l^beta) } across scales.
DistanceTailReport eigenvalue_distance_tail(const AlloyModel& model, double energy,
                                            const std::vector<int>& scales, double beta,
                                            double gamma, int trials, std::uint64_t seed,
                                            int workers = 1,
                                            const NumericPolicy& pol = default_policy());

enum class WellMode { Symmetric, Detuned };

struct SpencerReport {
    double splitting = 0.0;           // lambda_2 - lambda_1 of the double well
    double amp_product_ground = 0.0;  // |psi(a1) psi(a2)| of the lowest state
    double amp_product_second = 0.0;
    double sigma_distance = 0.0;      // d(sigma_1, sigma_2) over bound states
    double mass_ratio = 0.0;          // heavier/lighter well mass of the ground state
    double ground_energy = 0.0;
};

/// Two square wells of the given depth/width at centre distance rho on a
/// 1D chain; Symmetric reflects well 1 exactly, Detuned deepens well 2 by
/// detune. Amplitude at a well = max |psi| over the well's support.
SpencerReport spencer_double_well(double depth, int width, int rho, WellMode mode,
                                  double detune = 0.0,
                                  const NumericPolicy& pol = default_policy());

}  // namespace idslab
