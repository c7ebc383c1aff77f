#pragma once

#include <array>
#include <utility>
#include <vector>

#include "idslab/disorder.hpp"
#include "idslab/lattice.hpp"
#include "idslab/linalg.hpp"

namespace idslab {

/// Multi-level Toeplitz matrix A = { alpha_{j-k} } over the enlarged index
/// set Lambda+ = { lambda - gamma : lambda in box, gamma in Gamma }.
struct ToeplitzOperator {
    std::vector<std::pair<std::array<int, 3>, double>> alpha;  // finite Gamma with values
    BoxSpec box;
    std::vector<std::array<int, 3>> lambda_plus;  // coordinates (may leave the box)
    int dim() const { return static_cast<int>(lambda_plus.size()); }
    double alpha_zero = 0.0;
    double alpha_star = 0.0;  // sum_{gamma != 0} |alpha_gamma|

    double entry(int row, int col) const;  // alpha_{j-k}, 0 off Gamma
    DMatrix to_dense() const;
    std::vector<double> apply(const std::vector<double>& x) const;
};

ToeplitzOperator toeplitz_matrix(
    const std::vector<std::pair<std::array<int, 3>, double>>& alpha, const BoxSpec& box);

struct SymbolReport {
    double min_abs_grid = 0.0;       // min |s| over the sample grid
    double certified_min = 0.0;      // grid min minus the Lipschitz slack
    double lipschitz_bound = 0.0;    // |s'| <= sum |j| |alpha_j|
    int winding = 0;                 // d=1 only
    double winding_residue = 0.0;    // distance of the phase sum to the integer
    bool has_winding = false;
};

/// Symbol s(theta) = sum alpha_j exp(i j.theta) scanned on a 2^14-point
/// grid with a Lipschitz-certified minimum; winding number in d=1.
SymbolReport symbol_analysis(const std::vector<std::pair<std::array<int, 3>, double>>& alpha,
                             int dim);

struct RowSumVerdict {
    double row_sum_norm = 0.0;         // ||B|| in the row-sum norm
    double normalized_norm = 0.0;      // |alpha_0| ||B||
    double bound = 0.0;                // 1 / (1 - alpha*/|alpha_0|)
    bool ok = false;
};

/// Explicit inverse via banded LU; max absolute row sum against the
/// uniform 1/(1-alpha*) bound (alpha_0 normalized to 1).
RowSumVerdict inverse_rowsum(const ToeplitzOperator& op);

std::vector<double> transform_couplings(const ToeplitzOperator& op,
                                        const std::vector<double>& omega);
std::vector<double> inverse_transform(const ToeplitzOperator& op, const std::vector<double>& eta);

/// k(eta) = |det B| prod_k f((A^-1 eta)_k)
double common_density(const ToeplitzOperator& op, const DensityTable& f,
                      const std::vector<double>& eta);

struct ConditionalDensityPoint {
    double eta_next = 0.0;   // the scanned coordinate eta_{j+1}
    double rho = 0.0;        // k(eta) / g_j(eta)
    double marginal = 0.0;   // g_j(eta)
    bool diverged = false;   // marginal below quadrature resolution
};

/// Conditional density rho_j = k/g_j probed along a grid of eta_{j+1}
/// values with all other coordinates of eta fixed at zero; the marginal
/// g_j comes from panel quadrature over eta_j.
std::vector<ConditionalDensityPoint> conditional_density_probe(const ToeplitzOperator& op,
                                                               const DensityTable& f, int j,
                                                               const std::vector<double>& grid);

}  // namespace idslab
