#pragma once

#include <cstdint>
#include <string>

namespace idslab {

inline constexpr const char* kVersion = "0.1.0";

/// Central numeric policy. All solver and audit tolerances live here so
/// property tests can tighten them in one place.
struct NumericPolicy {
    double eig_rel_tol = 1e-12;        // eigenvalue accuracy, relative to ||H||
    double residual_rel_tol = 1e-10;   // eigenpair / linear-solve residuals
    double ortho_tol = 1e-10;          // eigenvector orthonormality
    double degeneracy_rel_tol = 1e-9;  // eigenvalue clustering threshold, relative to ||H||
    double svd_rel_tol = 1e-10;
    int dense_cap = 4096;              // largest dimension for full eigendecomposition
    int max_inverse_iter = 200;
    int pivot_retries = 3;             // count_below retries after pivot perturbation
};

inline const NumericPolicy& default_policy() {
    static const NumericPolicy p{};
    return p;
}

/// Counters for numerically delicate events. Purely diagnostic; never
/// part of serialized artifacts.
struct SolveDiagnostics {
    std::uint64_t perturbed_pivots = 0;
};

}  // namespace idslab
