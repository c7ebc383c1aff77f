#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "idslab/linalg.hpp"
#include "idslab/matrix.hpp"
#include "idslab/policy.hpp"

namespace idslab {

/// Sorted eigenvalues, optionally with an orthonormal eigenvector matrix
/// (column j belongs to values[j]).
struct EigenList {
    std::vector<double> values;
    DMatrix vectors;  // empty unless requested
    bool has_vectors = false;
};

/// Eigenvalues (and optionally eigenvectors) of a symmetric tridiagonal
/// matrix by the implicit-shift QL algorithm. diag/off are consumed;
/// off[i] couples i and i+1.
void tridiag_eigen(std::vector<double>& diag, std::vector<double>& off, DMatrix* z);

/// Householder reduction of a dense symmetric matrix to tridiagonal form,
/// accumulating the orthogonal transform in a when vectors are wanted.
void householder_tridiagonalize(DMatrix& a, std::vector<double>& diag,
                                std::vector<double>& off, bool accumulate);

/// Full eigendecomposition of a dense symmetric matrix.
EigenList dense_symmetric_eigen(DMatrix a, bool want_vectors);

/// Full eigendecomposition of a symmetric banded matrix. Tridiagonal input
/// goes straight to QL; wider bands go through Householder reduction.
/// Throws when dim exceeds the policy's dense cap.
EigenList eigenvalues(const SymBandMatrix& h, bool want_vectors = false,
                      const NumericPolicy& pol = default_policy());

/// #{ n : lambda_n(H) < E }, exact up to floating tolerance at collisions.
/// Tridiagonal matrices use the Sturm pivot recurrence, wider bands a
/// symmetric banded factorization of H - E I counting negative pivots
/// (Sylvester inertia). Near-zero pivots are perturbed toward exclusion
/// and logged in diag.
int count_below(const SymBandMatrix& h, double energy,
                const NumericPolicy& pol = default_policy(),
                SolveDiagnostics* diag = nullptr);

struct EigenPair {
    double value = 0.0;
    std::vector<double> vector;
};

/// Eigenpair(s) nearest a target energy, by shifted inverse iteration with
/// Rayleigh refinement. A degenerate cluster (within the policy's
/// clustering tolerance) is returned as a block of orthonormal vectors.
std::vector<EigenPair> eigenpair_near(const SymBandMatrix& h, double target,
                                      const NumericPolicy& pol = default_policy());

/// Eigenpair with a given index (0-based, ascending order), located by
/// count_below bisection and refined by inverse iteration.
EigenPair eigenpair_at_index(const SymBandMatrix& h, int index,
                             const NumericPolicy& pol = default_policy());

/// The k lowest eigenpairs by shifted subspace iteration on the banded
/// factorization; intended for matrices past the dense cap's comfort zone.
std::vector<EigenPair> lowest_eigenpairs(const SymBandMatrix& h, int k,
                                         const NumericPolicy& pol = default_policy());

/// x with (H - z) x = b for complex shift z off the spectrum.
std::vector<cplx> shifted_solve(const SymBandMatrix& h, cplx z, const std::vector<cplx>& b,
                                const NumericPolicy& pol = default_policy());

/// Singular values in non-increasing order (one-sided Jacobi).
std::vector<double> singular_values(const DMatrix& m);

}  // namespace idslab
