#pragma once

#include <functional>
#include <vector>

#include "idslab/matrix.hpp"
#include "idslab/spectra.hpp"

namespace idslab {

/// Piecewise-constant spectral shift function xi(., A, B) = N_B - N_A with
/// strict counting; integer-valued between breakpoints, zero outside the
/// convex hull of both spectra, undefined exactly at breakpoints.
struct SSFTable {
    std::vector<double> breakpoints;  // sorted union of both spectra
    std::vector<int> xi;              // value on (breakpoints[i], breakpoints[i+1])

    int sup_abs() const;
    double l1_norm() const;
    double lp_norm(double p) const;
    /// exact integral of f' xi, evaluated as sum xi_i (f(hi) - f(lo))
    double integrate_against_derivative(const std::function<double(double)>& f) const;
    /// xi at a point away from breakpoints (0 outside the hull)
    int value_at(double lambda) const;
};

SSFTable ssf(const DMatrix& a, const DMatrix& b);
SSFTable ssf_from_spectra(std::vector<double> eigs_a, std::vector<double> eigs_b);

struct KreinAudit {
    double lhs = 0.0;  // Tr f(A) - Tr f(B)
    double rhs = 0.0;  // integral of f' xi
    double discrepancy = 0.0;
};

KreinAudit krein_audit(const DMatrix& a, const DMatrix& b,
                       const std::function<double(double)>& f);

/// Invariance principle: for the monotone decreasing g(x) = (x-c0+1)^{-k}
/// on [c0, inf), xi(g(lambda), g(A), g(B)) = -xi(lambda, A, B).
/// Returns the number of disagreeing intervals (0 when the audit passes).
int invariance_audit(const DMatrix& a, const DMatrix& b, double c0, int k);

struct SsfBoundsVerdict {
    int rank = 0;
    double sup_xi = 0.0;
    double l1_xi = 0.0, trace_norm = 0.0;
    bool rank_bound_ok = false;
    bool l1_bound_ok = false;
    std::vector<double> lp_xi, lp_bound;  // per requested p
    bool lp_bounds_ok = false;
};

SsfBoundsVerdict ssf_bounds_audit(const DMatrix& a, const DMatrix& b,
                                  const std::vector<double>& p_values = {1.0, 2.0, 4.0});

double schatten_quasinorm(const DMatrix& m, double beta);

struct HolderProductVerdict {
    double lhs = 0.0;   // ||AB||_{J_r}
    double rhs = 0.0;   // ||A||_{J_p} ||B||_{J_q}
    bool ok = false;
};

HolderProductVerdict holder_product_audit(const DMatrix& a, const DMatrix& b, double p, double q);

struct OptSsfVerdict {
    bool domination_holds = false;  // tail condition on singular values
    double lhs = 0.0;               // integral of F(|xi|)
    double rhs = 0.0;               // sum [F(n)-F(n-1)] mu_n(C)
    bool ok = false;
};

OptSsfVerdict optssf_audit(const DMatrix& a, const DMatrix& b, const DMatrix& c,
                           const std::function<double(double)>& f_convex);

struct SemigroupSvReport {
    std::vector<double> singular_values;
    double c1 = 0.0, c2 = 0.0;  // mu_n <= c1 exp(-c2 n^(1/d)) envelope fit
    double r_squared = 0.0;
    int fitted_points = 0;
};

/// Singular values of exp(-H1) - exp(-H2) with a stretched-exponential
/// least-squares fit of log mu_n against n^(1/d).
SemigroupSvReport semigroup_difference_sv(const SymBandMatrix& h1, const SymBandMatrix& h2,
                                          int dim, const NumericPolicy& pol = default_policy());

struct InterlacingVerdict {
    int rank = 0;
    bool chains_ok = false;
    double worst_slack = 0.0;
};

/// lambda_n(H) <= lambda_{n+k}(H+P) and lambda_n(H+P) <= lambda_{n+k}(H)
/// for a rank-k symmetric perturbation P.
InterlacingVerdict interlacing_audit(const DMatrix& h, const DMatrix& p);

}  // namespace idslab
