#include "idslab/ssf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "idslab/stats.hpp"

namespace idslab {

namespace {

std::vector<double> sym_eigs(const DMatrix& m) { return dense_symmetric_eigen(m, false).values; }

int count_strict(const std::vector<double>& sorted, double e) {
    return static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), e) - sorted.begin());
}

}  // namespace

int SSFTable::sup_abs() const {
    int m = 0;
    for (int v : xi) m = std::max(m, std::abs(v));
    return m;
}

double SSFTable::l1_norm() const {
    double s = 0.0;
    for (std::size_t i = 0; i < xi.size(); ++i)
        s += std::abs(xi[i]) * (breakpoints[i + 1] - breakpoints[i]);
    return s;
}

double SSFTable::lp_norm(double p) const {
    double s = 0.0;
    for (std::size_t i = 0; i < xi.size(); ++i)
        s += std::pow(std::abs(xi[i]), p) * (breakpoints[i + 1] - breakpoints[i]);
    return std::pow(s, 1.0 / p);
}

double SSFTable::integrate_against_derivative(const std::function<double(double)>& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < xi.size(); ++i)
        if (xi[i] != 0) s += xi[i] * (f(breakpoints[i + 1]) - f(breakpoints[i]));
    return s;
}

int SSFTable::value_at(double lambda) const {
    if (breakpoints.empty() || lambda <= breakpoints.front() || lambda >= breakpoints.back())
        return 0;
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), lambda);
    std::size_t i = static_cast<std::size_t>(it - breakpoints.begin()) - 1;
    return xi[std::min(i, xi.size() - 1)];
}

SSFTable ssf_from_spectra(std::vector<double> ea, std::vector<double> eb) {
    if (ea.size() != eb.size()) throw std::invalid_argument("ssf: dimension mismatch");
    std::sort(ea.begin(), ea.end());
    std::sort(eb.begin(), eb.end());
    std::vector<double> bp;
    bp.reserve(ea.size() + eb.size());
    bp.insert(bp.end(), ea.begin(), ea.end());
    bp.insert(bp.end(), eb.begin(), eb.end());
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    SSFTable t;
    t.breakpoints = bp;
    if (bp.size() >= 2) {
        t.xi.resize(bp.size() - 1);
        for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
            double mid = 0.5 * (bp[i] + bp[i + 1]);
            t.xi[i] = count_strict(eb, mid) - count_strict(ea, mid);
        }
    }
    return t;
}

SSFTable ssf(const DMatrix& a, const DMatrix& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("ssf: dimension mismatch");
    return ssf_from_spectra(sym_eigs(a), sym_eigs(b));
}

KreinAudit krein_audit(const DMatrix& a, const DMatrix& b,
                       const std::function<double(double)>& f) {
    auto ea = sym_eigs(a), eb = sym_eigs(b);
    KreinAudit out;
    for (double l : ea) out.lhs += f(l);
    for (double l : eb) out.lhs -= f(l);
    out.rhs = ssf_from_spectra(ea, eb).integrate_against_derivative(f);
    out.discrepancy = std::abs(out.lhs - out.rhs);
    return out;
}

int invariance_audit(const DMatrix& a, const DMatrix& b, double c0, int k) {
    auto ea = sym_eigs(a), eb = sym_eigs(b);
    for (double l : ea)
        if (l < c0) throw std::invalid_argument("invariance_audit: spectrum below c0");
    for (double l : eb)
        if (l < c0) throw std::invalid_argument("invariance_audit: spectrum below c0");
    auto g = [&](double x) { return std::pow(x - c0 + 1.0, -k); };
    std::vector<double> ga, gb;
    for (double l : ea) ga.push_back(g(l));
    for (double l : eb) gb.push_back(g(l));
    auto orig = ssf_from_spectra(ea, eb);
    auto trans = ssf_from_spectra(ga, gb);
    int bad = 0;
    for (std::size_t i = 0; i < orig.xi.size(); ++i) {
        double mid = 0.5 * (orig.breakpoints[i] + orig.breakpoints[i + 1]);
        if (trans.value_at(g(mid)) != -orig.xi[i]) ++bad;
    }
    return bad;
}

double schatten_quasinorm(const DMatrix& m, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("schatten_quasinorm: beta must be positive");
    double s = 0.0;
    for (double mu : singular_values(m)) s += std::pow(mu, beta);
    return std::pow(s, 1.0 / beta);
}

SsfBoundsVerdict ssf_bounds_audit(const DMatrix& a, const DMatrix& b,
                                  const std::vector<double>& p_values) {
    SsfBoundsVerdict v;
    auto table = ssf(a, b);
    auto diff = a - b;
    auto mu = singular_values(diff);
    double mu_max = mu.empty() ? 0.0 : mu.front();
    double rank_tol = 1e-10 * std::max(mu_max, 1e-300);
    for (double s : mu)
        if (s > rank_tol) ++v.rank;
    v.sup_xi = table.sup_abs();
    v.rank_bound_ok = v.sup_xi <= v.rank;

    v.l1_xi = table.l1_norm();
    for (double s : mu) v.trace_norm += s;
    v.l1_bound_ok = v.l1_xi <= v.trace_norm + 1e-10 * std::max(1.0, v.trace_norm);

    v.lp_bounds_ok = true;
    for (double p : p_values) {
        double lp = table.lp_norm(p);
        double bound = 0.0;  // ||A-B||_{J_{1/p}}^{1/p} = sum mu^{1/p}
        for (double s : mu) bound += std::pow(s, 1.0 / p);
        v.lp_xi.push_back(lp);
        v.lp_bound.push_back(bound);
        if (lp > bound + 1e-9 * std::max(1.0, bound)) v.lp_bounds_ok = false;
    }
    return v;
}

HolderProductVerdict holder_product_audit(const DMatrix& a, const DMatrix& b, double p,
                                          double q) {
    if (!(p > 0.0 && q > 0.0)) throw std::invalid_argument("holder_product_audit: p, q > 0");
    HolderProductVerdict v;
    double r = 1.0 / (1.0 / p + 1.0 / q);
    v.lhs = schatten_quasinorm(a * b, r);
    v.rhs = schatten_quasinorm(a, p) * schatten_quasinorm(b, q);
    v.ok = v.lhs <= v.rhs + 1e-9 * std::max(1.0, v.rhs);
    return v;
}

OptSsfVerdict optssf_audit(const DMatrix& a, const DMatrix& b, const DMatrix& c,
                           const std::function<double(double)>& f_convex) {
    OptSsfVerdict v;
    auto mu_ab = singular_values(a - b);
    auto mu_c = singular_values(c);
    std::size_t n = std::max(mu_ab.size(), mu_c.size());
    mu_ab.resize(n, 0.0);
    mu_c.resize(n, 0.0);
    v.domination_holds = true;
    double tol = 1e-10 * std::max(1.0, mu_c.empty() ? 0.0 : mu_c.front());
    // tails sum_{n >= N} mu_n, checked for every N
    double ta = 0.0, tc = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        ta += mu_ab[i];
        tc += mu_c[i];
        if (ta > tc + tol) v.domination_holds = false;
    }
    if (!v.domination_holds) return v;

    auto table = ssf(a, b);
    for (std::size_t i = 0; i < table.xi.size(); ++i)
        v.lhs += f_convex(std::abs(table.xi[i])) * (table.breakpoints[i + 1] - table.breakpoints[i]);
    for (std::size_t i = 0; i < mu_c.size(); ++i) {
        double dn = f_convex(static_cast<double>(i + 1)) - f_convex(static_cast<double>(i));
        v.rhs += dn * mu_c[i];
    }
    v.ok = v.lhs <= v.rhs + 1e-9 * std::max(1.0, v.rhs);
    return v;
}

SemigroupSvReport semigroup_difference_sv(const SymBandMatrix& h1, const SymBandMatrix& h2,
                                          int dim, const NumericPolicy& pol) {
    if (h1.dim() != h2.dim())
        throw std::invalid_argument("semigroup_difference_sv: dimension mismatch");
    double expm_scale = 0.0;
    auto expm = [&](const SymBandMatrix& h) {
        auto eig = eigenvalues(h, true, pol);
        expm_scale = std::max(expm_scale, std::exp(-eig.values.front()));
        const int n = h.dim();
        DMatrix out(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int k = 0; k < n; ++k)
                    s += eig.vectors(i, k) * std::exp(-eig.values[k]) * eig.vectors(j, k);
                out(i, j) = s;
            }
        return out;
    };
    SemigroupSvReport rep;
    rep.singular_values = singular_values(expm(h1) - expm(h2));
    if (rep.singular_values.empty() || rep.singular_values.front() == 0.0) return rep;

    // least squares of log mu_n against n^(1/d), down to the noise floor
    // of the dense exponentials
    double floor = std::max(rep.singular_values.front() * 1e-12,
                            100.0 * h1.dim() * std::numeric_limits<double>::epsilon() * expm_scale);
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < rep.singular_values.size(); ++i) {
        double mu = rep.singular_values[i];
        if (mu <= floor) break;
        xs.push_back(std::pow(static_cast<double>(i + 1), 1.0 / dim));
        ys.push_back(std::log(mu));
    }
    rep.fitted_points = static_cast<int>(xs.size());
    if (xs.size() < 3) return rep;
    auto fit = fit_line(xs, ys);
    rep.c2 = -fit.slope;
    rep.c1 = std::exp(fit.intercept);
    double my = 0.0;
    for (double y : ys) my += y;
    my /= ys.size();
    double sst = 0.0;
    for (double y : ys) sst += (y - my) * (y - my);
    double ssr = fit.residual_rms * fit.residual_rms * ys.size();
    rep.r_squared = sst > 0.0 ? 1.0 - ssr / sst : 0.0;
    return rep;
}

InterlacingVerdict interlacing_audit(const DMatrix& h, const DMatrix& p) {
    if (h.rows() != p.rows()) throw std::invalid_argument("interlacing_audit: dimension mismatch");
    InterlacingVerdict v;
    auto mu = singular_values(p);
    double tol = 1e-10 * std::max(1.0, mu.empty() ? 0.0 : mu.front());
    for (double s : mu)
        if (s > tol) ++v.rank;
    auto ea = sym_eigs(h);
    auto eb = sym_eigs(h + p);
    const int n = static_cast<int>(ea.size());
    const int k = v.rank;
    double scale = 0.0;
    for (double x : ea) scale = std::max(scale, std::abs(x));
    double slack_tol = 1e-11 * std::max(1.0, scale);
    v.chains_ok = true;
    for (int i = 0; i + k < n; ++i) {
        double s1 = eb[i + k] - ea[i];
        double s2 = ea[i + k] - eb[i];
        v.worst_slack = std::min({v.worst_slack, s1, s2});
        if (s1 < -slack_tol || s2 < -slack_tol) v.chains_ok = false;
    }
    return v;
}

}  // namespace idslab
