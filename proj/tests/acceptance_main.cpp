// Acceptance suite: one pass/fail line per criterion, exit code = number
// of failed criteria. Tolerances are pinned here, not configurable.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "idslab/averaging.hpp"
#include "idslab/ids.hpp"
#include "idslab/parallel.hpp"
#include "idslab/runner.hpp"
#include "idslab/ssf.hpp"
#include "idslab/toeplitz.hpp"
#include "idslab/wegner.hpp"

using namespace idslab;
using std::numbers::pi;

namespace {

int g_workers = 2;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
};

#define REQUIRE_C(cond)                                             \
    do {                                                            \
        if (!(cond)) {                                              \
            out.pass = false;                                       \
            out.detail << " [failed: " << #cond << "]";             \
        }                                                           \
    } while (0)

PotentialField zeros(const BoxSpec& box) {
    PotentialField v;
    v.values.assign(box.site_count(), 0.0);
    return v;
}

AlloyModel anderson_1d() {
    AlloyModel m;
    m.box = BoxSpec{1, {64}, 1.0, Bc::Dirichlet};
    m.disorder.dist = DistClass::Uniform;
    m.disorder.uniform_a = 0.0;
    m.disorder.uniform_b = 1.0;
    return m;
}

double philox_normal(std::uint64_t seed, std::uint64_t trial, std::uint64_t site) {
    double u1 = Philox::uniform01(seed, trial, site, 0);
    double u2 = Philox::uniform01(seed, trial, site, 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
}

DMatrix random_symmetric(int n, std::uint64_t seed, std::uint64_t trial, std::uint64_t tag) {
    DMatrix m(n, n);
    std::uint64_t s = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double v = philox_normal(seed, trial, (tag << 32) | s++);
            m(i, j) = m(j, i) = v;
        }
    return m;
}

DMatrix random_low_rank(int n, int rank, std::uint64_t seed, std::uint64_t trial,
                        std::uint64_t tag) {
    DMatrix m(n, n);
    std::uint64_t s = 0;
    for (int r = 0; r < rank; ++r) {
        std::vector<double> u(n);
        for (int i = 0; i < n; ++i) u[i] = philox_normal(seed, trial, (tag << 32) | s++);
        double c = philox_normal(seed, trial, (tag << 32) | s++);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) += c * u[i] * u[j] / n;
    }
    return m;
}

// ---- criterion 1: exact spectra ------------------------------------------

Outcome criterion1() {
    Outcome out;
    double worst = 0.0;
    for (int n : {1, 2, 3, 4, 7, 16, 33, 100, 255, 256, 511, 512}) {
        BoxSpec bd{1, {n}, 1.0, Bc::Dirichlet};
        auto ed = eigenvalues(build_hamiltonian(bd, zeros(bd)).matrix);
        for (int k = 1; k <= n; ++k)
            worst = std::max(worst,
                             std::abs(ed.values[k - 1] - (2.0 - 2.0 * std::cos(k * pi / (n + 1)))));
        if (n >= 2) {
            BoxSpec bn = bd;
            bn.bc = Bc::Neumann;
            auto en = eigenvalues(build_hamiltonian(bn, zeros(bn)).matrix);
            for (int k = 0; k < n; ++k)
                worst = std::max(worst, std::abs(en.values[k] - (2.0 - 2.0 * std::cos(k * pi / n))));
        }
    }
    double worst2d = 0.0;
    for (auto [a, b] : {std::pair{8, 8}, {16, 16}, {12, 20}}) {
        BoxSpec box{2, {a, b}, 1.0, Bc::Dirichlet};
        auto eig = eigenvalues(build_hamiltonian(box, zeros(box)).matrix);
        std::vector<double> sums;
        for (int i = 1; i <= a; ++i)
            for (int j = 1; j <= b; ++j)
                sums.push_back(4.0 - 2.0 * std::cos(i * pi / (a + 1)) -
                               2.0 * std::cos(j * pi / (b + 1)));
        std::sort(sums.begin(), sums.end());
        for (std::size_t i = 0; i < sums.size(); ++i)
            worst2d = std::max(worst2d, std::abs(eig.values[i] - sums[i]));
    }
    REQUIRE_C(worst < 1e-10);
    REQUIRE_C(worst2d < 1e-10);
    out.detail << "1D dev " << worst << ", 2D Kronecker dev " << worst2d;
    return out;
}

// ---- criterion 2: continuum Neumann convergence ---------------------------

Outcome criterion2() {
    Outcome out;
    auto lowest_nonzero = [&](int m) {
        BoxSpec box{2, {m, m}, 1.0 / m, Bc::Neumann};
        auto h = build_hamiltonian(box, zeros(box));
        auto low = lowest_eigenpairs(h.matrix, 8);
        std::vector<double> vals;
        for (auto& p : low)
            if (p.value > 1e-6) vals.push_back(p.value);
        vals.resize(5);
        return vals;
    };
    std::vector<double> exact{1, 1, 2, 4, 4};
    for (auto& e : exact) e *= pi * pi;

    auto v64 = lowest_nonzero(64);
    auto v32 = lowest_nonzero(32);
    double worst_rel = 0.0, worst_order = 2.0;
    for (int k = 0; k < 5; ++k) {
        double rel = std::abs(v64[k] - exact[k]) / exact[k];
        worst_rel = std::max(worst_rel, rel);
        double order = std::log2(std::abs(v32[k] - exact[k]) / std::abs(v64[k] - exact[k]));
        if (std::abs(order - 2.0) > std::abs(worst_order - 2.0)) worst_order = order;
    }
    REQUIRE_C(worst_rel < 0.02);
    REQUIRE_C(std::abs(worst_order - 2.0) <= 0.2);
    out.detail << "worst rel err " << worst_rel << ", worst order " << worst_order;
    return out;
}

// ---- criterion 3: bracketing ----------------------------------------------

Outcome criterion3() {
    Outcome out;
    int violations = 0, checked = 0;
    for (int t = 0; t < 100; ++t) {
        AlloyModel model;
        int d = t < 50 ? 1 : 2;
        int l = d == 1 ? 8 + (t % 9) : 6 + (t % 7);
        model.box = BoxSpec{d, std::vector<int>(d, l), 1.0, Bc::Dirichlet};
        model.disorder.dist = DistClass::Uniform;
        model.disorder.uniform_a = 0.0;
        model.disorder.uniform_b = 1.0 + 0.05 * (t % 4);
        int axis = t % d;
        int split = 1 + (t % (l - 1));
        auto rep = bracketing_audit(model, model.box, axis, split, 1000 + t, t);
        violations += rep.total_violations();
        checked += rep.energies_checked;
    }
    REQUIRE_C(violations == 0);
    out.detail << "100 instances, " << checked << " energies, " << violations << " violations";
    return out;
}

// ---- criterion 4: self-averaging + b.c. gap --------------------------------

Outcome criterion4() {
    Outcome out;
    auto model = anderson_1d();
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i) grid.push_back(0.5 + 4.0 * i / 40.0);
    auto res = ids_ensemble(model, {1024, 4096}, 200, grid, 271828, g_workers);
    double worst_ratio = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double s1 = std::sqrt(res.per_scale[0].variance[i]);
        double s4 = std::sqrt(res.per_scale[1].variance[i]);
        if (s1 > 0.0) worst_ratio = std::max(worst_ratio, s4 / s1);
    }
    REQUIRE_C(worst_ratio <= 0.6);

    auto gaps = bc_gap(model, {4096}, grid, 200, 271828, g_workers);
    REQUIRE_C(gaps[0] <= 0.01);
    out.detail << "worst std ratio " << worst_ratio << ", D/N gap " << gaps[0];
    return out;
}

// ---- criterion 5: Wegner linearity ----------------------------------------

Outcome criterion5() {
    Outcome out;
    auto model = anderson_1d();
    std::vector<double> eps{0.0025, 0.0035, 0.005, 0.0071, 0.01, 0.0141, 0.02};
    auto rep = wegner_scaling(model, 2.5, eps, {256, 512}, 2000, 314159, g_workers);
    REQUIRE_C(rep.fitted);
    REQUIRE_C(std::abs(rep.a - 1.0) <= 0.15);
    REQUIRE_C(std::abs(rep.b - 1.0) <= 0.1);
    REQUIRE_C(rep.c_ref == 1.0);
    REQUIRE_C(rep.c_w_hat <= 3.0 * rep.c_ref);
    out.detail << "a=" << rep.a << "+-" << rep.a_stderr << ", b=" << rep.b << "+-"
               << rep.b_stderr << ", C_W_hat=" << rep.c_w_hat;
    return out;
}

// ---- criterion 6: SSF suite ------------------------------------------------

Outcome criterion6() {
    Outcome out;
    auto results = parallel_map<int>(1000, g_workers, [&](int t) {
        int n = 2 + static_cast<int>(Philox::uniform01(6, t, 1) * 49);
        int rank = std::min(n, 1 + static_cast<int>(Philox::uniform01(6, t, 2) * 5));
        auto a = random_symmetric(n, 6, t, 11);
        auto b = a + random_low_rank(n, rank, 6, t, 12);
        auto v = ssf_bounds_audit(a, b, {1.0, 2.0, 4.0});
        bool ok = v.rank_bound_ok && v.l1_bound_ok && v.lp_bounds_ok;
        auto eig = dense_symmetric_eigen(b - a, true);
        DMatrix absd(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int k = 0; k < n; ++k)
                    s += eig.vectors(i, k) * std::abs(eig.values[k]) * eig.vectors(j, k);
                absd(i, j) = s;
            }
        auto conv = optssf_audit(a, b, absd, [](double x) { return x * x; });
        ok = ok && conv.domination_holds && conv.ok;
        auto kr = krein_audit(a, b, [](double x) { return x * x; });
        return (ok && kr.discrepancy <= 1e-9) ? 0 : 1;
    });
    int violations = 0;
    for (int r : results) violations += r;
    REQUIRE_C(violations == 0);
    out.detail << "1000 pairs, violations " << violations;
    return out;
}

// ---- criterion 7: spectral averaging ----------------------------------------

Outcome criterion7() {
    Outcome out;
    auto verdicts = parallel_map<int>(200, g_workers, [&](int t) {
        int n = 20;
        auto h = random_symmetric(n, 7, t, 21);
        auto g = random_symmetric(n, 7, t, 22);
        DMatrix w = g * g.transposed();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) w(i, j) /= n;
        auto weig = dense_symmetric_eigen(w, true);
        DMatrix jm(n, n);
        for (int i = 0; i < n; ++i)
            for (int jj = 0; jj < n; ++jj) {
                double s = 0.0;
                for (int k = 0; k < n; ++k)
                    s += weig.vectors(i, k) * (weig.values[k] / (weig.values.back() + 1.0)) *
                         weig.vectors(jj, k);
                jm(i, jj) = s;
            }
        std::vector<double> phi(n);
        for (int i = 0; i < n; ++i) phi[i] = philox_normal(7, t, 7000 + i);
        double nm = norm2(phi);
        for (auto& x : phi) x /= nm;
        QuadratureSpec quad;
        quad.nodes = 256;
        cplx z(2.0 * Philox::uniform01(7, t, 8000) - 1.0, -0.1 - Philox::uniform01(7, t, 8001));
        double tpar = 0.25 + 2.0 * Philox::uniform01(7, t, 8002);
        auto rv = resolvent_average(h, w, jm, z, tpar, quad, phi);

        // projection side: rank-one W = J = v v^T
        int nn = 14;
        auto hp = random_symmetric(nn, 7, t, 23);
        std::vector<double> vv(nn);
        for (int i = 0; i < nn; ++i) vv[i] = philox_normal(7, t, 9000 + i);
        double vn = norm2(vv);
        for (auto& x : vv) x /= vn;
        DMatrix wr(nn, nn);
        for (int i = 0; i < nn; ++i)
            for (int k = 0; k < nn; ++k) wr(i, k) = vv[i] * vv[k];
        std::vector<double> psi(nn);
        for (int i = 0; i < nn; ++i) psi[i] = philox_normal(7, t, 9100 + i);
        double pn = norm2(psi);
        for (auto& x : psi) x /= pn;
        DensityTable rho = DensityTable::uniform(-0.5, 1.5);
        double e1 = -1.5 + 2.0 * Philox::uniform01(7, t, 8003);
        double len = 0.1 + Philox::uniform01(7, t, 8004);
        QuadratureSpec pquad;
        pquad.nodes = 160;
        auto pv = projection_average(hp, wr, wr, e1, e1 + len, rho, pquad, psi);
        return (rv.ok ? 0 : 1) + (pv.ok ? 0 : 2);
    });
    int rbad = 0, pbad = 0;
    for (int v : verdicts) {
        rbad += v & 1;
        pbad += (v >> 1) & 1;
    }
    REQUIRE_C(rbad == 0);
    REQUIRE_C(pbad == 0);
    out.detail << "200 configs each; resolvent violations " << rbad << ", projection violations "
               << pbad;
    return out;
}

// ---- criterion 8: Toeplitz bounds -------------------------------------------

Outcome criterion8() {
    Outcome out;
    using Terms = std::vector<std::pair<std::array<int, 3>, double>>;
    int violations = 0;
    for (int t = 0; t < 3; ++t) {
        double a1 = 2.0 * Philox::uniform01(8, t, 1) - 1.0;
        double a2 = 2.0 * Philox::uniform01(8, t, 2) - 1.0;
        double a0 = std::abs(a1) + std::abs(a2) + 0.1 + Philox::uniform01(8, t, 3);
        Terms alpha{{{0, 0, 0}, a0}, {{1, 0, 0}, a1}, {{-1, 0, 0}, a2}};
        for (int n : {64, 256, 1024, 4096}) {
            BoxSpec box{1, {n}, 1.0, Bc::Dirichlet};
            if (!inverse_rowsum(toeplitz_matrix(alpha, box)).ok) ++violations;
        }
    }
    for (int t = 0; t < 2; ++t) {
        double a1 = Philox::uniform01(8, 100 + t, 1) - 0.5;
        double a2 = Philox::uniform01(8, 100 + t, 2) - 0.5;
        double a0 = std::abs(a1) + std::abs(a2) + 0.1;
        Terms alpha{{{0, 0, 0}, a0}, {{1, 0, 0}, a1}, {{0, 1, 0}, a2}};
        BoxSpec box{2, {32, 32}, 1.0, Bc::Dirichlet};
        if (!inverse_rowsum(toeplitz_matrix(alpha, box)).ok) ++violations;
    }
    REQUIRE_C(violations == 0);

    auto r1 = symbol_analysis(Terms{{{0, 0, 0}, 1.0}, {{1, 0, 0}, -0.5}}, 1);
    REQUIRE_C(r1.winding == 0);
    REQUIRE_C(r1.certified_min > 0.49);
    auto r2 = symbol_analysis(Terms{{{0, 0, 0}, 0.3}, {{1, 0, 0}, 2.0}}, 1);
    REQUIRE_C(r2.winding == 1);
    out.detail << "0 row-sum violations on the 1D ladder (to 4096) and 2D 32x32 blocks";
    return out;
}

// ---- criterion 9: percolation jump ------------------------------------------

Outcome criterion9() {
    Outcome out;
    BoxSpec box{2, {32, 32}, 1.0, Bc::Neumann};
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i) grid.push_back(0.9805 + 0.001 * i);
    std::vector<int> scales{32, 64, 128};
    std::vector<int> trials{800, 300, 100};
    std::vector<double> jump_at_one;
    for (std::size_t s = 0; s < scales.size(); ++s) {
        auto res =
            percolation_ids(box, 0.7, {scales[s]}, trials[s], grid, 161803, 1e-3, g_workers);
        double size = 0.0;
        for (auto& [e, sz] : res.jumps[0].jumps)
            if (std::abs(e - 1.0) <= 1.1e-3) size = sz;
        REQUIRE_C(size > 0.0);
        jump_at_one.push_back(size);
    }
    for (std::size_t s = 0; s + 1 < jump_at_one.size(); ++s) {
        double rel = std::abs(jump_at_one[s + 1] - jump_at_one[s]) / jump_at_one[s];
        REQUIRE_C(rel <= 0.2);
    }

    // p = 1 at the largest scale. The retained set is the full box, so the
    // IDS is the exact Kronecker-sum spectrum; scan every 1e-3 window of it
    // for a cluster reaching the 0.01 threshold (exhaustive over energies),
    // then drive the detection machinery over the densest windows.
    {
        const int l = 128;
        std::vector<double> single;
        for (int k = 0; k < l; ++k) single.push_back(2.0 - 2.0 * std::cos(k * pi / l));
        std::vector<double> sums;
        sums.reserve(l * l);
        for (double a : single)
            for (double b : single) sums.push_back(a + b);
        std::sort(sums.begin(), sums.end());
        std::size_t worst_cluster = 0;
        double worst_center = 0.0;
        for (std::size_t i = 0; i < sums.size(); ++i) {
            auto hi = std::upper_bound(sums.begin() + i, sums.end(), sums[i] + 1e-3);
            std::size_t count = hi - (sums.begin() + i);
            if (count > worst_cluster) {
                worst_cluster = count;
                worst_center = sums[i];
            }
        }
        REQUIRE_C(static_cast<double>(worst_cluster) / (l * l) < 0.01);
        out.detail << "p=1 densest 1e-3 window at E=" << worst_center << " holds "
                   << worst_cluster << "/" << l * l << " eigenvalues; ";

        std::vector<double> wide;
        for (int i = 0; i <= 40; ++i) wide.push_back(worst_center - 0.0195 + 0.001 * i);
        auto res1 = percolation_ids(box, 1.0, {l}, 1, wide, 1, 0.01, g_workers);
        REQUIRE_C(res1.jumps[0].jumps.empty());
        auto res2 = percolation_ids(box, 1.0, {l}, 1, grid, 1, 0.01, g_workers);
        REQUIRE_C(res2.jumps[0].jumps.empty());
    }
    out.detail << "jumps at E=1: " << jump_at_one[0] << ", " << jump_at_one[1] << ", "
               << jump_at_one[2];
    return out;
}

// ---- criterion 10: Spencer resonance ----------------------------------------

Outcome criterion10() {
    Outcome out;
    const double depth = 0.35;
    const int width = 5;
    auto sym20 = spencer_double_well(depth, width, 20, WellMode::Symmetric);
    auto sym40 = spencer_double_well(depth, width, 40, WellMode::Symmetric);
    REQUIRE_C(sym40.amp_product_ground >= 0.5 * sym20.amp_product_ground);

    const double detune = 0.05;
    auto det20 = spencer_double_well(depth, width, 20, WellMode::Detuned, detune);
    auto det40 = spencer_double_well(depth, width, 40, WellMode::Detuned, detune);
    REQUIRE_C(det20.sigma_distance >= std::exp(-std::sqrt(20.0)));
    REQUIRE_C(det40.sigma_distance >= std::exp(-std::sqrt(40.0)));
    REQUIRE_C(det40.amp_product_ground <= 0.1 * det20.amp_product_ground);
    out.detail << "symmetric ratio " << sym40.amp_product_ground / sym20.amp_product_ground
               << ", detuned ratio " << det40.amp_product_ground / det20.amp_product_ground;
    return out;
}

// ---- criterion 11: Hellmann-Feynman -----------------------------------------

Outcome criterion11() {
    Outcome out;
    auto model = anderson_1d();
    model.box.sides = {48};
    int audited = 0;
    double worst_rel = 0.0;
    for (int t = 0; t < 600 && audited < 100; ++t) {
        int site = 5 + (t % 38);
        int level = 8 + (t % 32);
        auto audit = hellmann_feynman_audit(model, 115, t, site, level, 1e-5);
        if (audit.degenerate_cluster) continue;
        // a relative comparison needs the matrix element resolvable above
        // the finite-difference roundoff floor (~1e-10 at step 1e-5);
        // localized states with negligible weight at the probed site are
        // skipped, like degenerate ones
        if (std::abs(audit.form) < 1e-3) continue;
        ++audited;
        double rel = audit.abs_err / std::abs(audit.form);
        worst_rel = std::max(worst_rel, rel);
    }
    REQUIRE_C(audited >= 100);
    REQUIRE_C(worst_rel <= 1e-6);
    out.detail << audited << " nondegenerate samples, worst rel err " << worst_rel;
    return out;
}

// ---- criterion 12: determinism ----------------------------------------------

Outcome criterion12() {
    Outcome out;
    namespace fs = std::filesystem;
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    json ids_doc{{"experiment", "ids"},
                 {"seed", 9},
                 {"trials", 16},
                 {"scales", json::array({16, 32})},
                 {"grid", json{{"min", 0.0}, {"max", 5.0}, {"points", 21}}},
                 {"model",
                  json{{"box", json{{"dim", 1}, {"sides", json::array({16})}, {"spacing", 1.0},
                                    {"bc", "dirichlet"}}},
                       {"disorder", json{{"type", "uniform"}, {"a", 0.0}, {"b", 1.0}}}}}};
    json perc_doc{{"experiment", "percolation"},
                  {"seed", 10},
                  {"trials", 12},
                  {"scales", json::array({16})},
                  {"grid", json{{"min", 0.9}, {"max", 1.1}, {"points", 41}, {"offset", 5e-4}}},
                  {"model",
                   json{{"box", json{{"dim", 2}, {"sides", json::array({16, 16})},
                                     {"spacing", 1.0}, {"bc", "neumann"}}}}},
                  {"percolation", json{{"p", 0.7}, {"jump_threshold", 1e-3}}}};
    for (const json& doc : {ids_doc, perc_doc}) {
        auto cfg = ExperimentConfig::parse(doc);
        std::vector<RunManifest> manifests;
        std::vector<fs::path> dirs;
        for (int workers : {1, 2, 8}) {
            auto dir = fs::temp_directory_path() /
                       ("idslab_accept_" + cfg.fingerprint + "_w" + std::to_string(workers));
            fs::remove_all(dir);
            manifests.push_back(run_experiment(cfg, dir, workers).manifest);
            dirs.push_back(dir);
        }
        REQUIRE_C(manifests[0].checksums == manifests[1].checksums);
        REQUIRE_C(manifests[0].checksums == manifests[2].checksums);
        bool bytes_equal = true;
        for (auto& [name, sum] : manifests[0].checksums) {
            auto ref = slurp(dirs[0] / name);
            if (slurp(dirs[1] / name) != ref || slurp(dirs[2] / name) != ref) bytes_equal = false;
        }
        REQUIRE_C(bytes_equal);
        for (auto& d : dirs) fs::remove_all(d);
    }
    out.detail << "ids and percolation artifacts byte-identical for 1, 2, 8 workers";
    return out;
}

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<Outcome()> body;
};

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_workers = std::max(1, std::atoi(argv[1]));
    std::vector<Criterion> criteria{
        {1, "exact spectra vs closed forms", 5, criterion1},
        {2, "continuum Neumann convergence", 120, criterion2},
        {3, "Dirichlet/Neumann bracketing", 60, criterion3},
        {4, "self-averaging and b.c. gap", 600, criterion4},
        {5, "Wegner linearity", 900, criterion5},
        {6, "SSF bound suite", 120, criterion6},
        {7, "spectral averaging bounds", 300, criterion7},
        {8, "Toeplitz inverse bounds", 120, criterion8},
        {9, "percolation IDS jump", 600, criterion9},
        {10, "Spencer double-well resonance", 60, criterion10},
        {11, "Hellmann-Feynman identity", 60, criterion11},
        {12, "worker-count determinism", 600, criterion12},
    };
    int failures = 0;
    for (auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.body();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail << " [exception: " << e.what() << "]";
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool in_budget = secs < c.budget_seconds;
        bool pass = outcome.pass && in_budget;
        std::printf("[%s] criterion %2d: %-32s %s (%.1f s / budget %.0f s)\n",
                    pass ? "PASS" : "FAIL", c.id, c.name, outcome.detail.str().c_str(), secs,
                    c.budget_seconds);
        std::fflush(stdout);
        if (!pass) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures;
}
