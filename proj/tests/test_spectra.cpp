#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "idslab/lattice.hpp"
#include "idslab/spectra.hpp"

#ifdef IDSLAB_HAVE_EIGEN
#include <Eigen/Dense>
#endif

using namespace idslab;

namespace {

SymBandMatrix free_chain(int n, Bc bc) {
    BoxSpec box{1, {n}, 1.0, bc};
    PotentialField v;
    v.values.assign(n, 0.0);
    return build_hamiltonian(box, v).matrix;
}

SymBandMatrix random_banded(int n, int bw, unsigned seed, double diag_shift = 0.0) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SymBandMatrix m(n, bw);
    for (int b = 0; b <= bw; ++b)
        for (int i = 0; i + b < n; ++i) m.band(b, i) = u(gen) + (b == 0 ? diag_shift : 0.0);
    return m;
}

}  // namespace

TEST_CASE("QL matches 1D Dirichlet closed form") {
    for (int n : {1, 2, 3, 10, 100, 512}) {
        auto h = free_chain(n, Bc::Dirichlet);
        auto eig = eigenvalues(h);
        REQUIRE(eig.values.size() == static_cast<std::size_t>(n));
        for (int k = 1; k <= n; ++k) {
            double exact = 2.0 - 2.0 * std::cos(k * std::numbers::pi / (n + 1));
            CHECK(std::abs(eig.values[k - 1] - exact) < 1e-10);
        }
    }
}

TEST_CASE("QL matches 1D Neumann closed form") {
    for (int n : {2, 7, 64, 512}) {
        auto h = free_chain(n, Bc::Neumann);
        auto eig = eigenvalues(h);
        for (int k = 0; k < n; ++k) {
            double exact = 2.0 - 2.0 * std::cos(k * std::numbers::pi / n);
            CHECK(std::abs(eig.values[k] - exact) < 1e-10);
        }
    }
}

TEST_CASE("diag(3,1,2) sorts to (1,2,3)") {
    SymBandMatrix m(3, 0);
    m.band(0, 0) = 3.0;
    m.band(0, 1) = 1.0;
    m.band(0, 2) = 2.0;
    auto eig = eigenvalues(m);
    CHECK(eig.values[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(eig.values[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(eig.values[2] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("dense eigensolver: residuals and orthonormality on a random matrix") {
    auto m = random_banded(40, 39, 7);
    auto eig = eigenvalues(m, true);
    double hnorm = m.inf_norm();
    for (int j = 0; j < 40; ++j) {
        std::vector<double> v(40);
        for (int i = 0; i < 40; ++i) v[i] = eig.vectors(i, j);
        auto hv = m.apply(v);
        double res = 0.0;
        for (int i = 0; i < 40; ++i) res += std::pow(hv[i] - eig.values[j] * v[i], 2);
        CHECK(std::sqrt(res) < 1e-12 * std::max(1.0, hnorm));
    }
    for (int a = 0; a < 40; ++a)
        for (int b = a; b < 40; ++b) {
            double s = 0.0;
            for (int i = 0; i < 40; ++i) s += eig.vectors(i, a) * eig.vectors(i, b);
            CHECK(std::abs(s - (a == b ? 1.0 : 0.0)) < 1e-10);
        }
}

#ifdef IDSLAB_HAVE_EIGEN
TEST_CASE("dense eigensolver agrees with Eigen") {
    auto m = random_banded(60, 59, 21);
    auto eig = eigenvalues(m);
    auto d = m.to_dense();
    Eigen::MatrixXd em(60, 60);
    for (int i = 0; i < 60; ++i)
        for (int j = 0; j < 60; ++j) em(i, j) = d(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(em, Eigen::EigenvaluesOnly);
    for (int i = 0; i < 60; ++i)
        CHECK(std::abs(eig.values[i] - es.eigenvalues()[i]) < 1e-11 * m.inf_norm());
}
#endif

TEST_CASE("count_below: strict count on the free Dirichlet chain") {
    auto h = free_chain(3, Bc::Dirichlet);
    CHECK(count_below(h, 2.0) == 1);      // spectrum {0.586, 2, 3.414}, ties excluded
    CHECK(count_below(h, -100.0) == 0);   // below the recorded lower bound
    CHECK(count_below(h, 100.0) == 3);
}

TEST_CASE("count_below matches full eigendecomposition on random banded matrices") {
    std::mt19937 gen(3);
    std::uniform_real_distribution<double> u(-3.0, 6.0);
    for (int rep = 0; rep < 4; ++rep) {
        int bw = rep == 0 ? 1 : 2 + rep;
        auto m = random_banded(200, bw, 100 + rep);
        auto eig = eigenvalues(m);
        for (int t = 0; t < 50; ++t) {
            double e = u(gen);
            int expected = static_cast<int>(
                std::lower_bound(eig.values.begin(), eig.values.end(), e) - eig.values.begin());
            CHECK(count_below(m, e) == expected);
        }
    }
}

TEST_CASE("count_below is monotone in E") {
    auto m = random_banded(80, 3, 5);
    int prev = 0;
    for (double e = -4.0; e <= 8.0; e += 0.05) {
        int c = count_below(m, e);
        CHECK(c >= prev);
        prev = c;
    }
}

TEST_CASE("eigenpair_near: diag(0,5) targeting 4") {
    SymBandMatrix m(2, 0);
    m.band(0, 1) = 5.0;
    auto block = eigenpair_near(m, 4.0);
    REQUIRE(block.size() == 1);
    CHECK(block[0].value == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(std::abs(std::abs(block[0].vector[1]) - 1.0) < 1e-10);
}

TEST_CASE("eigenpair_at_index: ground state of the free chain is a sine") {
    int n = 50;
    auto h = free_chain(n, Bc::Dirichlet);
    auto pair = eigenpair_at_index(h, 0);
    double exact = 2.0 - 2.0 * std::cos(std::numbers::pi / (n + 1));
    CHECK(std::abs(pair.value - exact) < 1e-10);
    double overlap = 0.0, nrm = 0.0;
    for (int i = 0; i < n; ++i) {
        double s = std::sin((i + 1) * std::numbers::pi / (n + 1));
        overlap += s * pair.vector[i];
        nrm += s * s;
    }
    CHECK(std::abs(overlap) / std::sqrt(nrm) > 1.0 - 1e-10);
}

TEST_CASE("eigenpair_near returns a degenerate cluster as a block") {
    SymBandMatrix m(4, 0);
    m.band(0, 0) = 1.0;
    m.band(0, 1) = 2.0;
    m.band(0, 2) = 2.0;
    m.band(0, 3) = 7.0;
    auto block = eigenpair_near(m, 2.1);
    CHECK(block.size() == 2);
    for (auto& p : block) CHECK(p.value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("lowest_eigenpairs on a banded 2D Hamiltonian") {
    BoxSpec box{2, {12, 12}, 1.0, Bc::Dirichlet};
    PotentialField v;
    v.values.assign(box.site_count(), 0.0);
    auto h = build_hamiltonian(box, v).matrix;
    auto low = lowest_eigenpairs(h, 4);
    auto full = eigenvalues(h);
    for (int j = 0; j < 4; ++j) CHECK(std::abs(low[j].value - full.values[j]) < 1e-9);
}

TEST_CASE("shifted_solve: 1x1 resolvent and the 1/eta bound") {
    SymBandMatrix m(1, 0);
    m.band(0, 0) = 1.0;
    auto x = shifted_solve(m, cplx(0.0, 1.0), {cplx(1.0, 0.0)});
    CHECK(std::abs(x[0] - cplx(0.5, 0.5)) < 1e-12);  // 1/(1 - i) = (1+i)/2

    auto h = random_banded(30, 2, 9);
    double eta = 0.37;
    for (int col = 0; col < 5; ++col) {
        std::vector<cplx> b(30);
        b[col * 5] = 1.0;
        auto sol = shifted_solve(h, cplx(1.0, -eta), b);
        double nrm = 0.0;
        for (auto& z : sol) nrm += std::norm(z);
        CHECK(std::sqrt(nrm) <= 1.0 / eta + 1e-9);
    }
}

TEST_CASE("singular values: diag, rank one, Frobenius identity") {
    DMatrix d(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = -4.0;
    auto sv = singular_values(d);
    CHECK(sv[0] == doctest::Approx(4.0));
    CHECK(sv[1] == doctest::Approx(3.0));

    DMatrix r(5, 3);
    std::vector<double> uvec{1, -2, 0.5, 1, 3}, vvec{2, 1, -1};
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = uvec[i] * vvec[j];
    auto sv2 = singular_values(r);
    double nu = 0, nv = 0;
    for (double x : uvec) nu += x * x;
    for (double x : vvec) nv += x * x;
    CHECK(sv2[0] == doctest::Approx(std::sqrt(nu * nv)).epsilon(1e-12));
    CHECK(sv2[1] < 1e-10);

    std::mt19937 gen(44);
    std::uniform_real_distribution<double> u(-1, 1);
    DMatrix a(30, 30);
    double frob2 = 0.0;
    for (int i = 0; i < 30; ++i)
        for (int j = 0; j < 30; ++j) {
            a(i, j) = u(gen);
            frob2 += a(i, j) * a(i, j);
        }
    auto sv3 = singular_values(a);
    double sum2 = 0.0;
    for (double s : sv3) sum2 += s * s;
    CHECK(std::abs(sum2 - frob2) < 1e-9 * frob2);
}

TEST_CASE("Weyl perturbation bound for diagonal perturbations") {
    auto h = random_banded(60, 2, 31);
    std::mt19937 gen(32);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    auto hp = h;
    double pnorm = 0.0;
    for (int i = 0; i < 60; ++i) {
        double d = u(gen);
        hp.band(0, i) += d;
        pnorm = std::max(pnorm, std::abs(d));
    }
    auto e1 = eigenvalues(h), e2 = eigenvalues(hp);
    for (int i = 0; i < 60; ++i) CHECK(std::abs(e1.values[i] - e2.values[i]) <= pnorm + 1e-12);
}
