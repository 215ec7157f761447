#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "slab/fixtures.hpp"
#include "slab/linalg.hpp"
#include "slab/poly.hpp"

using namespace slab;

namespace {

// brute-force determinant by permutation expansion
double det3_perm(const Mat3& m) {
    const int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1},
                             {0, 2, 1}, {1, 0, 2}, {2, 1, 0}};
    double acc = 0.0;
    for (int k = 0; k < 6; ++k) {
        const double term = m(0, perms[k][0]) * m(1, perms[k][1]) * m(2, perms[k][2]);
        acc += (k < 3 ? term : -term);
    }
    return acc;
}

Mat3 from_rows(const std::array<std::array<double, 3>, 3>& rows) {
    Mat3 m;
    m.m = rows;
    return m;
}

}  // namespace

TEST_CASE("polynomial evaluation and derivative") {
    const Poly1 p({3.0, -1.0, 2.0});
    CHECK(p(1.5) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(p(0.0) == 3.0);

    CHECK(Poly1::constant(7.0).derivative() == Poly1());
    CHECK(Poly1({0.0, 0.0, 1.0}).derivative() == Poly1({0.0, 2.0}));
    CHECK(Poly1({1.0, 2.0, 3.0, 4.0}).derivative() == Poly1({2.0, 6.0, 12.0}));

    // term-by-term differentiation against finite differences
    const Poly1 q({0.3, -1.2, 0.5, 2.0});
    const Poly1 dq = q.derivative();
    const double h = 1e-6;
    for (double t : {-1.0, 0.2, 1.7})
        CHECK(dq(t) == doctest::Approx((q(t + h) - q(t - h)) / (2 * h)).epsilon(1e-8));
}

TEST_CASE("polynomial arithmetic") {
    const Poly1 a({1.0, 1.0}), b({-1.0, 1.0});
    CHECK(a * b == Poly1({-1.0, 0.0, 1.0}));
    CHECK(a + b == Poly1({0.0, 2.0}));
    CHECK(a - a == Poly1());
    CHECK(2.0 * a == Poly1({2.0, 2.0}));
    CHECK(Poly1({1.0, 0.0, 0.0}).degree() == 0);  // trailing zeros trimmed
}

TEST_CASE("determinant and cofactors") {
    const Mat3 id = from_rows({{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}});
    CHECK(det3(id) == 1.0);
    CHECK(cofactor3(id, 1, 1) == 1.0);

    // single surviving term of the six-term expansion
    CHECK(det3(from_rows({{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}})) == 1.0);

    CHECK(det3(from_rows({{{1, 1, 1}, {1, 2, 4}, {1, 3, 9}}})) == doctest::Approx(2.0));

    // cofactor signs: expansion along the first row reproduces the determinant
    const Mat3 m = from_rows({{{2, -1, 3}, {0, 4, 1}, {-2, 5, 2}}});
    double along_row = 0.0;
    for (int j = 1; j <= 3; ++j) along_row += m(0, j - 1) * cofactor3(m, 1, j);
    CHECK(along_row == doctest::Approx(det3(m)).epsilon(1e-14));
}

TEST_CASE("determinant matches permutation expansion on random matrices") {
    Rng rng(12345);
    for (int n = 0; n < 1000; ++n) {
        Mat3 m;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m(i, j) = rng.uniform(-2.0, 2.0);
        const double d = det3(m), o = det3_perm(m);
        CHECK(std::abs(d - o) <= 1e-12 * std::max(1.0, std::abs(o)));
    }
}

TEST_CASE("generalized eigenproblem examples") {
    const SymForm3 id = SymForm3::identity();
    {
        const auto ep = generalized_eigen(SymForm3::diag(2, 3, 4), id);
        CHECK(ep.values[0] == doctest::Approx(2.0));
        CHECK(ep.values[1] == doctest::Approx(3.0));
        CHECK(ep.values[2] == doctest::Approx(4.0));
        for (int i = 0; i < 3; ++i) {
            // eigenvectors line up with the coordinate axes
            double best = 0.0;
            for (int j = 0; j < 3; ++j) best = std::max(best, std::abs(ep.vectors[i][j]));
            CHECK(best == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    {
        const auto ep = generalized_eigen(id, id);
        for (double v : ep.values) CHECK(v == doctest::Approx(1.0));
    }
    {
        SymForm3 I = SymForm3::diag(2, 2, 5);
        I.set(0, 1, 1.0);
        const auto ep = generalized_eigen(I, id);
        CHECK(ep.values[0] == doctest::Approx(1.0));
        CHECK(ep.values[1] == doctest::Approx(3.0));
        CHECK(ep.values[2] == doctest::Approx(5.0));
    }
    CHECK_THROWS_AS(generalized_eigen(id, SymForm3::diag(1, -1, 1)), std::domain_error);
}

TEST_CASE("generalized eigenproblem residuals and g-orthogonality") {
    Rng rng(777);
    for (int n = 0; n < 50; ++n) {
        // random positive definite g = L L^T + eps, random symmetric I
        Mat3 L;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j <= i; ++j) L(i, j) = rng.uniform(-1.0, 1.0);
        SymForm3 g;
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += L(i, k) * L(j, k);
                g.set(i, j, s + (i == j ? 0.5 : 0.0));
            }
        SymForm3 I;
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) I.set(i, j, rng.uniform(-2.0, 2.0));

        double normI = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) normI += I(i, j) * I(i, j);
        normI = std::sqrt(normI);

        const auto ep = generalized_eigen(I, g);
        for (int e = 0; e < 3; ++e) {
            for (int i = 0; i < 3; ++i) {
                double r = 0.0;
                for (int j = 0; j < 3; ++j)
                    r += (I(i, j) - ep.values[e] * g(i, j)) * ep.vectors[e][j];
                CHECK(std::abs(r) <= 1e-10 * std::max(1.0, normI));
            }
            for (int f = e + 1; f < 3; ++f) {
                double dot = 0.0;
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j)
                        dot += ep.vectors[e][i] * g(i, j) * ep.vectors[f][j];
                CHECK(std::abs(dot) <= 1e-10);
            }
        }
    }
}

TEST_CASE("simultaneous diagonalization test") {
    const SymForm3 id = SymForm3::identity();
    CHECK(simultaneous_diag_test({SymForm3::diag(1, 2, 3), SymForm3::diag(4, 5, 6)}, id));
    CHECK(simultaneous_diag_test({SymForm3::diag(1, 2, 3)}, id));

    SymForm3 Q2, Q3;
    Q2.set(0, 1, 1.0);
    Q3.set(0, 2, 1.0);
    CHECK_FALSE(simultaneous_diag_test({Q2, Q3}, id));
}

TEST_CASE("numerical nullspace dimension") {
    CHECK(nullspace_dim({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}).dim == 3);
    CHECK(nullspace_dim({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}).dim == 0);
    CHECK(nullspace_dim({{1, 2}, {2, 4}}).dim == 1);
    CHECK_THROWS_AS(nullspace_dim({}), std::invalid_argument);

    // row permutation and orthogonal column mixing leave the dimension fixed
    Rng rng(4242);
    for (int n = 0; n < 20; ++n) {
        std::vector<std::vector<double>> A(5, std::vector<double>(3));
        for (auto& row : A) {
            const double u = rng.uniform(-1.0, 1.0), v = rng.uniform(-1.0, 1.0);
            row = {u, v, u + v};  // rank 2 by construction
        }
        CHECK(nullspace_dim(A).dim == 1);

        std::vector<std::vector<double>> P = A;
        std::swap(P[0], P[4]);
        std::swap(P[1], P[3]);
        CHECK(nullspace_dim(P).dim == 1);

        // rotation in the (0,1) column plane
        const double th = rng.uniform(0.0, 6.28), c = std::cos(th), s = std::sin(th);
        std::vector<std::vector<double>> M = A;
        for (std::size_t i = 0; i < A.size(); ++i) {
            M[i][0] = c * A[i][0] - s * A[i][1];
            M[i][1] = s * A[i][0] + c * A[i][1];
        }
        CHECK(nullspace_dim(M).dim == 1);
    }
}
