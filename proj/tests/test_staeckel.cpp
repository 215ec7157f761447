#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "slab/fixtures.hpp"
#include "slab/staeckel.hpp"

using namespace slab;

namespace {

WorkingBox box123() {
    WorkingBox b;
    b.range = {{{0.5, 1.5}, {1.5, 2.5}, {2.5, 3.5}}};
    return b;
}

StaeckelData vdm123() {
    const Poly1 t({0.0, 1.0});
    return vandermonde(t, t, t, box123());
}

}  // namespace

TEST_CASE("separable metric values at a reference point") {
    const StaeckelData data = vdm123();
    const Vec3 p{1.0, 2.0, 3.0};
    const DiagonalField g = metric(data, p);
    // determinant (y-x)(z-x)(z-y) = 2 against first-column cofactors 6, -6, 2
    CHECK(g.coeff[0].v == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(g.coeff[1].v == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(g.coeff[2].v == doctest::Approx(1.0).epsilon(1e-14));

    // constant-coefficient data freezes the same matrix values everywhere
    const StaeckelData cdata = constant_data();
    for (const Vec3& q : {Vec3{0.0, 0.0, 0.0}, Vec3{0.5, -0.3, 0.9}}) {
        const DiagonalField cg = metric(cdata, q);
        CHECK(cg.coeff[0].v == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
        CHECK(cg.coeff[1].v == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
        CHECK(cg.coeff[2].v == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("wrong-signature data is rejected") {
    // plain Vandermonde rows without the sign fix have an indefinite metric
    StaeckelData data;
    const Poly1 t({0.0, 1.0});
    for (int i = 0; i < 3; ++i) {
        data.rows[i][0] = Poly1::constant(1.0);
        data.rows[i][1] = t;
        data.rows[i][2] = t * t;
    }
    data.box = box123();
    CHECK_THROWS_AS(metric(data, {1.0, 2.0, 3.0}), std::domain_error);
    CHECK_FALSE(certify(data, 4).ok);
}

TEST_CASE("integral coefficients at a reference point") {
    const StaeckelData data = vdm123();
    const IntegralPair I = integrals(data, {1.0, 2.0, 3.0});
    // dx^2 coefficient of the first integral: Delta * (GQ - FR) / (LR - MQ)^2
    CHECK(I.I2.coeff[0].v == doctest::Approx(-5.0 / 18.0).epsilon(1e-13));
}

TEST_CASE("cofactor-ratio route agrees with the direct coefficients") {
    const StaeckelData data = random_quadratic(20240817ull);
    Rng rng(99);
    for (int n = 0; n < 100; ++n) {
        Vec3 p;
        for (int i = 0; i < 3; ++i)
            p[i] = rng.uniform(data.box.lo(i), data.box.hi(i));
        const DiagonalField g = metric(data, p);
        const IntegralPair I = integrals(data, p);
        const StaeckelEval ev = evaluate_staeckel(data, p);
        for (int i = 0; i < 3; ++i) {
            const double rho2 = ev.phi2[i].v / ev.phi1[i].v;
            const double rho3 = ev.phi3[i].v / ev.phi1[i].v;
            CHECK(I.I2.coeff[i].v ==
                  doctest::Approx(rho2 * g.coeff[i].v).epsilon(1e-12));
            CHECK(I.I3.coeff[i].v ==
                  doctest::Approx(rho3 * g.coeff[i].v).epsilon(1e-12));
        }
    }
}

TEST_CASE("reduced parameterization") {
    {
        StaeckelData data;
        data.rows[0] = {Poly1({2.0}), Poly1({1.0}), Poly1({1.0})};
        data.rows[1] = {Poly1({3.0}), Poly1({1.0}), Poly1({1.0})};
        data.rows[2] = {Poly1({4.0}), Poly1({1.0}), Poly1({1.0})};
        data.box.range = {{{-1, 1}, {-1, 1}, {-1, 1}}};
        const ReducedForm rf = reduced_form(data, {0.0, 0.0, 0.0});
        CHECK(rf.a == doctest::Approx(2.0));
        CHECK(rf.b == doctest::Approx(3.0));
        CHECK(rf.c == doctest::Approx(4.0));
        CHECK(rf.k == doctest::Approx(1.0));
        CHECK(rf.l == doctest::Approx(1.0));
        CHECK(rf.m == doctest::Approx(1.0));
        CHECK(rf.delta == doctest::Approx(0.0));
        CHECK(rf.degenerate);
    }
    // determinant identity Delta = P*Q*R*delta on certified data
    const StaeckelData data = random_quadratic(7ull);
    Rng rng(13);
    for (int n = 0; n < 50; ++n) {
        Vec3 p;
        for (int i = 0; i < 3; ++i)
            p[i] = rng.uniform(data.box.lo(i), data.box.hi(i));
        const ReducedForm rf = reduced_form(data, p);
        const Mat3 m = data.values(p);
        const double delta = det3(m);
        const double pqr = m(0, 2) * m(1, 2) * m(2, 2);
        CHECK(std::abs(delta - pqr * rf.delta) <= 1e-12 * std::max(1.0, std::abs(delta)));
    }
}

TEST_CASE("column scaling leaves the metric unchanged") {
    Rng rng(31);
    const StaeckelData data = random_quadratic(5ull);
    for (double s : {2.0, -0.5, 3.7}) {
        for (int col : {1, 2}) {
            StaeckelData scaled = data;
            for (int i = 0; i < 3; ++i) scaled.rows[i][col] = s * scaled.rows[i][col];
            for (int n = 0; n < 20; ++n) {
                Vec3 p;
                for (int i = 0; i < 3; ++i)
                    p[i] = rng.uniform(data.box.lo(i), data.box.hi(i));
                const DiagonalField g0 = metric(data, p), g1 = metric(scaled, p);
                for (int i = 0; i < 3; ++i)
                    CHECK(g1.coeff[i].v ==
                          doctest::Approx(g0.coeff[i].v).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("vandermonde constructor") {
    const Poly1 t({0.0, 1.0});
    {
        const StaeckelData d = vdm123();
        CHECK(d.rows[0][0] == Poly1({1.0}));
        CHECK(d.rows[0][1] == t);
        CHECK(d.rows[0][2] == Poly1({0.0, 0.0, 1.0}));
        // middle row carries the signature-fixing sign
        CHECK(d.rows[1][0] == Poly1({-1.0}));
    }
    {
        const Poly1 t1({1.0, 1.0});
        const StaeckelData d = vandermonde(t1, t, t, box123());
        CHECK(d.rows[0][1] == t1);
        CHECK(d.rows[0][2] == Poly1({1.0, 2.0, 1.0}));
    }
    // linear reparameterization psi -> s*psi rescales columns only: g invariant
    {
        const StaeckelData d0 = vdm123();
        const Poly1 st({0.0, 2.5});
        const StaeckelData d1 = vandermonde(st, st, st, box123());
        Rng rng(55);
        for (int n = 0; n < 20; ++n) {
            Vec3 p;
            for (int i = 0; i < 3; ++i)
                p[i] = rng.uniform(d0.box.lo(i), d0.box.hi(i));
            const DiagonalField g0 = metric(d0, p), g1 = metric(d1, p);
            for (int i = 0; i < 3; ++i)
                CHECK(g1.coeff[i].v == doctest::Approx(g0.coeff[i].v).epsilon(1e-12));
        }
    }
}

TEST_CASE("certification") {
    CHECK(certify(vandermonde_linear(), 8).ok);

    // overlapping x and y ranges put a coincidence point on the grid
    WorkingBox overlap;
    overlap.range = {{{1.5, 2.0}, {1.5, 2.0}, {2.5, 3.0}}};
    const Poly1 t({0.0, 1.0});
    const Certificate bad = certify(vandermonde(t, t, t, overlap), 4);
    CHECK_FALSE(bad.ok);

    // identical constant rows: determinant vanishes identically
    const Certificate degen =
        certify(vandermonde(Poly1({2.0}), Poly1({2.0}), Poly1({2.0}), box123()), 4);
    CHECK_FALSE(degen.ok);

    CHECK_THROWS_AS(certify(vandermonde_linear(), 1), std::invalid_argument);
}
