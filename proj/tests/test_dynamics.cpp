#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "slab/dynamics.hpp"
#include "slab/fixtures.hpp"
#include "slab/staeckel.hpp"

using namespace slab;

namespace {

// product of two observables with exact product-rule gradient
class ProductObservable : public Observable {
public:
    ProductObservable(const Observable& f, const Observable& g) : f_(f), g_(g) {}
    double value(const PhasePoint& p) const override { return f_.value(p) * g_.value(p); }
    std::array<double, 6> gradient(const PhasePoint& p) const override {
        const double fv = f_.value(p), gv = g_.value(p);
        const auto fg = f_.gradient(p), gg = g_.gradient(p);
        std::array<double, 6> out;
        for (int i = 0; i < 6; ++i) out[i] = fg[i] * gv + fv * gg[i];
        return out;
    }

private:
    const Observable& f_;
    const Observable& g_;
};

double grad_norm(const std::array<double, 6>& g) {
    double acc = 0.0;
    for (double x : g) acc += x * x;
    return std::sqrt(acc);
}

}  // namespace

TEST_CASE("canonical bracket of coordinate and kinetic energy") {
    const StaeckelData flat = flat_data();
    const QuadraticObservable H(flat, QuadraticObservable::Kind::hamiltonian);
    const CoordinateObservable X(0);
    PhasePoint p{{0.1, -0.2, 0.3}, {2.0, -1.0, 0.5}};
    CHECK(poisson_bracket(H, X, p) == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(poisson_bracket(X, H, p) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(poisson_bracket(H, H, p) == doctest::Approx(0.0));
}

TEST_CASE("bracket is antisymmetric and Leibniz") {
    const StaeckelData data = random_quadratic(11ull);
    const QuadraticObservable H(data, QuadraticObservable::Kind::hamiltonian);
    const QuadraticObservable I2(data, QuadraticObservable::Kind::integral2);
    const QuadraticObservable I3(data, QuadraticObservable::Kind::integral3);
    const ProductObservable FG(I2, I3);
    Rng rng(21);
    for (int n = 0; n < 50; ++n) {
        const PhasePoint p = random_phase_point(data, rng);
        CHECK(poisson_bracket(I2, H, p) ==
              doctest::Approx(-poisson_bracket(H, I2, p)).epsilon(1e-14));
        const double lhs = poisson_bracket(FG, H, p);
        const double rhs = I2.value(p) * poisson_bracket(I3, H, p) +
                           poisson_bracket(I2, H, p) * I3.value(p);
        const double scale = std::max(
            1.0, grad_norm(FG.gradient(p)) * grad_norm(H.gradient(p)));
        CHECK(std::abs(lhs - rhs) <= 1e-9 * scale);
    }
}

TEST_CASE("exact gradients match finite differences") {
    const StaeckelData data = random_quadratic(3ull);
    const QuadraticObservable H(data, QuadraticObservable::Kind::hamiltonian);
    const QuadraticObservable I2(data, QuadraticObservable::Kind::integral2);
    Rng rng(37);
    const double h = 1e-5;
    for (int n = 0; n < 100; ++n) {
        const PhasePoint p = random_phase_point(data, rng, 0.2);
        for (const Observable* obs : {(const Observable*)&H, (const Observable*)&I2}) {
            const auto g = obs->gradient(p);
            const double scale = std::max(1.0, grad_norm(g));
            for (int i = 0; i < 6; ++i) {
                auto yp = p.flat(), ym = p.flat();
                yp[i] += h;
                ym[i] -= h;
                const double fd = (obs->value(PhasePoint::from_flat(yp)) -
                                   obs->value(PhasePoint::from_flat(ym))) /
                                  (2 * h);
                CHECK(std::abs(g[i] - fd) <= 1e-7 * scale);
            }
        }
    }
}

TEST_CASE("flat geodesics are straight lines") {
    const StaeckelData flat = flat_data();
    PhasePoint start{{0.0, 0.0, 0.0}, {0.1, 0.05, -0.08}};
    const Trajectory traj = hamiltonian_flow(flat, start, 5.0, 1e-10);
    CHECK_FALSE(traj.boundary_event);
    const auto& last = traj.samples.back();
    CHECK(last.t == doctest::Approx(5.0));
    for (int i = 0; i < 3; ++i) {
        CHECK(last.state.pos[i] ==
              doctest::Approx(start.mom[i] * 5.0).epsilon(1e-10));
        CHECK(last.state.mom[i] == doctest::Approx(start.mom[i]).epsilon(1e-12));
    }
}

TEST_CASE("outward boundary start is an immediate boundary event") {
    const StaeckelData flat = flat_data();
    PhasePoint start{{1.0, 0.0, 0.0}, {0.5, 0.0, 0.0}};
    const Trajectory traj = hamiltonian_flow(flat, start, 1.0, 1e-10);
    CHECK(traj.boundary_event);
    CHECK(traj.samples.size() == 1);
    CHECK(traj.t_end == 0.0);
}

TEST_CASE("conservation and drift scaling") {
    const StaeckelData data = random_quadratic(20240817ull);
    PhasePoint start;
    for (int i = 0; i < 3; ++i)
        start.pos[i] = 0.5 * (data.box.lo(i) + data.box.hi(i));
    start.mom = {0.004, -0.003, 0.005};

    const Trajectory t10 = hamiltonian_flow(data, start, 10.0, 1e-10);
    const Trajectory t12 = hamiltonian_flow(data, start, 10.0, 1e-12);
    const double d10 = std::max({t10.stats.max_drift_H, t10.stats.max_drift_I2,
                                 t10.stats.max_drift_I3});
    const double d12 = std::max({t12.stats.max_drift_H, t12.stats.max_drift_I2,
                                 t12.stats.max_drift_I3});
    CHECK(d10 <= 1e-8);
    // tightening the tolerance a hundredfold gains at least one decade,
    // unless the looser run is already at rounding level
    if (d12 > 1e-14) CHECK(d10 / d12 >= 10.0);

    // pencil parameters stay constant along the flow
    const auto lm0 = invariant_values(data, start);
    for (const auto& s : t10.samples) {
        const auto lm = invariant_values(data, s.state);
        CHECK(std::abs(lm[0] - lm0[0]) <= 1e-8 * std::max(1.0, std::abs(lm0[0])));
        CHECK(std::abs(lm[1] - lm0[1]) <= 1e-8 * std::max(1.0, std::abs(lm0[1])));
    }
}

TEST_CASE("time reversal returns to the start") {
    const StaeckelData data = random_quadratic(20240817ull);
    const double tol = 1e-10;
    PhasePoint start;
    for (int i = 0; i < 3; ++i)
        start.pos[i] = 0.5 * (data.box.lo(i) + data.box.hi(i));
    start.mom = {0.004, -0.003, 0.005};

    const Trajectory fwd = hamiltonian_flow(data, start, 8.0, tol);
    PhasePoint turn = fwd.samples.back().state;
    for (int i = 0; i < 3; ++i) turn.mom[i] = -turn.mom[i];
    const Trajectory back = hamiltonian_flow(data, turn, 8.0, tol);
    const PhasePoint end = back.samples.back().state;
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(end.pos[i] - start.pos[i]) <= 10 * tol);
        CHECK(std::abs(end.mom[i] + start.mom[i]) <= 10 * tol);
    }
}

TEST_CASE("pencil parameters are momentum-scale invariant") {
    const StaeckelData data = random_quadratic(9ull);
    Rng rng(41);
    const PhasePoint p = random_phase_point(data, rng);
    const auto lm = invariant_values(data, p);
    for (double s : {2.0, -1.0, 0.1}) {
        PhasePoint q = p;
        for (int i = 0; i < 3; ++i) q.mom[i] *= s;
        const auto lm2 = invariant_values(data, q);
        CHECK(lm2[0] == doctest::Approx(lm[0]).epsilon(1e-13));
        CHECK(lm2[1] == doctest::Approx(lm[1]).epsilon(1e-13));
    }
    PhasePoint z = p;
    z.mom = {0.0, 0.0, 0.0};
    CHECK_THROWS_AS(invariant_values(data, z), std::invalid_argument);
}

TEST_CASE("geodesic residual") {
    // integrated separable geodesic: residual limited by second differences
    const StaeckelData data = random_quadratic(20240817ull);
    PhasePoint start;
    for (int i = 0; i < 3; ++i)
        start.pos[i] = 0.5 * (data.box.lo(i) + data.box.hi(i));
    start.mom = {0.004, -0.003, 0.005};
    const Trajectory traj = hamiltonian_flow(data, start, 10.0, 1e-10);
    CHECK(geodesic_residual(data, traj) <= 1e-5);

    // a circle in the flat metric is not a geodesic: residual ~ 1/radius
    const StaeckelData flat = flat_data();
    Trajectory circle;
    const double r = 0.5, h = 0.01;
    auto state = [&](double t) -> std::array<double, 6> {
        return {r * std::cos(t), r * std::sin(t), 0.0,
                -r * std::sin(t), r * std::cos(t), 0.0};
    };
    auto deriv = [&](double t) -> std::array<double, 6> {
        return {-r * std::sin(t), r * std::cos(t), 0.0,
                -r * std::cos(t), -r * std::sin(t), 0.0};
    };
    for (int n = 0; n < 100; ++n) {
        DenseSegment seg;
        seg.t0 = n * h;
        seg.h = h;
        const auto y0 = state(seg.t0), y1 = state(seg.t0 + h);
        const auto d0 = deriv(seg.t0), d1 = deriv(seg.t0 + h);
        for (int i = 0; i < 6; ++i) {
            // cubic Hermite in the dense-output basis (quartic term zero)
            const double ydiff = y1[i] - y0[i];
            seg.cont[0][i] = y0[i];
            seg.cont[1][i] = ydiff;
            seg.cont[2][i] = h * d0[i] - ydiff;
            seg.cont[3][i] = ydiff - h * d1[i] - seg.cont[2][i];
            seg.cont[4][i] = 0.0;
        }
        circle.dense.push_back(seg);
    }
    circle.t_end = 100 * h;
    const double res = geodesic_residual(flat, circle);
    CHECK(res >= 1.5);  // curvature of the circle is 1/r = 2
    CHECK(res <= 2.5);
}
