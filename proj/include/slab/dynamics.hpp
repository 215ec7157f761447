#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "slab/poly.hpp"
#include "slab/staeckel.hpp"

namespace slab {

/// Point on the cotangent bundle: position plus conjugate momenta.
struct PhasePoint {
    Vec3 pos{};
    Vec3 mom{};

    std::array<double, 6> flat() const {
        return {pos[0], pos[1], pos[2], mom[0], mom[1], mom[2]};
    }
    static PhasePoint from_flat(const std::array<double, 6>& y) {
        return {{y[0], y[1], y[2]}, {y[3], y[4], y[5]}};
    }
};

/// Observable on phase space with exact first partials in all six variables.
class Observable {
public:
    virtual ~Observable() = default;
    virtual double value(const PhasePoint& p) const = 0;
    // order: d/dx, d/dy, d/dz, d/dpx, d/dpy, d/dpz
    virtual std::array<double, 6> gradient(const PhasePoint& p) const = 0;
};

/// Quadratic momentum observable of a Stäckel pencil member:
///   F = sum_i w_i(pos) p_i^2,  with
///   H:  w_i = Phi^{i1}/(2 Delta)     (so H = 1/2 sum p_i^2/g_ii)
///   I2: w_i = Phi^{i2}/Delta
///   I3: w_i = Phi^{i3}/Delta
/// The weights are the momentum form of the diagonal velocity forms of the
/// staeckel module; their gradients come from exact polynomial calculus.
class QuadraticObservable : public Observable {
public:
    enum class Kind { hamiltonian, integral2, integral3 };

    QuadraticObservable(StaeckelData data, Kind kind)
        : data_(std::move(data)), kind_(kind) {}

    double value(const PhasePoint& p) const override;
    std::array<double, 6> gradient(const PhasePoint& p) const override;

    // the three momentum weights w_i with exact gradients
    std::array<Grad3, 3> weights(const Vec3& pos) const;

private:
    StaeckelData data_;
    Kind kind_;
};

/// One of the six canonical coordinates as an observable.
class CoordinateObservable : public Observable {
public:
    explicit CoordinateObservable(int index) : index_(index) {}
    double value(const PhasePoint& p) const override { return p.flat()[index_]; }
    std::array<double, 6> gradient(const PhasePoint&) const override {
        std::array<double, 6> g{};
        g[index_] = 1.0;
        return g;
    }

private:
    int index_;
};

/// Polynomial observable in (x,y,z,px,py,pz); used by the flat-space suite.
class PolyObservable : public Observable {
public:
    explicit PolyObservable(Poly6 p) : poly_(std::move(p)) {
        for (int i = 0; i < 6; ++i) partials_[i] = poly_.partial(i);
    }
    const Poly6& poly() const { return poly_; }
    double value(const PhasePoint& p) const override { return poly_(p.flat()); }
    std::array<double, 6> gradient(const PhasePoint& p) const override {
        std::array<double, 6> g;
        const auto y = p.flat();
        for (int i = 0; i < 6; ++i) g[i] = partials_[i](y);
        return g;
    }

private:
    Poly6 poly_;
    std::array<Poly6, 6> partials_;
};

/// Canonical Poisson bracket {F,G} at a phase point, from exact partials.
double poisson_bracket(const Observable& F, const Observable& G, const PhasePoint& p);

/// Dense-output segment of one accepted Runge-Kutta step (Dormand-Prince
/// continuous extension).
struct DenseSegment {
    double t0 = 0.0, h = 0.0;  // h scales the interpolation basis
    double len = 0.0;          // valid span when truncated; 0 = full step
    std::array<std::array<double, 6>, 5> cont{};

    double span() const { return len > 0.0 ? len : h; }

    std::array<double, 6> eval(double t) const {
        const double th = (t - t0) / h, th1 = 1.0 - th;
        std::array<double, 6> y;
        for (int i = 0; i < 6; ++i)
            y[i] = cont[0][i] +
                   th * (cont[1][i] +
                         th1 * (cont[2][i] + th * (cont[3][i] + th1 * cont[4][i])));
        return y;
    }
};

struct TrajectorySample {
    double t = 0.0;
    PhasePoint state;
    double H = 0.0, I2 = 0.0, I3 = 0.0;
};

struct IntegratorStats {
    long n_steps = 0;
    long n_rejected = 0;
    double max_drift_H = 0.0, max_drift_I2 = 0.0, max_drift_I3 = 0.0;  // relative
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    std::vector<DenseSegment> dense;
    IntegratorStats stats;
    bool boundary_event = false;
    double t_end = 0.0;
};

struct FlowOptions {
    double tol = 1e-10;
    double max_step = 0.0;     // 0 = unlimited
    double sample_dt = 0.0;    // >0: force accepted steps onto multiples of dt
};

/// Geodesic flow as Hamilton's equations of H = 1/2 sum p_i^2/g_ii,
/// integrated by an adaptive Dormand-Prince 5(4) pair with dense output.
/// Stops at t_end or when the trajectory leaves the certified box
/// (boundary event, crossing localized on dense output).
Trajectory hamiltonian_flow(const StaeckelData& data, const PhasePoint& start,
                            double t_end, const FlowOptions& opt = {});

inline Trajectory hamiltonian_flow(const StaeckelData& data, const PhasePoint& start,
                                   double t_end, double tol) {
    FlowOptions o;
    o.tol = tol;
    return hamiltonian_flow(data, start, t_end, o);
}

/// Max norm of the Lagrangian geodesic equation residual
///   d^2x/ds^2 + Gamma(dx/ds, dx/ds)
/// along uniformly sampled positions (arclength parameterization, velocities
/// from momenta, second derivatives by finite differences of the samples).
double geodesic_residual(const StaeckelData& data, const Trajectory& traj);

/// Resample a trajectory at uniform dt via its dense output.
std::vector<TrajectorySample> resample_uniform(const Trajectory& traj, double dt);

/// Pencil parameters of the direction at pt: lambda = I2/(2H), mu = I3/(2H).
std::array<double, 2> invariant_values(const StaeckelData& data, const PhasePoint& pt);

/// Christoffel symbols of the diagonal metric at a point, Gamma[i][j][k].
std::array<std::array<std::array<double, 3>, 3>, 3> christoffel(
    const StaeckelData& data, const Vec3& pos);

}  // namespace slab
