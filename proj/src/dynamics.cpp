#include "slab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace slab {

std::array<Grad3, 3> QuadraticObservable::weights(const Vec3& pos) const {
    const StaeckelEval ev = evaluate_staeckel(data_, pos);
    std::array<Grad3, 3> w;
    for (int i = 0; i < 3; ++i) {
        switch (kind_) {
            case Kind::hamiltonian: w[i] = 0.5 * (ev.phi1[i] / ev.delta); break;
            case Kind::integral2: w[i] = ev.phi2[i] / ev.delta; break;
            case Kind::integral3: w[i] = ev.phi3[i] / ev.delta; break;
        }
    }
    return w;
}

double QuadraticObservable::value(const PhasePoint& p) const {
    const auto w = weights(p.pos);
    double acc = 0.0;
    for (int i = 0; i < 3; ++i) acc += w[i].v * p.mom[i] * p.mom[i];
    return acc;
}

std::array<double, 6> QuadraticObservable::gradient(const PhasePoint& p) const {
    const auto w = weights(p.pos);
    std::array<double, 6> g{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) g[j] += w[i].d[j] * p.mom[i] * p.mom[i];
        g[3 + i] = 2.0 * w[i].v * p.mom[i];
    }
    return g;
}

double poisson_bracket(const Observable& F, const Observable& G, const PhasePoint& p) {
    const auto f = F.gradient(p), g = G.gradient(p);
    double acc = 0.0;
    for (int i = 0; i < 3; ++i) acc += f[i] * g[3 + i] - f[3 + i] * g[i];
    return acc;
}

namespace {

using Vec6 = std::array<double, 6>;

// Dormand-Prince 5(4) coefficients
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

struct HamiltonianRhs {
    const QuadraticObservable& H;
    void operator()(const Vec6& y, Vec6& dy) const {
        const PhasePoint p = PhasePoint::from_flat(y);
        const auto g = H.gradient(p);
        for (int i = 0; i < 3; ++i) {
            dy[i] = g[3 + i];
            dy[3 + i] = -g[i];
        }
    }
};

double error_norm(const Vec6& err, const Vec6& y0, const Vec6& y1, double tol) {
    double acc = 0.0;
    for (int i = 0; i < 6; ++i) {
        const double sc = tol + tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        acc += (err[i] / sc) * (err[i] / sc);
    }
    return std::sqrt(acc / 6.0);
}

}  // namespace

Trajectory hamiltonian_flow(const StaeckelData& data, const PhasePoint& start,
                            double t_end, const FlowOptions& opt) {
    if (!data.box.contains(start.pos, 1e-12))
        throw std::domain_error("hamiltonian_flow: start outside certified box");

    const QuadraticObservable H(data, QuadraticObservable::Kind::hamiltonian);
    const QuadraticObservable I2(data, QuadraticObservable::Kind::integral2);
    const QuadraticObservable I3(data, QuadraticObservable::Kind::integral3);
    const HamiltonianRhs rhs{H};

    Trajectory traj;
    const double H0 = H.value(start), I20 = I2.value(start), I30 = I3.value(start);
    const double sH = std::max(std::abs(H0), 1e-300),
                 sI2 = std::max(std::abs(I20), 1e-300),
                 sI3 = std::max(std::abs(I30), 1e-300);

    auto record = [&](double t, const Vec6& y) {
        const PhasePoint p = PhasePoint::from_flat(y);
        TrajectorySample s;
        s.t = t;
        s.state = p;
        s.H = H.value(p);
        s.I2 = I2.value(p);
        s.I3 = I3.value(p);
        traj.stats.max_drift_H = std::max(traj.stats.max_drift_H, std::abs(s.H - H0) / sH);
        traj.stats.max_drift_I2 =
            std::max(traj.stats.max_drift_I2, std::abs(s.I2 - I20) / sI2);
        traj.stats.max_drift_I3 =
            std::max(traj.stats.max_drift_I3, std::abs(s.I3 - I30) / sI3);
        traj.samples.push_back(s);
    };

    Vec6 y = start.flat();
    double t = 0.0;
    record(t, y);

    Vec6 k1;
    rhs(y, k1);

    // outward start on the boundary: immediate boundary event
    {
        bool outward = false;
        for (int i = 0; i < 3; ++i) {
            if (std::abs(start.pos[i] - data.box.lo(i)) <= 1e-12 && k1[i] < 0) outward = true;
            if (std::abs(start.pos[i] - data.box.hi(i)) <= 1e-12 && k1[i] > 0) outward = true;
        }
        if (outward) {
            traj.boundary_event = true;
            traj.t_end = 0.0;
            return traj;
        }
    }

    // initial step guess
    double normy = 0.0, normd = 0.0;
    for (int i = 0; i < 6; ++i) {
        normy += y[i] * y[i];
        normd += k1[i] * k1[i];
    }
    double h = 0.01 * std::sqrt((normy + 1.0) / (normd + 1e-30));
    h = std::min(h, t_end);
    if (opt.max_step > 0.0) h = std::min(h, opt.max_step);

    const double hmin = 1e-14 * std::max(1.0, t_end);
    bool last = false;

    while (t < t_end && !last) {
        if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
        if (opt.sample_dt > 0.0) {
            // land exactly on the next multiple of sample_dt
            const double next = (std::floor(t / opt.sample_dt + 1e-9) + 1.0) * opt.sample_dt;
            h = std::min(h, next - t);
        }
        if (t + h >= t_end) {
            h = t_end - t;
            last = true;
        }
        if (h < hmin)
            throw std::runtime_error("hamiltonian_flow: step size underflow near singular locus");

        Vec6 k2, k3, k4, k5, k6, k7, yt, y1;
        for (int i = 0; i < 6; ++i) yt[i] = y[i] + h * a21 * k1[i];
        rhs(yt, k2);
        for (int i = 0; i < 6; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(yt, k3);
        for (int i = 0; i < 6; ++i)
            yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(yt, k4);
        for (int i = 0; i < 6; ++i)
            yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(yt, k5);
        for (int i = 0; i < 6; ++i)
            yt[i] = y[i] +
                    h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(yt, k6);
        for (int i = 0; i < 6; ++i)
            y1[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(y1, k7);

        Vec6 err;
        for (int i = 0; i < 6; ++i)
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                          e7 * k7[i]);
        // error-per-unit-time control: local error <= tol * h, so the
        // accumulated drift over [0, t_end] stays proportional to tol
        const double en = error_norm(err, y, y1, opt.tol) / h;

        if (en <= 1.0) {
            DenseSegment seg;
            seg.t0 = t;
            seg.h = h;
            for (int i = 0; i < 6; ++i) {
                const double ydiff = y1[i] - y[i];
                const double bspl = h * k1[i] - ydiff;
                seg.cont[0][i] = y[i];
                seg.cont[1][i] = ydiff;
                seg.cont[2][i] = bspl;
                seg.cont[3][i] = ydiff - h * k7[i] - bspl;
                seg.cont[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                      d6 * k6[i] + d7 * k7[i]);
            }

            // boundary event: leave the certified box
            const PhasePoint p1 = PhasePoint::from_flat(y1);
            if (!data.box.contains(p1.pos, 1e-12)) {
                double lo = t, hi = t + h;
                for (int iter = 0; iter < 200 && hi - lo > 1e-13 * std::max(1.0, hi);
                     ++iter) {
                    const double mid = 0.5 * (lo + hi);
                    const auto ym = seg.eval(mid);
                    if (data.box.contains({ym[0], ym[1], ym[2]}, 1e-12))
                        lo = mid;
                    else
                        hi = mid;
                }
                const auto yb = seg.eval(lo);
                seg.len = lo - t;  // keep h: it scales the interpolation
                if (seg.len > 0.0) traj.dense.push_back(seg);
                ++traj.stats.n_steps;
                record(lo, yb);
                traj.boundary_event = true;
                traj.t_end = lo;
                return traj;
            }

            traj.dense.push_back(seg);
            t += h;
            y = y1;
            k1 = k7;  // FSAL
            ++traj.stats.n_steps;
            record(t, y);
            const double fac = std::min(
                5.0, std::max(0.2, 0.9 * std::pow(en > 1e-30 ? 1.0 / en : 1e30, 0.25)));
            h *= fac;
        } else {
            ++traj.stats.n_rejected;
            last = false;
            h *= std::max(0.2, 0.9 * std::pow(1.0 / en, 0.25));
        }
    }
    traj.t_end = t;
    return traj;
}

std::vector<TrajectorySample> resample_uniform(const Trajectory& traj, double dt) {
    std::vector<TrajectorySample> out;
    if (traj.dense.empty()) return out;
    std::size_t seg = 0;
    for (double t = traj.dense.front().t0; t <= traj.t_end + 1e-12; t += dt) {
        while (seg + 1 < traj.dense.size() &&
               t > traj.dense[seg].t0 + traj.dense[seg].span() + 1e-14)
            ++seg;
        TrajectorySample s;
        s.t = t;
        s.state = PhasePoint::from_flat(traj.dense[seg].eval(std::min(t, traj.t_end)));
        out.push_back(s);
    }
    return out;
}

std::array<std::array<std::array<double, 3>, 3>, 3> christoffel(const StaeckelData& data,
                                                                const Vec3& pos) {
    const DiagonalField g = metric(data, pos);
    std::array<std::array<std::array<double, 3>, 3>, 3> gamma{};
    for (int i = 0; i < 3; ++i) {
        const double inv2g = 0.5 / g.coeff[i].v;
        for (int j = 0; j < 3; ++j) {
            if (j == i) {
                gamma[i][i][i] = g.coeff[i].d[i] * inv2g;
            } else {
                gamma[i][i][j] = gamma[i][j][i] = g.coeff[i].d[j] * inv2g;
                gamma[i][j][j] = -g.coeff[j].d[i] * inv2g;
            }
        }
    }
    return gamma;
}

double geodesic_residual(const StaeckelData& data, const Trajectory& traj) {
    const double dt = 0.02;
    const auto samples = resample_uniform(traj, dt);
    if (samples.size() < 5)
        throw std::invalid_argument("geodesic_residual: too few samples");

    const QuadraticObservable H(data, QuadraticObservable::Kind::hamiltonian);
    const double speed2 = 2.0 * H.value(samples.front().state);  // |dx/dt|_g^2
    if (speed2 <= 0.0)
        throw std::invalid_argument("geodesic_residual: zero-speed trajectory");

    // velocities from momenta are exact; accelerations by 5-point differences
    std::vector<Vec3> vel(samples.size());
    for (std::size_t n = 0; n < samples.size(); ++n) {
        const DiagonalField g = metric(data, samples[n].state.pos);
        for (int i = 0; i < 3; ++i)
            vel[n][i] = samples[n].state.mom[i] / g.coeff[i].v;
    }

    double worst = 0.0;
    for (std::size_t n = 2; n + 2 < samples.size(); ++n) {
        Vec3 acc;
        for (int i = 0; i < 3; ++i)
            acc[i] = (-vel[n + 2][i] + 8.0 * vel[n + 1][i] - 8.0 * vel[n - 1][i] +
                      vel[n - 2][i]) /
                     (12.0 * dt);
        const auto gamma = christoffel(data, samples[n].state.pos);
        for (int a = 0; a < 3; ++a) {
            double r = acc[a];
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) r += gamma[a][j][k] * vel[n][j] * vel[n][k];
            // rescale t -> arclength: d^2x/ds^2 terms all carry 1/speed^2
            worst = std::max(worst, std::abs(r) / speed2);
        }
    }
    return worst;
}

std::array<double, 2> invariant_values(const StaeckelData& data, const PhasePoint& pt) {
    double pnorm = 0.0;
    for (int i = 0; i < 3; ++i) pnorm += pt.mom[i] * pt.mom[i];
    if (pnorm <= 0.0)
        throw std::invalid_argument("invariant_values: zero momentum");
    const QuadraticObservable H(data, QuadraticObservable::Kind::hamiltonian);
    const QuadraticObservable I2(data, QuadraticObservable::Kind::integral2);
    const QuadraticObservable I3(data, QuadraticObservable::Kind::integral3);
    const double h2 = 2.0 * H.value(pt);
    return {I2.value(pt) / h2, I3.value(pt) / h2};
}

}  // namespace slab
