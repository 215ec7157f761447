#include "slab/billiard.hpp"

#include <cmath>
#include <stdexcept>

namespace slab {

PhasePoint reflect(const PhasePoint& pt, const Wall& wall) {
    if (std::abs(pt.pos[wall.axis] - wall.level) > 1e-10)
        throw std::invalid_argument("reflect: point is not on the wall");
    PhasePoint out = pt;
    out.mom[wall.axis] = -out.mom[wall.axis];
    return out;
}

namespace {

double wall_distance(const Wall& w, const Vec3& p) {
    return w.side * (p[w.axis] - w.level);
}

}  // namespace

BilliardRun billiard_run(const StaeckelData& data, const std::vector<Wall>& walls,
                         const PhasePoint& start, int n_bounces,
                         const BilliardOptions& opt) {
    for (const auto& w : walls)
        if (wall_distance(w, start.pos) <= 0.0)
            throw std::invalid_argument("billiard_run: start is not strictly inside the domain");

    const QuadraticObservable H(data, QuadraticObservable::Kind::hamiltonian);
    const QuadraticObservable I2o(data, QuadraticObservable::Kind::integral2);
    const QuadraticObservable I3o(data, QuadraticObservable::Kind::integral3);

    BilliardRun run;
    run.stop = BilliardStop::time_limit;
    PhasePoint state = start;
    double t_base = 0.0;
    double mom_scale = 0.0;
    for (int i = 0; i < 3; ++i) mom_scale = std::max(mom_scale, std::abs(start.mom[i]));
    if (mom_scale == 0.0) mom_scale = 1.0;

    while (t_base < opt.t_max) {
        Trajectory leg = hamiltonian_flow(data, state, opt.t_max - t_base, opt.tol);

        // earliest wall crossing over the dense output of this leg
        int hit_wall = -1;
        double hit_t = 0.0;
        std::size_t hit_seg = 0;
        for (std::size_t s = 0; s < leg.dense.size() && hit_wall < 0; ++s) {
            const auto& seg = leg.dense[s];
            const auto y0 = seg.eval(seg.t0);
            const auto y1 = seg.eval(seg.t0 + seg.span());
            double best_t = 0.0;
            int best_w = -1;
            for (std::size_t w = 0; w < walls.size(); ++w) {
                const double d0 = wall_distance(walls[w], {y0[0], y0[1], y0[2]});
                const double d1 = wall_distance(walls[w], {y1[0], y1[1], y1[2]});
                if (d0 > 0.0 && d1 <= 0.0) {
                    // bisection to 1e-12 in the crossing coordinate
                    double lo = seg.t0, hi = seg.t0 + seg.span();
                    for (int it = 0; it < 200; ++it) {
                        const double mid = 0.5 * (lo + hi);
                        const auto ym = seg.eval(mid);
                        const double dm = wall_distance(walls[w], {ym[0], ym[1], ym[2]});
                        if (dm > 0.0)
                            lo = mid;
                        else
                            hi = mid;
                        if (std::abs(dm) <= 1e-12 && dm <= 0.0) break;
                    }
                    if (best_w < 0 || hi < best_t) {
                        best_t = hi;
                        best_w = static_cast<int>(w);
                    }
                }
            }
            if (best_w >= 0) {
                hit_wall = best_w;
                hit_t = best_t;
                hit_seg = s;
            }
        }

        const double t_cut = (hit_wall >= 0) ? hit_t : leg.t_end;

        // merge this leg (up to the impact) into the run trajectory
        for (const auto& smp : leg.samples) {
            if (smp.t > t_cut + 1e-14) break;
            TrajectorySample shifted = smp;
            shifted.t += t_base;
            if (!run.trajectory.samples.empty() &&
                std::abs(run.trajectory.samples.back().t - shifted.t) < 1e-14)
                continue;
            run.trajectory.samples.push_back(shifted);
        }
        for (std::size_t s = 0; s < leg.dense.size(); ++s) {
            DenseSegment seg = leg.dense[s];
            if (seg.t0 >= t_cut) break;
            if (hit_wall >= 0 && s == hit_seg) seg.len = t_cut - seg.t0;
            seg.t0 += t_base;
            run.trajectory.dense.push_back(seg);
            if (hit_wall >= 0 && s == hit_seg) break;
        }
        run.trajectory.stats.n_steps += leg.stats.n_steps;
        run.trajectory.stats.n_rejected += leg.stats.n_rejected;
        run.trajectory.stats.max_drift_H =
            std::max(run.trajectory.stats.max_drift_H, leg.stats.max_drift_H);
        run.trajectory.stats.max_drift_I2 =
            std::max(run.trajectory.stats.max_drift_I2, leg.stats.max_drift_I2);
        run.trajectory.stats.max_drift_I3 =
            std::max(run.trajectory.stats.max_drift_I3, leg.stats.max_drift_I3);

        if (hit_wall < 0) {
            run.trajectory.t_end = t_base + leg.t_end;
            run.stop = leg.boundary_event ? BilliardStop::box_exit : BilliardStop::time_limit;
            run.trajectory.boundary_event = leg.boundary_event;
            return run;
        }

        // impact state (snap the crossing coordinate onto the wall)
        const Wall& wall = walls[hit_wall];
        auto yi = leg.dense[hit_seg].eval(hit_t);
        yi[wall.axis] = wall.level;
        PhasePoint pre = PhasePoint::from_flat(yi);

        if (std::abs(pre.mom[wall.axis]) < opt.grazing_momentum * mom_scale) {
            run.trajectory.t_end = t_base + hit_t;
            run.stop = BilliardStop::grazing;
            return run;
        }

        if (static_cast<int>(run.bounces.size()) >= n_bounces) {
            run.trajectory.t_end = t_base + hit_t;
            run.stop = BilliardStop::bounce_limit;
            return run;
        }

        PhasePoint post = reflect(pre, wall);
        BounceRecord rec;
        rec.t = t_base + hit_t;
        rec.wall_index = hit_wall;
        rec.pre = pre;
        rec.post = post;
        rec.H_pre = H.value(pre);
        rec.I2_pre = I2o.value(pre);
        rec.I3_pre = I3o.value(pre);
        rec.H_post = H.value(post);
        rec.I2_post = I2o.value(post);
        rec.I3_post = I3o.value(post);
        const auto lm_pre = invariant_values(data, pre);
        const auto lm_post = invariant_values(data, post);
        rec.lambda_pre = lm_pre[0];
        rec.mu_pre = lm_pre[1];
        rec.lambda_post = lm_post[0];
        rec.mu_post = lm_post[1];
        run.bounces.push_back(rec);

        {
            TrajectorySample s;
            s.t = rec.t;
            s.state = post;
            s.H = rec.H_post;
            s.I2 = rec.I2_post;
            s.I3 = rec.I3_post;
            run.trajectory.samples.push_back(s);
        }

        state = post;
        t_base += hit_t;
        run.trajectory.t_end = t_base;
    }
    return run;
}

std::vector<TurningResidual> caustic_check(const StaeckelData& data,
                                           const Trajectory& traj, double lambda,
                                           double mu) {
    std::vector<TurningResidual> out;
    for (const auto& seg : traj.dense) {
        const auto y0 = seg.eval(seg.t0);
        const auto y1 = seg.eval(seg.t0 + seg.span());
        for (int axis = 0; axis < 3; ++axis) {
            const double p0 = y0[3 + axis], p1 = y1[3 + axis];
            if (p0 == 0.0 || p0 * p1 >= 0.0) continue;
            double lo = seg.t0, hi = seg.t0 + seg.span();
            for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(hi)); ++it) {
                const double mid = 0.5 * (lo + hi);
                const double pm = seg.eval(mid)[3 + axis];
                if (pm * p0 > 0.0)
                    lo = mid;
                else
                    hi = mid;
            }
            const double t_star = 0.5 * (lo + hi);
            const double c = seg.eval(t_star)[axis];
            TurningResidual tr;
            tr.axis = axis;
            tr.t = t_star;
            tr.coordinate = c;
            tr.residual = std::abs(data.rows[axis][0](c) + lambda * data.rows[axis][1](c) +
                                   mu * data.rows[axis][2](c));
            out.push_back(tr);
        }
    }
    return out;
}

}  // namespace slab
