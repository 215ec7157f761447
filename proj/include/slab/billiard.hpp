#pragma once

#include <vector>

#include "slab/dynamics.hpp"

namespace slab {

/// Coordinate-level wall: the billiard domain lies on `side` of the level
/// (+1: coordinate >= level, -1: coordinate <= level).
struct Wall {
    int axis = 2;
    double level = 0.0;
    int side = -1;
};

struct BounceRecord {
    double t = 0.0;
    int wall_index = -1;
    PhasePoint pre, post;
    double H_pre = 0.0, I2_pre = 0.0, I3_pre = 0.0;
    double H_post = 0.0, I2_post = 0.0, I3_post = 0.0;
    double lambda_pre = 0.0, mu_pre = 0.0, lambda_post = 0.0, mu_post = 0.0;
};

enum class BilliardStop { bounce_limit, box_exit, grazing, time_limit };

struct BilliardRun {
    Trajectory trajectory;  // all smooth segments merged; dense output kept
    std::vector<BounceRecord> bounces;
    BilliardStop stop = BilliardStop::bounce_limit;
};

/// Elastic reflection in a Stäckel coordinate wall: negates the momentum
/// conjugate to the wall axis. The metric is diagonal in these coordinates,
/// so the wall normal is the coordinate direction.
PhasePoint reflect(const PhasePoint& pt, const Wall& wall);

struct BilliardOptions {
    double tol = 1e-10;
    double t_max = 1e4;
    double grazing_momentum = 1e-10;
};

/// Integrate the geodesic flow, detect wall crossings by sign change on the
/// dense output, localize impacts by bisection, reflect and continue.
BilliardRun billiard_run(const StaeckelData& data, const std::vector<Wall>& walls,
                         const PhasePoint& start, int n_bounces,
                         const BilliardOptions& opt = {});

struct TurningResidual {
    int axis = 0;
    double t = 0.0;
    double coordinate = 0.0;
    double residual = 0.0;  // |row factor| = |G + lambda M + mu R| etc.
};

/// Caustic tangency check: at each interior turning point of coordinate i,
/// the pencil factor of row i must vanish. Turning points are located by
/// sign change of the conjugate momentum on the dense output.
std::vector<TurningResidual> caustic_check(const StaeckelData& data,
                                           const Trajectory& traj, double lambda,
                                           double mu);

}  // namespace slab
