#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "slab/linalg.hpp"
#include "slab/staeckel.hpp"

namespace slab {

/// One-form over the box, coefficients in the coordinate coframe dx,dy,dz.
struct OneFormField {
    std::array<std::function<double(const Vec3&)>, 3> coeff;

    Vec3 at(const Vec3& p) const {
        return {coeff[0](p), coeff[1](p), coeff[2](p)};
    }
    double on(const Vec3& p, const Vec3& v) const {
        const Vec3 c = at(p);
        return c[0] * v[0] + c[1] * v[1] + c[2] * v[2];
    }
};

/// The four common zero directions of the pencils I2 - lambda g, I3 - mu g
/// at a point, unit g-length, labeled by the sign pair (e_k, e_l).
/// Index order: (+,+), (+,-), (-,+), (-,-).
struct WebDirectionSet {
    Vec3 base{};
    double lambda = 0.0, mu = 0.0;
    std::array<Vec3, 4> tau{};
    std::array<std::array<int, 2>, 4> signs{{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
};

/// Pencil parameters of a seed direction: lambda = I2(v)/g(v), mu = I3(v)/g(v).
/// Directions with all components nonzero give admissible (lambda, mu).
std::array<double, 2> pencil_parameters(const StaeckelData& data, const Vec3& p,
                                        const Vec3& seed_dir);

/// Solve the two direction equations for all four sign pairs. Requires the
/// three pencil factors E+lambda K+mu P, F+lambda L+mu Q, G+lambda M+mu R
/// to be nonzero of one sign at the point (realness condition).
WebDirectionSet web_directions(const StaeckelData& data, const Vec3& p, double lambda,
                               double mu);

/// Permutations of the four directions induced by the three coordinate-plane
/// reflections. perm[i][k] = index of the image of tau_k under reflection in
/// the plane orthogonal to axis i. Throws if a reflected direction matches
/// none of the set within the angular tolerance.
struct ReflectionReport {
    std::array<std::array<int, 4>, 3> perm{};
    double max_angle_mismatch = 0.0;
};
ReflectionReport reflection_permutes(const StaeckelData& data, const WebDirectionSet& ws,
                                     double angular_tol = 1e-9);

/// Abelian relation of the 4-web: four one-forms summing to zero, each
/// vanishing on its foliation.
struct AbelianRelation {
    std::array<OneFormField, 4> sigma;
};

/// The two analytic relations a1 (K,L,M row) and a2 (P,Q,R row) of the web
/// formed by the three coordinate foliations and the tau_(ek,el) curves.
std::array<AbelianRelation, 2> abelian_relations_a1_a2(const StaeckelData& data,
                                                       double lambda, double mu, int ek,
                                                       int el);

/// Web specification for the grid rank estimator, in adapted coordinates:
/// surface foliations are coordinate levels, the curve foliation is a
/// direction field over the box.
struct GridWebSpec {
    WorkingBox box;
    int grid_n = 8;
    std::function<Vec3(const Vec3&)> curve_field;
    std::array<bool, 3> surfaces{true, true, true};  // participating coordinate foliations
};

struct RankReport {
    int rank = 0;
    std::vector<std::vector<double>> basis;  // per relation: stacked samples u|v|w
    std::vector<double> singular_tail;       // smallest singular values (ascending)
    std::vector<double> node_coords[3];      // grid samples per axis
    int n = 0;
    std::array<bool, 3> surfaces{};
};

/// Assemble one linear equation u(x)xi + v(y)eta + w(z)zeta = 0 per grid node
/// and return the numerical nullspace dimension (the web rank) with a basis
/// of separated-relation candidates. Candidates failing the relation
/// invariants are discarded before counting.
RankReport estimate_web_rank(const GridWebSpec& spec, double tol = 1e-8);

/// Largest principal angle (radians) between the span of the sampled analytic
/// relations and the recovered nullspace basis.
double span_angle(const std::vector<std::vector<double>>& recovered,
                  const std::vector<std::vector<double>>& analytic);

/// Sample an analytic relation (u,v,w form triple of univariate functions)
/// on the grid of a spec, stacked the same way as RankReport basis vectors.
std::vector<double> sample_relation(const GridWebSpec& spec,
                                    const std::function<double(double)>& u,
                                    const std::function<double(double)>& v,
                                    const std::function<double(double)>& w);

/// Connection form and curvature of a (2 surfaces + 1 curve) 3-web; the
/// coframe is built from the curve field and normalized so that
/// w4 = w1 + w2 + w3 annihilates the curves. Structure coefficients by
/// central finite differences of step h; curvature by a second difference
/// level.
struct ConnectionReport {
    bool connection_exists = true;
    double existence_residual = 0.0;  // relative size of the obstructing terms
    Vec3 gamma{};                     // coordinate components of the connection form
    Vec3 dgamma{};                    // components of the curvature (dy^dz, dz^dx, dx^dy)
    double curvature_norm = 0.0;
};
ConnectionReport connection_and_curvature(const GridWebSpec& web3, const Vec3& p,
                                          double h);

}  // namespace slab
