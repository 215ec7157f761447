#include "slab/webs.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace slab {

namespace {

const char* pencil_factor_name(int i) {
    switch (i) {
        case 0: return "E+lambda*K+mu*P";
        case 1: return "F+lambda*L+mu*Q";
        default: return "G+lambda*M+mu*R";
    }
}

double dotg(const Vec3& g, const Vec3& a, const Vec3& b) {
    return g[0] * a[0] * b[0] + g[1] * a[1] * b[1] + g[2] * a[2] * b[2];
}

}  // namespace

std::array<double, 2> pencil_parameters(const StaeckelData& data, const Vec3& p,
                                        const Vec3& seed_dir) {
    const DiagonalField g = metric(data, p);
    const IntegralPair I = integrals(data, p);
    const double gv = dotg(g.values(), seed_dir, seed_dir);
    if (gv <= 0.0)
        throw std::invalid_argument("pencil_parameters: zero seed direction");
    return {dotg(I.I2.values(), seed_dir, seed_dir) / gv,
            dotg(I.I3.values(), seed_dir, seed_dir) / gv};
}

WebDirectionSet web_directions(const StaeckelData& data, const Vec3& p, double lambda,
                               double mu) {
    const StaeckelEval ev = evaluate_staeckel(data, p);
    const Mat3 m = data.values(p);

    // pencil factors per axis: E + lambda K + mu P and the y,z analogues
    Vec3 S;
    double scale = 0.0;
    for (int i = 0; i < 3; ++i) {
        S[i] = m(i, 0) + lambda * m(i, 1) + mu * m(i, 2);
        scale = std::max(scale, std::abs(m(i, 0)) + std::abs(lambda * m(i, 1)) +
                                    std::abs(mu * m(i, 2)));
    }
    const double eps = 1e-12 * (scale > 0.0 ? scale : 1.0);
    int sign_ref = 0;
    for (int i = 0; i < 3; ++i) {
        if (std::abs(S[i]) <= eps) continue;  // factor vanishes: axis-tangent limit
        const int s = S[i] > 0.0 ? 1 : -1;
        if (sign_ref == 0) sign_ref = s;
        else if (s != sign_ref)
            throw std::domain_error(std::string("web_directions: realness condition "
                                                "violated, factor ") +
                                    pencil_factor_name(i) + " changes sign");
    }
    if (sign_ref == 0)
        throw std::domain_error("web_directions: all pencil factors vanish (degenerate)");

    const Vec3 root{std::sqrt(std::abs(S[0])), std::sqrt(std::abs(S[1])),
                    std::sqrt(std::abs(S[2]))};
    const DiagonalField g = metric(data, p);
    const IntegralPair I = integrals(data, p);

    WebDirectionSet ws;
    ws.base = p;
    ws.lambda = lambda;
    ws.mu = mu;
    for (int k = 0; k < 4; ++k) {
        const int ek = ws.signs[k][0], el = ws.signs[k][1];
        // solution of the two direction equations, back in coordinate components
        Vec3 tau{el * ev.phi1[0].v * root[0], ek * ev.phi1[1].v * root[1],
                 double(ek * el) * ev.phi1[2].v * root[2]};
        const double len = std::sqrt(dotg(g.values(), tau, tau));
        if (!(len > 0.0))
            throw std::domain_error("web_directions: direction system is rank deficient");
        for (int i = 0; i < 3; ++i) tau[i] /= len;
        // verify the defining pencil equations
        const double r2 = dotg(I.I2.values(), tau, tau) - lambda;
        const double r3 = dotg(I.I3.values(), tau, tau) - mu;
        const double rscale = 1.0 + std::abs(lambda) + std::abs(mu);
        if (std::abs(r2) > 1e-9 * rscale || std::abs(r3) > 1e-9 * rscale)
            throw std::runtime_error("web_directions: solution fails the pencil equations");
        ws.tau[k] = tau;
    }

    // pairwise non-collinearity (only meaningful off the axis-tangent limit)
    bool limit_case = false;
    for (int i = 0; i < 3; ++i)
        if (std::abs(S[i]) <= eps) limit_case = true;
    if (!limit_case) {
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b) {
                const double c = std::abs(dotg(g.values(), ws.tau[a], ws.tau[b]));
                if (c > 1.0 - 1e-10)
                    throw std::domain_error("web_directions: directions are collinear");
            }
    }
    return ws;
}

ReflectionReport reflection_permutes(const StaeckelData& data, const WebDirectionSet& ws,
                                     double angular_tol) {
    const DiagonalField g = metric(data, ws.base);
    ReflectionReport rep;
    for (int axis = 0; axis < 3; ++axis) {
        for (int k = 0; k < 4; ++k) {
            Vec3 r = ws.tau[k];
            r[axis] = -r[axis];
            int best = -1;
            double best_chord = 1e300;
            for (int j = 0; j < 4; ++j) {
                // match as lines: distance to +-tau_j, chord of the angle
                double d2p = 0.0, d2m = 0.0;
                for (int c = 0; c < 3; ++c) {
                    const double gp = g.values()[c];
                    d2p += gp * (r[c] - ws.tau[j][c]) * (r[c] - ws.tau[j][c]);
                    d2m += gp * (r[c] + ws.tau[j][c]) * (r[c] + ws.tau[j][c]);
                }
                const double d = std::sqrt(std::min(d2p, d2m));
                if (d < best_chord) {
                    best_chord = d;
                    best = j;
                }
            }
            const double mismatch = 2.0 * std::asin(std::min(1.0, 0.5 * best_chord));
            rep.max_angle_mismatch = std::max(rep.max_angle_mismatch, mismatch);
            if (mismatch > angular_tol)
                throw std::runtime_error(
                    "reflection_permutes: reflected direction matches no web direction");
            rep.perm[axis][k] = best;
        }
    }
    return rep;
}

std::array<AbelianRelation, 2> abelian_relations_a1_a2(const StaeckelData& data,
                                                       double lambda, double mu, int ek,
                                                       int el) {
    // univariate factors: S_i(t) = col0 + lambda col1 + mu col2 of row i
    auto factor = [&](int row) {
        const Poly1 s = data.rows[row][0] + lambda * data.rows[row][1] +
                        mu * data.rows[row][2];
        return s;
    };
    const Poly1 s1 = factor(0), s2 = factor(1), s3 = factor(2);
    const std::array<double, 3> esign{double(ek), double(el), 1.0};

    std::array<AbelianRelation, 2> out;
    for (int rel = 0; rel < 2; ++rel) {
        const int col = (rel == 0) ? 1 : 2;  // K,L,M for a1; P,Q,R for a2
        std::array<Poly1, 3> num{data.rows[0][col], data.rows[1][col], data.rows[2][col]};
        std::array<Poly1, 3> den{s1, s2, s3};
        for (int i = 0; i < 3; ++i) {
            const Poly1 n = num[i], d = den[i];
            const double e = esign[i];
            // sigma_i = -e_i * num_i / sqrt(|S_i|) dcoord_i
            auto c = [n, d, e](const Vec3& p, int axis) {
                return -e * n(p[axis]) / std::sqrt(std::abs(d(p[axis])));
            };
            for (int j = 0; j < 3; ++j) {
                if (j == i)
                    out[rel].sigma[i].coeff[j] = [c, i](const Vec3& p) { return c(p, i); };
                else
                    out[rel].sigma[i].coeff[j] = [](const Vec3&) { return 0.0; };
            }
        }
        // sigma_4 = -(sigma_1 + sigma_2 + sigma_3), exact by construction
        for (int j = 0; j < 3; ++j) {
            const Poly1 n = num[j], d = den[j];
            const double e = esign[j];
            out[rel].sigma[3].coeff[j] = [n, d, e, j](const Vec3& p) {
                return e * n(p[j]) / std::sqrt(std::abs(d(p[j])));
            };
        }
    }
    return out;
}

namespace {

std::array<std::vector<double>, 3> grid_coords(const GridWebSpec& spec) {
    std::array<std::vector<double>, 3> c;
    for (int k = 0; k < 3; ++k) {
        c[k].resize(spec.grid_n);
        for (int i = 0; i < spec.grid_n; ++i)
            c[k][i] = spec.box.lo(k) +
                      (spec.box.hi(k) - spec.box.lo(k)) * i / double(spec.grid_n - 1);
    }
    return c;
}

}  // namespace

RankReport estimate_web_rank(const GridWebSpec& spec, double tol) {
    if (spec.grid_n < 4)
        throw std::invalid_argument("estimate_web_rank: grid resolution must be >= 4");
    const int n = spec.grid_n;
    const auto coords = grid_coords(spec);

    std::array<int, 3> offset{-1, -1, -1};
    int cols = 0;
    for (int k = 0; k < 3; ++k)
        if (spec.surfaces[k]) {
            offset[k] = cols;
            cols += n;
        }
    if (cols == 0)
        throw std::invalid_argument("estimate_web_rank: no participating foliations");

    // degeneracy screen: the curve field must not lie in a participating
    // coordinate plane
    std::array<double, 3> comp_max{0.0, 0.0, 0.0};
    double field_max = 0.0;

    std::vector<std::vector<double>> A;
    A.reserve(static_cast<std::size_t>(n) * n * n);
    for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy)
            for (int iz = 0; iz < n; ++iz) {
                const Vec3 p{coords[0][ix], coords[1][iy], coords[2][iz]};
                Vec3 v = spec.curve_field(p);
                const double norm =
                    std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
                if (!(norm > 0.0))
                    throw std::invalid_argument(
                        "estimate_web_rank: curve field vanishes on the grid");
                for (int k = 0; k < 3; ++k) {
                    v[k] /= norm;
                    comp_max[k] = std::max(comp_max[k], std::abs(v[k]));
                    field_max = std::max(field_max, std::abs(v[k]));
                }
                std::vector<double> row(cols, 0.0);
                const std::array<int, 3> idx{ix, iy, iz};
                for (int k = 0; k < 3; ++k)
                    if (spec.surfaces[k]) row[offset[k] + idx[k]] = v[k];
                A.push_back(std::move(row));
            }

    for (int k = 0; k < 3; ++k)
        if (spec.surfaces[k] && comp_max[k] <= 1e-12 * field_max)
            throw std::invalid_argument(
                "estimate_web_rank: degenerate web (curve field lies in a "
                "coordinate plane)");

    Nullspace ns = nullspace_dim(A, tol);

    RankReport rep;
    rep.n = n;
    rep.surfaces = spec.surfaces;
    for (int k = 0; k < 3; ++k) rep.node_coords[k] = coords[k];
    const double smax = ns.singular_values.empty() ? 0.0 : ns.singular_values.front();

    // re-verify candidates: annihilation residual at every node
    for (const auto& q : ns.basis) {
        double worst = 0.0;
        for (const auto& row : A) {
            double r = 0.0;
            for (int j = 0; j < cols; ++j) r += row[j] * q[j];
            worst = std::max(worst, std::abs(r));
        }
        if (worst <= 50.0 * tol * std::max(smax, 1.0)) rep.basis.push_back(q);
    }
    rep.rank = static_cast<int>(rep.basis.size());
    const int tail = std::min<std::size_t>(4, ns.singular_values.size());
    for (int i = 0; i < tail; ++i)
        rep.singular_tail.push_back(ns.singular_values[ns.singular_values.size() - 1 - i]);
    return rep;
}

std::vector<double> sample_relation(const GridWebSpec& spec,
                                    const std::function<double(double)>& u,
                                    const std::function<double(double)>& v,
                                    const std::function<double(double)>& w) {
    const auto coords = grid_coords(spec);
    const std::array<const std::function<double(double)>*, 3> f{&u, &v, &w};
    std::vector<double> out;
    for (int k = 0; k < 3; ++k)
        if (spec.surfaces[k])
            for (double t : coords[k]) out.push_back((*f[k])(t));
    return out;
}

double span_angle(const std::vector<std::vector<double>>& recovered,
                  const std::vector<std::vector<double>>& analytic) {
    if (recovered.empty() || analytic.empty())
        throw std::invalid_argument("span_angle: empty basis");
    const int dim = static_cast<int>(recovered[0].size());
    Eigen::MatrixXd Q(dim, recovered.size()), B(dim, analytic.size());
    for (std::size_t j = 0; j < recovered.size(); ++j)
        for (int i = 0; i < dim; ++i) Q(i, j) = recovered[j][i];
    for (std::size_t j = 0; j < analytic.size(); ++j)
        for (int i = 0; i < dim; ++i) B(i, j) = analytic[j][i];
    // orthonormalize both, then principal angles from the cross Gram matrix
    Eigen::HouseholderQR<Eigen::MatrixXd> qrQ(Q), qrB(B);
    Eigen::MatrixXd Qo = qrQ.householderQ() *
                         Eigen::MatrixXd::Identity(dim, static_cast<int>(recovered.size()));
    Eigen::MatrixXd Bo = qrB.householderQ() *
                         Eigen::MatrixXd::Identity(dim, static_cast<int>(analytic.size()));
    Eigen::BDCSVD<Eigen::MatrixXd> svd(Qo.transpose() * Bo);
    const double cmin =
        std::min(1.0, svd.singularValues()(svd.singularValues().size() - 1));
    return std::acos(cmin);
}

namespace {

// coframe rows (coefficients in dx,dy,dz) normalized so that
// w1(V)=1, w2(V)=-1, w3(V)=0, hence (w1+w2+w3)(V)=0
std::array<Vec3, 3> coframe_at(const GridWebSpec& web3, const Vec3& p) {
    const Vec3 v = web3.curve_field(p);
    if (std::abs(v[0]) < 1e-12 || std::abs(v[1]) < 1e-12)
        throw std::invalid_argument(
            "connection_and_curvature: degenerate curve field for the (x,y) 3-web");
    return {Vec3{1.0 / v[0], 0.0, 0.0}, Vec3{0.0, -1.0 / v[1], 0.0},
            Vec3{-v[2] / v[0], 0.0, 1.0}};
}

struct StructureCoeffs {
    double a, b, q, p;
    double obstruction;  // size of terms incompatible with the web structure
    double scale;
};

StructureCoeffs structure_at(const GridWebSpec& web3, const Vec3& p, double h) {
    // exterior derivative of each coframe row by central differences:
    // components in the coordinate basis (dx^dy, dx^dz, dy^dz)
    std::array<std::array<double, 3>, 3> d{};
    for (int axis = 0; axis < 3; ++axis) {
        Vec3 pp = p, pm = p;
        pp[axis] += h;
        pm[axis] -= h;
        const auto fp = coframe_at(web3, pp), fm = coframe_at(web3, pm);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const double dc = (fp[i][j] - fm[i][j]) / (2.0 * h);  // d_axis c_ij
                // contribution of (d_axis c_ij) dx_axis ^ dx_j
                if (axis == 0 && j == 1) d[i][0] += dc;
                if (axis == 1 && j == 0) d[i][0] -= dc;
                if (axis == 0 && j == 2) d[i][1] += dc;
                if (axis == 2 && j == 0) d[i][1] -= dc;
                if (axis == 1 && j == 2) d[i][2] += dc;
                if (axis == 2 && j == 1) d[i][2] -= dc;
            }
    }

    const auto f = coframe_at(web3, p);
    auto wedge = [](const Vec3& u, const Vec3& v) {
        return Vec3{u[0] * v[1] - u[1] * v[0], u[0] * v[2] - u[2] * v[0],
                    u[1] * v[2] - u[2] * v[1]};
    };
    const Vec3 w12 = wedge(f[0], f[1]), w13 = wedge(f[0], f[2]), w23 = wedge(f[1], f[2]);
    Eigen::Matrix3d W;
    for (int i = 0; i < 3; ++i) {
        W(i, 0) = w12[i];
        W(i, 1) = w13[i];
        W(i, 2) = w23[i];
    }
    const Eigen::Matrix3d Winv = W.inverse();

    auto expand = [&](const std::array<double, 3>& comp) {
        Eigen::Vector3d rhs(comp[0], comp[1], comp[2]);
        Eigen::Vector3d c = Winv * rhs;
        return Vec3{c(0), c(1), c(2)};  // coefficients of w1^w2, w1^w3, w2^w3
    };
    const Vec3 c1 = expand(d[0]);  // dw1 = a w1^w2 + b w1^w3 (+ obstruction w2^w3)
    const Vec3 c2 = expand(d[1]);  // dw2 = p w2^w3 + q w2^w1 (+ obstruction w1^w3)

    StructureCoeffs sc;
    sc.a = c1[0];
    sc.b = c1[1];
    sc.q = -c2[0];
    sc.p = c2[2];
    sc.scale = std::max({1.0, std::abs(sc.a), std::abs(sc.b), std::abs(sc.q),
                         std::abs(sc.p)});
    // existence of the connection needs d(w1^w2)=0, i.e. p = b, and no
    // structure-violating wedge components
    sc.obstruction = std::max({std::abs(c1[2]), std::abs(c2[1]), std::abs(sc.p - sc.b)});
    return sc;
}

Vec3 gamma_at(const GridWebSpec& web3, const Vec3& p, double h) {
    const StructureCoeffs sc = structure_at(web3, p, h);
    const auto f = coframe_at(web3, p);
    Vec3 g{};
    for (int j = 0; j < 3; ++j)
        g[j] = sc.q * f[0][j] + sc.a * f[1][j] + sc.b * f[2][j];
    return g;
}

}  // namespace

ConnectionReport connection_and_curvature(const GridWebSpec& web3, const Vec3& p,
                                          double h) {
    ConnectionReport rep;
    const StructureCoeffs sc = structure_at(web3, p, h);
    rep.existence_residual = sc.obstruction / sc.scale;
    rep.connection_exists = rep.existence_residual <= 1e-3;
    rep.gamma = gamma_at(web3, p, h);
    if (!rep.connection_exists) return rep;

    // curvature d(gamma) by a second level of central differences
    std::array<Vec3, 3> dg;  // dg[axis] = d gamma / d axis
    for (int axis = 0; axis < 3; ++axis) {
        Vec3 pp = p, pm = p;
        pp[axis] += h;
        pm[axis] -= h;
        const Vec3 gp = gamma_at(web3, pp, h), gm = gamma_at(web3, pm, h);
        for (int j = 0; j < 3; ++j) dg[axis][j] = (gp[j] - gm[j]) / (2.0 * h);
    }
    rep.dgamma = {dg[1][2] - dg[2][1],    // dy^dz
                  dg[2][0] - dg[0][2],    // dz^dx
                  dg[0][1] - dg[1][0]};   // dx^dy
    rep.curvature_norm = std::sqrt(rep.dgamma[0] * rep.dgamma[0] +
                                   rep.dgamma[1] * rep.dgamma[1] +
                                   rep.dgamma[2] * rep.dgamma[2]);
    return rep;
}

}  // namespace slab
