#include "slab/staeckel.hpp"

#include <cmath>
#include <stdexcept>

namespace slab {

StaeckelEval evaluate_staeckel(const StaeckelData& data, const Vec3& p) {
    // entries with exact gradients; row i depends on coordinate i only
    std::array<std::array<Grad3, 3>, 3> m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = eval_grad(data.rows[i][j], p[i], i);

    auto minor2 = [&](int r0, int c0, int r1, int c1) {
        return m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    };

    StaeckelEval ev;
    // cofactors of column j: Phi^{ij} = (-1)^{i+j} minor(i,j)
    for (int i = 0; i < 3; ++i) {
        const int r0 = (i == 0) ? 1 : 0, r1 = (i == 2) ? 1 : 2;
        Grad3 m1 = minor2(r0, 1, r1, 2);  // delete column 0
        Grad3 m2 = minor2(r0, 0, r1, 2);  // delete column 1
        Grad3 m3 = minor2(r0, 0, r1, 1);  // delete column 2
        const double s = (i % 2 == 0) ? 1.0 : -1.0;
        ev.phi1[i] = s * m1;
        ev.phi2[i] = (-s) * m2;
        ev.phi3[i] = s * m3;
    }
    ev.delta = m[0][0] * ev.phi1[0] + m[1][0] * ev.phi1[1] + m[2][0] * ev.phi1[2];
    return ev;
}

namespace {

const char* factor_name(int i) {
    switch (i) {
        case 0: return "LR-MQ";
        case 1: return "MP-KR";
        default: return "KQ-LP";
    }
}

double data_scale(const StaeckelData& data, const Vec3& p) {
    double s = 0.0;
    Mat3 m = data.values(p);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s = std::max(s, std::abs(m(i, j)));
    return s > 0.0 ? s : 1.0;
}

}  // namespace

DiagonalField metric(const StaeckelData& data, const Vec3& p) {
    const StaeckelEval ev = evaluate_staeckel(data, p);
    const double scale = data_scale(data, p);
    const double tiny = 1e-14 * scale * scale * scale;
    if (std::abs(ev.delta.v) <= tiny)
        throw std::domain_error("staeckel metric singular: Delta vanishes");
    DiagonalField g;
    for (int i = 0; i < 3; ++i) {
        if (std::abs(ev.phi1[i].v) <= 1e-14 * scale * scale)
            throw std::domain_error(std::string("staeckel metric singular: cofactor ") +
                                    factor_name(i) + " vanishes");
        g.coeff[i] = ev.delta / ev.phi1[i];
        if (g.coeff[i].v <= 0.0)
            throw std::domain_error(std::string("staeckel metric signature error: "
                                                "coefficient for axis ") +
                                    "xyz"[i] + " is not positive");
    }
    return g;
}

IntegralPair integrals(const StaeckelData& data, const Vec3& p) {
    const DiagonalField g = metric(data, p);  // shares the singularity checks
    const StaeckelEval ev = evaluate_staeckel(data, p);
    IntegralPair out;
    for (int i = 0; i < 3; ++i) {
        // rho_{ik} = Phi^{ik}/Phi^{i1} times the metric coefficient
        out.I2.coeff[i] = (ev.phi2[i] / ev.phi1[i]) * g.coeff[i];
        out.I3.coeff[i] = (ev.phi3[i] / ev.phi1[i]) * g.coeff[i];
    }
    return out;
}

ReducedForm reduced_form(const StaeckelData& data, const Vec3& p) {
    const Mat3 m = data.values(p);
    const double P = m(0, 2), Q = m(1, 2), R = m(2, 2);
    const double scale = data_scale(data, p);
    if (std::abs(P) <= 1e-14 * scale || std::abs(Q) <= 1e-14 * scale ||
        std::abs(R) <= 1e-14 * scale)
        throw std::domain_error("reduced_form: P, Q or R vanishes at the point");
    ReducedForm rf;
    rf.a = m(0, 0) / P;
    rf.k = m(0, 1) / P;
    rf.b = m(1, 0) / Q;
    rf.l = m(1, 1) / Q;
    rf.c = m(2, 0) / R;
    rf.m = m(2, 1) / R;
    rf.delta = rf.a * (rf.l - rf.m) + rf.b * (rf.m - rf.k) + rf.c * (rf.k - rf.l);
    rf.degenerate = std::abs(rf.delta) <= 1e-12;
    return rf;
}

StaeckelData vandermonde(const Poly1& psi1, const Poly1& psi2, const Poly1& psi3,
                         const WorkingBox& box) {
    StaeckelData d;
    const std::array<const Poly1*, 3> psi{&psi1, &psi2, &psi3};
    for (int i = 0; i < 3; ++i) {
        const double s = (i == 1) ? -1.0 : 1.0;
        d.rows[i][0] = Poly1::constant(s);
        d.rows[i][1] = s * (*psi[i]);
        d.rows[i][2] = s * ((*psi[i]) * (*psi[i]));
    }
    d.box = box;
    return d;
}

Certificate certify(const StaeckelData& data, const WorkingBox& box, int grid_n) {
    if (grid_n < 2)
        throw std::invalid_argument("certify: grid_n must be at least 2");
    Certificate cert;
    for (int ix = 0; ix < grid_n; ++ix)
        for (int iy = 0; iy < grid_n; ++iy)
            for (int iz = 0; iz < grid_n; ++iz) {
                Vec3 p;
                const std::array<int, 3> idx{ix, iy, iz};
                for (int k = 0; k < 3; ++k)
                    p[k] = box.lo(k) +
                           (box.hi(k) - box.lo(k)) * idx[k] / double(grid_n - 1);
                try {
                    metric(data, p);
                } catch (const std::domain_error& e) {
                    cert.ok = false;
                    cert.violation_point = p;
                    cert.what = e.what();
                    return cert;
                }
            }
    cert.ok = true;
    return cert;
}

}  // namespace slab
