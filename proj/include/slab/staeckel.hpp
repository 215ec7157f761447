#pragma once

#include <array>
#include <optional>
#include <string>

#include "slab/linalg.hpp"
#include "slab/poly.hpp"

namespace slab {

/// Closed coordinate box [x0,x1]x[y0,y1]x[z0,z1] on which the metric data
/// is certified nondegenerate.
struct WorkingBox {
    std::array<std::array<double, 2>, 3> range{};

    bool contains(const Vec3& p, double slack = 0.0) const {
        for (int i = 0; i < 3; ++i)
            if (p[i] < range[i][0] - slack || p[i] > range[i][1] + slack) return false;
        return true;
    }
    double lo(int i) const { return range[i][0]; }
    double hi(int i) const { return range[i][1]; }
};

/// The 3x3 matrix of univariate polynomials
///   E(x) K(x) P(x)
///   F(y) L(y) Q(y)
///   G(z) M(z) R(z)
/// defining the metric and its two commuting quadratic integrals.
struct StaeckelData {
    std::array<std::array<Poly1, 3>, 3> rows;
    WorkingBox box;

    Mat3 values(const Vec3& p) const {
        Mat3 m;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m(i, j) = rows[i][j](p[i]);
        return m;
    }
};

/// Pointwise determinant, first/second/third-column cofactors and their
/// exact gradients. All downstream coefficients are ratios of these.
struct StaeckelEval {
    Grad3 delta;                      // det of the data matrix
    std::array<Grad3, 3> phi1;        // Phi^{i1}
    std::array<Grad3, 3> phi2;        // Phi^{i2}
    std::array<Grad3, 3> phi3;        // Phi^{i3}
};

StaeckelEval evaluate_staeckel(const StaeckelData& data, const Vec3& p);

/// Diagonal quadratic form field over the box: three velocity-form
/// coefficients (dx^2, dy^2, dz^2) at a point, with exact gradients.
struct DiagonalField {
    std::array<Grad3, 3> coeff;
    Vec3 values() const { return {coeff[0].v, coeff[1].v, coeff[2].v}; }
    SymForm3 form() const { return SymForm3::diag(coeff[0].v, coeff[1].v, coeff[2].v); }
};

/// Metric g = diag(Delta/Phi^{11}, Delta/Phi^{21}, Delta/Phi^{31}).
/// Throws std::domain_error when Delta or a cofactor vanishes or the
/// signature is not Riemannian at the point.
DiagonalField metric(const StaeckelData& data, const Vec3& p);

/// The two commuting integrals as diagonal velocity forms,
/// I_k coefficient i = Delta * Phi^{ik} / (Phi^{i1})^2.
struct IntegralPair {
    DiagonalField I2, I3;
};
IntegralPair integrals(const StaeckelData& data, const Vec3& p);

/// Reduced parameterization a=E/P, k=K/P, b=F/Q, l=L/Q, c=G/R, m=M/R and
/// delta = a(l-m)+b(m-k)+c(k-l); Delta = PQR*delta.
struct ReducedForm {
    double a, k, b, l, c, m;
    double delta;
    bool degenerate;  // delta == 0
};
ReducedForm reduced_form(const StaeckelData& data, const Vec3& p);

/// Vandermonde specialization: rows (1, psi_i, psi_i^2), with the middle row
/// negated so that ascending psi values over the box give Riemannian
/// signature (the plain Vandermonde cofactors alternate in sign).
StaeckelData vandermonde(const Poly1& psi1, const Poly1& psi2, const Poly1& psi3,
                         const WorkingBox& box);

struct Certificate {
    bool ok = false;
    Vec3 violation_point{};
    std::string what;
};

/// Sample a grid_n^3 grid over the box and check Delta != 0, first-column
/// cofactors != 0 and metric coefficients > 0. Violations are reported,
/// not thrown.
Certificate certify(const StaeckelData& data, const WorkingBox& box, int grid_n);

inline Certificate certify(const StaeckelData& data, int grid_n = 8) {
    return certify(data, data.box, grid_n);
}

}  // namespace slab
