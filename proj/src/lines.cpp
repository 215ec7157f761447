#include "slab/lines.hpp"

#include <cmath>
#include <stdexcept>

namespace slab {

PluckerLine line_through(const Vec3& point, const Vec3& dir) {
    if (dir[0] == 0.0 && dir[1] == 0.0 && dir[2] == 0.0)
        throw std::invalid_argument("line_through: zero direction");
    PluckerLine L;
    L.p = dir[0];
    L.q = dir[1];
    L.r = dir[2];
    L.a = dir[1] * point[2] - dir[2] * point[1];
    L.b = dir[2] * point[0] - dir[0] * point[2];
    L.c = dir[0] * point[1] - dir[1] * point[0];
    return L;
}

double QuadraticComplex::operator()(const PluckerLine& L) const {
    const std::array<double, 6> v{L.p, L.q, L.r, L.a, L.b, L.c};
    double acc = 0.0;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) acc += m[i][j] * v[i] * v[j];
    return acc;
}

QuadraticComplex QuadraticComplex::tangent_complex(double A, double B, double C) {
    QuadraticComplex Q;
    Q.m[0][0] = -B * C;
    Q.m[1][1] = -A * C;
    Q.m[2][2] = -A * B;
    Q.m[3][3] = A;
    Q.m[4][4] = B;
    Q.m[5][5] = C;
    return Q;
}

double tangent_complex_value(double A, double B, double C, const PluckerLine& L) {
    return A * L.a * L.a + B * L.b * L.b + C * L.c * L.c - B * C * L.p * L.p -
           A * C * L.q * L.q - A * B * L.r * L.r;
}

double second_complex_value(double A, double B, double C, const PluckerLine& L) {
    return (B + C) * L.p * L.p + (A + C) * L.q * L.q + (A + B) * L.r * L.r -
           L.a * L.a - L.b * L.b - L.c * L.c;
}

double confocal_identity_residual(double A, double B, double C, double t,
                                  const PluckerLine& L) {
    const double scale = std::abs(A) + std::abs(B) + std::abs(C) + std::abs(t);
    if (std::abs(A + t) < 1e-14 * scale || std::abs(B + t) < 1e-14 * scale ||
        std::abs(C + t) < 1e-14 * scale)
        throw std::domain_error("confocal_identity_residual: degenerate confocal member");
    const double I2 = tangent_complex_value(A, B, C, L);
    const double J2 = second_complex_value(A, B, C, L);
    const double dir2 = L.p * L.p + L.q * L.q + L.r * L.r;
    return I2 - t * J2 - dir2 * t * t;
}

PluckerLine tangent_line(double A, double B, double C, double theta, double phi,
                         const Vec3& raw_dir) {
    if (A <= 0.0 || B <= 0.0 || C <= 0.0)
        throw std::invalid_argument("tangent_line: semi-axis parameters must be positive");
    const double st = std::sin(theta), ct = std::cos(theta);
    const Vec3 x{std::sqrt(A) * st * std::cos(phi), std::sqrt(B) * st * std::sin(phi),
                 std::sqrt(C) * ct};
    const Vec3 n{x[0] / A, x[1] / B, x[2] / C};
    const double n2 = n[0] * n[0] + n[1] * n[1] + n[2] * n[2];
    const double proj =
        (raw_dir[0] * n[0] + raw_dir[1] * n[1] + raw_dir[2] * n[2]) / n2;
    Vec3 d{raw_dir[0] - proj * n[0], raw_dir[1] - proj * n[1], raw_dir[2] - proj * n[2]};
    const double len = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    if (len < 1e-12)
        throw std::invalid_argument("tangent_line: direction collapses onto the normal");
    for (auto& v : d) v /= len;
    return line_through(x, d);
}

std::string classify_line(double A, double B, double C, const PluckerLine& L,
                          double tol) {
    const double dir2 = L.p * L.p + L.q * L.q + L.r * L.r;
    const double mom2 = L.a * L.a + L.b * L.b + L.c * L.c;
    const double scale = (std::abs(A) + std::abs(B) + std::abs(C)) *
                         (std::abs(A) + std::abs(B) + std::abs(C)) * (dir2 + mom2);
    const double v = tangent_complex_value(A, B, C, L);
    if (std::abs(v) <= tol * (scale > 0.0 ? scale : 1.0)) return "tangent";
    return v < 0.0 ? "secant" : "external";
}

namespace {

Poly6 var(int i) { return Poly6::variable(static_cast<std::size_t>(i)); }

}  // namespace

Poly6 moment_a() { return var(4) * var(2) - var(5) * var(1); }
Poly6 moment_b() { return var(5) * var(0) - var(3) * var(2); }
Poly6 moment_c() { return var(3) * var(1) - var(4) * var(0); }

Poly6 flat_hamiltonian_poly() {
    return 0.5 * (var(3) * var(3) + var(4) * var(4) + var(5) * var(5));
}

SymmetryPair translation_integrals(const std::array<double, 6>& Q, double A, double B,
                                   double C, double D) {
    const Poly6 px = var(3), py = var(4), pz = var(5);
    const Poly6 c = moment_c();
    Poly6 I2 = Q[0] * (px * px) + Q[1] * (py * py) + Q[2] * (pz * pz) +
               Q[3] * (px * py) + Q[4] * (px * pz) + Q[5] * (py * pz) + A * (c * c) +
               B * (c * pz) + C * (c * px) + D * (c * py);
    return {PolyObservable(pz), PolyObservable(I2)};
}

SymmetryPair rotation_integrals(double A1, double A2, double B1, double B2, double C1,
                                double C2) {
    const Poly6 px = var(3), py = var(4), pz = var(5);
    const Poly6 a = moment_a(), b = moment_b(), c = moment_c();
    Poly6 I2 = A1 * (px * px + py * py) + A2 * (pz * pz) + B1 * (a * a + b * b) +
               B2 * (c * c) + C1 * (a * py - b * px) + C2 * (c * pz);
    return {PolyObservable(c), PolyObservable(I2)};
}

SymmetryPair screw_integrals(double alpha, double A, double B, double C, double D) {
    if (alpha == 0.0)
        throw std::invalid_argument("screw_integrals: alpha must be nonzero");
    const Poly6 px = var(3), py = var(4), pz = var(5);
    const Poly6 c = moment_c();
    Poly6 I1 = alpha * pz + c;
    Poly6 I2 = A * (px * px + py * py) + B * (pz * pz) + C * (c * c) + D * (c * pz);
    return {PolyObservable(I1), PolyObservable(I2)};
}

SymForm3 momentum_hessian(const Poly6& poly, const Vec3& pos) {
    const std::array<double, 6> y{pos[0], pos[1], pos[2], 0.0, 0.0, 0.0};
    // half the Hessian: the symmetric matrix M with F = p^T M p for
    // momentum-quadratic F
    SymForm3 h;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            const Poly6 second = poly.partial(3 + i).partial(3 + j);
            h.set(i, j, 0.5 * second(y));
        }
    return h;
}

double screw_nonintegrability(double alpha, const Vec3& pt) {
    // one-form omega = alpha dz + y dx - x dy with Poly3 coefficients
    std::array<Poly3, 3> w;
    w[0] = Poly3::variable(1);            // y dx
    w[1] = -1.0 * Poly3::variable(0);     // -x dy
    w[2] = Poly3::constant(alpha);        // alpha dz

    // exterior derivative: components on dy^dz, dz^dx, dx^dy
    std::array<Poly3, 3> dw;
    dw[0] = w[2].partial(1) - w[1].partial(2);
    dw[1] = w[0].partial(2) - w[2].partial(0);
    dw[2] = w[1].partial(0) - w[0].partial(1);

    // omega ^ d(omega) on dx^dy^dz, then reexpressed in the dy^dx^dz basis
    const Poly3 vol = w[0] * dw[0] + w[1] * dw[1] + w[2] * dw[2];
    const std::array<double, 3> x{pt[0], pt[1], pt[2]};
    return -vol(x);
}

PolyObservable stratified_hamiltonian(const Poly1& h11, const Poly1& h12,
                                      const Poly1& h22) {
    const Poly6 px = var(3), py = var(4), pz = var(5);
    Poly6 H = 0.5 * (pz * pz);
    auto lift = [](const Poly1& f) {
        Poly6 g;
        const auto& c = f.coeffs();
        for (std::size_t k = 0; k < c.size(); ++k) {
            std::array<int, 6> e{};
            e[2] = static_cast<int>(k);
            g.add_term(e, c[k]);
        }
        return g;
    };
    H = H + 0.5 * (lift(h11) * (px * px)) + lift(h12) * (px * py) +
        0.5 * (lift(h22) * (py * py));
    return PolyObservable(H);
}

}  // namespace slab
