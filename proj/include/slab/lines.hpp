#pragma once

#include <array>
#include <string>

#include "slab/dynamics.hpp"
#include "slab/linalg.hpp"
#include "slab/poly.hpp"

namespace slab {

/// Line in Plücker coordinates: direction (p,q,r) and moment (a,b,c) with
/// a = qz - ry, b = rx - pz, c = py - qx for any point (x,y,z) on the line.
struct PluckerLine {
    double p = 0.0, q = 0.0, r = 0.0;
    double a = 0.0, b = 0.0, c = 0.0;

    double plucker_identity() const { return a * p + b * q + c * r; }
    PluckerLine scaled(double s) const { return {s * p, s * q, s * r, s * a, s * b, s * c}; }
};

/// Build the line through a point with a given direction. Throws on zero
/// direction. The Plücker identity holds exactly by construction.
PluckerLine line_through(const Vec3& point, const Vec3& dir);

/// Quadratic form on line space, symmetric 6x6 acting on (p,q,r,a,b,c).
struct QuadraticComplex {
    std::array<std::array<double, 6>, 6> m{};

    double operator()(const PluckerLine& L) const;
    static QuadraticComplex tangent_complex(double A, double B, double C);
};

/// Value of I2 = A a^2 + B b^2 + C c^2 - BC p^2 - AC q^2 - AB r^2; zero iff
/// the line is tangent to the quadric x^2/A + y^2/B + z^2/C = 1.
double tangent_complex_value(double A, double B, double C, const PluckerLine& L);

/// J2 = (B+C)p^2 + (A+C)q^2 + (A+B)r^2 - a^2 - b^2 - c^2.
double second_complex_value(double A, double B, double C, const PluckerLine& L);

/// Residual of the confocal pencil identity at parameter t:
///   I2 - t J2 - (p^2+q^2+r^2) t^2,
/// which coincides with tangent_complex_value(A+t, B+t, C+t, L) identically,
/// so it vanishes exactly on tangent lines of the confocal member at t.
/// Throws when the member degenerates (A+t, B+t or C+t vanishes).
double confocal_identity_residual(double A, double B, double C, double t,
                                  const PluckerLine& L);

/// Exact tangent line of the ellipsoid x^2/A + y^2/B + z^2/C = 1: surface
/// point from spherical angles, direction = raw_dir projected onto the
/// tangent plane. Throws if the projected direction vanishes.
PluckerLine tangent_line(double A, double B, double C, double theta, double phi,
                         const Vec3& raw_dir);

/// Classify a line against the ellipsoid by the sign of the tangent complex:
/// "secant" (<0), "tangent" (~0), "external" (>0).
std::string classify_line(double A, double B, double C, const PluckerLine& L,
                          double tol = 1e-9);

/// The moment coordinates as canonical phase observables on flat space:
/// a = py z - pz y, b = pz x - px z, c = px y - py x.
Poly6 moment_a();
Poly6 moment_b();
Poly6 moment_c();

/// Flat-space kinetic energy H = (px^2 + py^2 + pz^2)/2.
Poly6 flat_hamiltonian_poly();

struct SymmetryPair {
    PolyObservable I1;  // linear integral generating the symmetry
    PolyObservable I2;  // quadratic partner, {H,I2} = {I1,I2} = 0
};

/// Translation case: I1 = pz,
/// I2 = Q(px,py,pz) + A c^2 + B c pz + C c px + D c py,
/// Q given by coefficients (pp, qq, rr, pq, pr, qr).
SymmetryPair translation_integrals(const std::array<double, 6>& Q, double A, double B,
                                   double C, double D);

/// Rotation case: I1 = c,
/// I2 = A1(px^2+py^2) + A2 pz^2 + B1(a^2+b^2) + B2 c^2 + C1(a py - b px) + C2 c pz.
SymmetryPair rotation_integrals(double A1, double A2, double B1, double B2, double C1,
                                double C2);

/// Screw case (alpha != 0): I1 = alpha pz + c,
/// I2 = A(px^2+py^2) + B pz^2 + C c^2 + D c pz.
SymmetryPair screw_integrals(double alpha, double A, double B, double C, double D);

/// Hessian in the momenta of an observable's defining polynomial at a fixed
/// spatial point; the quadratic forms fed to simultaneous_diag_test.
SymForm3 momentum_hessian(const Poly6& poly, const Vec3& pos);

/// Coefficient of omega ^ d(omega) in the volume basis dy^dx^dz for the screw
/// one-form omega = alpha dz + y dx - x dy, by exact exterior algebra on
/// polynomial one-forms. Equals 2 alpha at every point.
double screw_nonintegrability(double alpha, const Vec3& pt);

/// Hamiltonian of a z-stratified flat-fiber metric, given the co-metric
/// entries of the (x,y) block as polynomials in z:
///   H = (h11(z) px^2 + 2 h12(z) px py + h22(z) py^2 + pz^2)/2.
/// px and py are exact linear integrals of the flow of any such H.
PolyObservable stratified_hamiltonian(const Poly1& h11, const Poly1& h12,
                                      const Poly1& h22);

}  // namespace slab
