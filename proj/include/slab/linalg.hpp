#pragma once

#include <array>
#include <vector>

namespace slab {

using Vec3 = std::array<double, 3>;

/// Plain 3x3 matrix of reals, 0-based storage.
struct Mat3 {
    std::array<std::array<double, 3>, 3> m{};

    double& operator()(int i, int j) { return m[i][j]; }
    double operator()(int i, int j) const { return m[i][j]; }
};

/// Symmetric 3x3 form stored by its six independent entries.
struct SymForm3 {
    // order: xx, yy, zz, xy, xz, yz
    std::array<double, 6> e{};

    static SymForm3 diag(double a, double b, double c) {
        SymForm3 f;
        f.e = {a, b, c, 0.0, 0.0, 0.0};
        return f;
    }
    static SymForm3 identity() { return diag(1.0, 1.0, 1.0); }

    double operator()(int i, int j) const {
        if (i == j) return e[i];
        int a = i < j ? i : j, b = i < j ? j : i;
        if (a == 0 && b == 1) return e[3];
        if (a == 0 && b == 2) return e[4];
        return e[5];
    }
    void set(int i, int j, double v) {
        if (i == j) { e[i] = v; return; }
        int a = i < j ? i : j, b = i < j ? j : i;
        if (a == 0 && b == 1) e[3] = v;
        else if (a == 0 && b == 2) e[4] = v;
        else e[5] = v;
    }
    // quadratic form value on a vector
    double quad(const Vec3& v) const {
        return e[0] * v[0] * v[0] + e[1] * v[1] * v[1] + e[2] * v[2] * v[2] +
               2.0 * (e[3] * v[0] * v[1] + e[4] * v[0] * v[2] + e[5] * v[1] * v[2]);
    }
};

// determinant by the six-term expansion
double det3(const Mat3& m);

// cofactor with sign (-1)^{i+j}; indices 1..3 as in the classical notation
double cofactor3(const Mat3& m, int i, int j);

struct EigenPairs3 {
    std::array<double, 3> values;   // ascending
    std::array<Vec3, 3> vectors;    // g-orthonormal
};

/// Principal invariants and directions of I relative to positive definite g:
/// (I - lambda g) v = 0. Throws std::domain_error if g is not positive definite.
EigenPairs3 generalized_eigen(const SymForm3& I, const SymForm3& g);

/// True iff all operators g^{-1} Q pairwise commute (common g-orthogonal
/// eigenbasis exists). Commutator Frobenius norm compared against
/// tol * |A_i| * |A_j|.
bool simultaneous_diag_test(const std::vector<SymForm3>& forms, const SymForm3& g,
                            double tol = 1e-8);

struct Nullspace {
    int dim = 0;
    std::vector<std::vector<double>> basis;  // orthonormal, each of length = #cols
    std::vector<double> singular_values;     // descending
};

/// Numerical nullspace: singular values below tol * sigma_max count as zero.
/// Matrix given in row-major rows; throws std::invalid_argument if empty.
Nullspace nullspace_dim(const std::vector<std::vector<double>>& A, double tol = 1e-8);

}  // namespace slab
