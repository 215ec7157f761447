#include "slab/linalg.hpp"

#include <Eigen/Dense>
#include <stdexcept>

namespace slab {

double det3(const Mat3& m) {
    const double E = m(0, 0), K = m(0, 1), P = m(0, 2);
    const double F = m(1, 0), L = m(1, 1), Q = m(1, 2);
    const double G = m(2, 0), M = m(2, 1), R = m(2, 2);
    return E * L * R + F * M * P + G * K * Q - E * M * Q - F * K * R - G * L * P;
}

double cofactor3(const Mat3& m, int i, int j) {
    if (i < 1 || i > 3 || j < 1 || j > 3)
        throw std::invalid_argument("cofactor3: indices must be in 1..3");
    const int r0 = (i == 1) ? 1 : 0, r1 = (i == 3) ? 1 : 2;
    const int c0 = (j == 1) ? 1 : 0, c1 = (j == 3) ? 1 : 2;
    const double minor = m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
    return ((i + j) % 2 == 0) ? minor : -minor;
}

static Eigen::Matrix3d to_eigen(const SymForm3& f) {
    Eigen::Matrix3d m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = f(i, j);
    return m;
}

static void require_positive_definite(const Eigen::Matrix3d& g) {
    Eigen::LLT<Eigen::Matrix3d> llt(g);
    if (llt.info() != Eigen::Success)
        throw std::domain_error("metric form is not positive definite");
}

EigenPairs3 generalized_eigen(const SymForm3& I, const SymForm3& g) {
    const Eigen::Matrix3d A = to_eigen(I), B = to_eigen(g);
    require_positive_definite(B);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix3d> solver(A, B);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("generalized eigensolver failed");
    EigenPairs3 out;
    for (int k = 0; k < 3; ++k) {
        out.values[k] = solver.eigenvalues()(k);
        for (int i = 0; i < 3; ++i) out.vectors[k][i] = solver.eigenvectors()(i, k);
    }
    return out;
}

bool simultaneous_diag_test(const std::vector<SymForm3>& forms, const SymForm3& g,
                            double tol) {
    const Eigen::Matrix3d B = to_eigen(g);
    require_positive_definite(B);
    const Eigen::Matrix3d Binv = B.inverse();
    std::vector<Eigen::Matrix3d> ops;
    ops.reserve(forms.size());
    for (const auto& f : forms) ops.push_back(Binv * to_eigen(f));
    for (std::size_t i = 0; i < ops.size(); ++i)
        for (std::size_t j = i + 1; j < ops.size(); ++j) {
            const Eigen::Matrix3d comm = ops[i] * ops[j] - ops[j] * ops[i];
            const double scale = ops[i].norm() * ops[j].norm();
            if (comm.norm() > tol * (scale > 0.0 ? scale : 1.0)) return false;
        }
    return true;
}

Nullspace nullspace_dim(const std::vector<std::vector<double>>& A, double tol) {
    if (A.empty() || A[0].empty())
        throw std::invalid_argument("nullspace_dim: empty matrix");
    const int rows = static_cast<int>(A.size());
    const int cols = static_cast<int>(A[0].size());
    Eigen::MatrixXd M(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(A[i].size()) != cols)
            throw std::invalid_argument("nullspace_dim: ragged matrix");
        for (int j = 0; j < cols; ++j) M(i, j) = A[i][j];
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;

    Nullspace out;
    out.singular_values.assign(sv.data(), sv.data() + sv.size());
    int nonzero = 0;
    if (smax > 0.0) {
        for (int k = 0; k < sv.size(); ++k)
            if (sv(k) >= tol * smax) ++nonzero;
    }
    out.dim = cols - nonzero;
    for (int k = nonzero; k < cols; ++k) {
        std::vector<double> b(cols);
        for (int j = 0; j < cols; ++j) b[j] = svd.matrixV()(j, k);
        out.basis.push_back(std::move(b));
    }
    return out;
}

}  // namespace slab
