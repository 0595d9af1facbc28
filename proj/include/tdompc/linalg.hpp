#pragma once

#include <Eigen/Dense>

#include "tdompc/tolerances.hpp"

namespace tdompc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

namespace linalg {

/// Eigenpairs of a symmetric matrix, eigenvalues ascending, eigenvectors in columns.
struct SymmetricEigen {
    Vector values;
    Matrix vectors;
};

/// Symmetric square root and inverse square root of an SPD matrix.
struct SpdFactor {
    Matrix original;
    Matrix sqrt;
    Matrix inv_sqrt;
};

/// lambda_W^-(M) and lambda_W^+(M): extreme eigenvalues of W^{-1/2} M W^{-1/2}.
struct EigenBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Cyclic Jacobi eigensolver. Throws SymmetryError if |M - M^T| exceeds the
/// symmetry tolerance relative to max |entry|.
SymmetricEigen sym_eig(const Matrix& m, const Tolerances& tol = default_tolerances());

/// Largest singular value.
double spectral_norm(const Matrix& m);

/// Throws NotSpdError when lambda_min <= spd_ratio * lambda_max.
SpdFactor spd_factor(const Matrix& m, const Tolerances& tol = default_tolerances());

EigenBounds weighted_eig_bounds(const Matrix& m, const Matrix& w, const Tolerances& tol = default_tolerances());

/// Stabilizing solution of P = Q + A'PA - A'PB (R + B'PB)^{-1} B'PA by fixed-point
/// iteration from P = Q. Throws NonConvergenceError when the iteration cap is hit.
Matrix solve_dare(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r,
                  const Tolerances& tol = default_tolerances());

/// Frobenius norm of the Riccati residual.
double riccati_residual(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r, const Matrix& p);

/// U = Q + A'UA for Schur A. Throws NotSchurError when the spectral radius is >= 1.
Matrix solve_dlyap(const Matrix& a, const Matrix& q, const Tolerances& tol = default_tolerances());

/// Magnitude of the largest eigenvalue of a general square matrix.
double spectral_radius(const Matrix& m);

/// Matrix exponential via scaling and squaring with a [6/6] Pade approximant.
Matrix expm(const Matrix& m);

/// Largest |M - M^T| entry.
double asymmetry(const Matrix& m);

inline Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

/// Throws NonFiniteError when any entry is NaN or infinite.
void require_finite(const Matrix& m, const char* what);

}  // namespace linalg
}  // namespace tdompc
