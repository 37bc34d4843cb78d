// Symmetric tridiagonal eigensolvers.
//
// tridiag_eigensolve returns the full spectrum (dense eigenvector matrix).
// tridiag_eigen_window returns only the eigenpairs inside an interval using
// Sturm-sequence bisection and inverse iteration, which is what the mode
// dictionary needs: a few dozen eigenpairs of a matrix with ~10^3 rows.
#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace ocmsd {

struct TridiagEigen {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // column j belongs to values(j), unit Euclidean norm
};

TridiagEigen tridiag_eigensolve(std::span<const double> diag, std::span<const double> offdiag);

/// Number of eigenvalues strictly below x.
int sturm_count(std::span<const double> diag, std::span<const double> offdiag, double x);

/// Eigenpairs with eigenvalue in [lo, hi], ascending.
TridiagEigen tridiag_eigen_window(std::span<const double> diag, std::span<const double> offdiag,
                                  double lo, double hi);

}  // namespace ocmsd
