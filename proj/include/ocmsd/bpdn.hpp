// Basis pursuit denoising with complex group sparsity:
//
//     minimize  sum_m |a_m|   subject to  ||p - Psi a||_2 <= eps
//
// solved through the penalized form 0.5 ||p - Psi a||^2 + lambda sum_m |a_m|
// (accelerated proximal gradient with complex soft-thresholding) and a
// bisection on lambda that lands the residual on eps.
#pragma once

#include <Eigen/Dense>

namespace ocmsd {

enum class BpdnStatus { Solved, Infeasible };

struct BpdnOptions {
    int max_iter = 5000;       // proximal-gradient iterations per lambda
    double rel_tol = 1e-9;     // stop when ||a_k+1 - a_k|| <= rel_tol ||a_k+1||
    int lambda_steps = 40;     // bisection steps on log(lambda)
    double residual_rel_tol = 1e-7;  // early exit once eps(1 - tol) <= ||r|| <= eps
};

struct BpdnResult {
    BpdnStatus status = BpdnStatus::Infeasible;
    Eigen::VectorXcd a;
    double l1_norm = 0.0;
    double residual = 0.0;
    double lambda = 0.0;
    double ls_residual = 0.0;  // unconstrained least-squares residual
    int iterations = 0;        // total proximal-gradient iterations

    bool feasible() const { return status == BpdnStatus::Solved; }
};

BpdnResult bpdn_solve(const Eigen::MatrixXcd& dictionary, const Eigen::VectorXcd& p, double epsilon,
                      const BpdnOptions& opts = {});

BpdnResult bpdn_solve(const Eigen::MatrixXd& dictionary, const Eigen::VectorXcd& p, double epsilon,
                      const BpdnOptions& opts = {});

/// Penalized problem at a fixed lambda, warm-started from `start`.
/// Exposed for tests; returns the number of iterations used.
int lasso_apg(const Eigen::MatrixXcd& gram, const Eigen::VectorXcd& corr, double lipschitz,
              double lambda, Eigen::VectorXcd& a, const BpdnOptions& opts);

/// Complex soft-thresholding: shrink the modulus by tau, keep the phase.
Eigen::VectorXcd complex_shrink(const Eigen::VectorXcd& v, double tau);

}  // namespace ocmsd
