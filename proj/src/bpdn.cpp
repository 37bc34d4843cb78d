#include "ocmsd/bpdn.hpp"

#include <cmath>
#include <stdexcept>

namespace ocmsd {

Eigen::VectorXcd complex_shrink(const Eigen::VectorXcd& v, double tau) {
    Eigen::VectorXcd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v(i));
        out(i) = mag > tau ? v(i) * ((mag - tau) / mag) : std::complex<double>(0.0, 0.0);
    }
    return out;
}

int lasso_apg(const Eigen::MatrixXcd& gram, const Eigen::VectorXcd& corr, double lipschitz,
              double lambda, Eigen::VectorXcd& a, const BpdnOptions& opts) {
    const double step = 1.0 / lipschitz;
    const double tau = lambda * step;
    Eigen::VectorXcd x = a;
    Eigen::VectorXcd y = x;
    Eigen::VectorXcd x_new(x.size());
    double t = 1.0;
    int it = 0;
    for (; it < opts.max_iter; ++it) {
        x_new = complex_shrink(y - step * (gram * y - corr), tau);
        const Eigen::VectorXcd diff = x_new - x;
        // gradient-based adaptive restart
        if ((y - x_new).dot(diff).real() > 0.0) {
            t = 1.0;
            y = x_new;
        } else {
            const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
            y = x_new + ((t - 1.0) / t_new) * diff;
            t = t_new;
        }
        x.swap(x_new);
        const double dn = diff.norm();
        if (dn <= opts.rel_tol * x.norm() || dn == 0.0) {
            ++it;
            break;
        }
    }
    a = x;
    return it;
}

BpdnResult bpdn_solve(const Eigen::MatrixXd& dictionary, const Eigen::VectorXcd& p, double epsilon,
                      const BpdnOptions& opts) {
    return bpdn_solve(Eigen::MatrixXcd(dictionary.cast<std::complex<double>>()), p, epsilon, opts);
}

BpdnResult bpdn_solve(const Eigen::MatrixXcd& dictionary, const Eigen::VectorXcd& p, double epsilon,
                      const BpdnOptions& opts) {
    const Eigen::Index N = dictionary.rows();
    const Eigen::Index M = dictionary.cols();
    if (N < 1 || M < 1) throw std::invalid_argument("dictionary must be at least 1x1");
    if (p.size() != N) throw std::invalid_argument("pressure length does not match dictionary rows");
    if (!dictionary.allFinite() || !p.allFinite() || !std::isfinite(epsilon))
        throw std::invalid_argument("non-finite input to bpdn_solve");
    if (epsilon < 0.0) throw std::invalid_argument("epsilon must be non-negative");

    BpdnResult res;
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(dictionary);
    const Eigen::VectorXcd a_ls = cod.solve(p);
    res.ls_residual = (p - dictionary * a_ls).norm();
    if (res.ls_residual > epsilon) {
        res.status = BpdnStatus::Infeasible;
        res.residual = res.ls_residual;
        return res;
    }
    res.status = BpdnStatus::Solved;

    auto finish = [&](Eigen::VectorXcd a, double lambda) {
        res.residual = (p - dictionary * a).norm();
        res.l1_norm = a.cwiseAbs().sum();
        res.a = std::move(a);
        res.lambda = lambda;
        return res;
    };

    const double pnorm = p.norm();
    if (pnorm <= epsilon) return finish(Eigen::VectorXcd::Zero(M), 0.0);
    // only least-squares solutions are feasible
    if (epsilon <= res.ls_residual * (1.0 + 1e-6)) return finish(a_ls, 0.0);

    const Eigen::MatrixXcd gram = dictionary.adjoint() * dictionary;
    const Eigen::VectorXcd corr = dictionary.adjoint() * p;
    const double lipschitz =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(gram, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
    const double lambda_max = corr.cwiseAbs().maxCoeff();

    // residual(lambda) is non-decreasing; keep r(lo) <= eps < r(hi)
    double log_hi = std::log(lambda_max);
    double log_lo = log_hi + std::log(1e-10);
    Eigen::VectorXcd a = Eigen::VectorXcd::Zero(M);
    Eigen::VectorXcd best;
    double best_lambda = 0.0;
    for (int step = 0; step < opts.lambda_steps; ++step) {
        const double lambda = std::exp(0.5 * (log_lo + log_hi));
        res.iterations += lasso_apg(gram, corr, lipschitz, lambda, a, opts);
        const double r = (p - dictionary * a).norm();
        if (r <= epsilon) {
            log_lo = std::log(lambda);
            best = a;
            best_lambda = lambda;
            if (r >= epsilon * (1.0 - opts.residual_rel_tol)) break;
        } else {
            log_hi = std::log(lambda);
        }
    }
    if (best.size() == 0) {
        const double lambda = std::exp(log_lo);
        res.iterations += lasso_apg(gram, corr, lipschitz, lambda, a, opts);
        if ((p - dictionary * a).norm() <= epsilon) return finish(a, lambda);
        return finish(a_ls, 0.0);
    }
    return finish(best, best_lambda);
}

}  // namespace ocmsd
