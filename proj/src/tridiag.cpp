#include "ocmsd/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ocmsd {

namespace {

void check_shape(std::span<const double> diag, std::span<const double> offdiag) {
    if (diag.empty()) throw std::invalid_argument("tridiagonal matrix must have size >= 1");
    if (offdiag.size() + 1 != diag.size())
        throw std::invalid_argument("off-diagonal length must be diagonal length - 1");
}

double gershgorin_norm(std::span<const double> d, std::span<const double> e) {
    double nrm = 0.0;
    const std::size_t n = d.size();
    for (std::size_t i = 0; i < n; ++i) {
        double r = std::abs(d[i]);
        if (i > 0) r += std::abs(e[i - 1]);
        if (i + 1 < n) r += std::abs(e[i]);
        nrm = std::max(nrm, r);
    }
    return nrm;
}

// LU with partial pivoting of T - shift*I, same layout as LAPACK dgttrf.
struct TridiagLU {
    std::vector<double> dl, d, du, du2;
    std::vector<int> ipiv;

    TridiagLU(std::span<const double> diag, std::span<const double> off, double shift, double tiny) {
        const std::size_t n = diag.size();
        d.resize(n);
        for (std::size_t i = 0; i < n; ++i) d[i] = diag[i] - shift;
        dl.assign(off.begin(), off.end());
        du.assign(off.begin(), off.end());
        du2.assign(n > 2 ? n - 2 : 0, 0.0);
        ipiv.resize(n);
        for (std::size_t i = 0; i < n; ++i) ipiv[i] = static_cast<int>(i);

        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (std::abs(d[i]) >= std::abs(dl[i])) {
                if (d[i] == 0.0) d[i] = tiny;
                const double fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                const double fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                const double temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if (i + 2 < n) {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                ipiv[i] = static_cast<int>(i + 1);
            }
        }
        for (auto& v : d)
            if (std::abs(v) < tiny) v = std::copysign(tiny, v == 0.0 ? 1.0 : v);
    }

    void solve(std::vector<double>& b) const {
        const std::size_t n = d.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (ipiv[i] == static_cast<int>(i)) {
                b[i + 1] -= dl[i] * b[i];
            } else {
                const double temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - dl[i] * b[i];
            }
        }
        b[n - 1] /= d[n - 1];
        if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
        for (std::size_t k = n; k-- > 2;) {
            const std::size_t i = k - 2;
            b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
        }
    }
};

// Sturm counts for several shifts in one sweep; the per-shift recurrences are
// independent, which hides the latency of the division chain.
void sturm_counts(std::span<const double> d, std::span<const double> e, std::span<const double> xs,
                  std::span<int> counts) {
    constexpr double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
    const std::size_t m = xs.size();
    std::vector<double> q(m);
    for (std::size_t j = 0; j < m; ++j) {
        double v = d[0] - xs[j];
        v = (v == 0.0) ? -tiny : v;
        q[j] = v;
        counts[j] = v < 0.0 ? 1 : 0;
    }
    for (std::size_t i = 1; i < d.size(); ++i) {
        const double e2 = e[i - 1] * e[i - 1];
        const double di = d[i];
        for (std::size_t j = 0; j < m; ++j) {
            double v = (di - xs[j]) - e2 / q[j];
            v = (v == 0.0) ? -tiny : v;
            q[j] = v;
            counts[j] += v < 0.0 ? 1 : 0;
        }
    }
}

}  // namespace

TridiagEigen tridiag_eigensolve(std::span<const double> diag, std::span<const double> offdiag) {
    check_shape(diag, offdiag);
    const auto n = static_cast<Eigen::Index>(diag.size());
    Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(diag.data(), n);
    Eigen::VectorXd e(std::max<Eigen::Index>(n - 1, 0));
    for (Eigen::Index i = 0; i + 1 < n; ++i) e(i) = offdiag[static_cast<std::size_t>(i)];
    if (n == 1) return {d, Eigen::MatrixXd::Identity(1, 1)};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw std::runtime_error("tridiagonal eigensolve failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

int sturm_count(std::span<const double> d, std::span<const double> e, double x) {
    constexpr double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
    int count = 0;
    double q = d[0] - x;
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < d.size(); ++i) {
        q = (d[i] - x) - e[i - 1] * e[i - 1] / q;
        if (q == 0.0) q = -tiny;
        if (q < 0.0) ++count;
    }
    return count;
}

TridiagEigen tridiag_eigen_window(std::span<const double> diag, std::span<const double> offdiag,
                                  double lo, double hi) {
    check_shape(diag, offdiag);
    if (!(hi >= lo)) throw std::invalid_argument("eigenvalue window must satisfy lo <= hi");
    const std::size_t n = diag.size();
    const double tnorm = std::max(gershgorin_norm(diag, offdiag), 1e-300);

    // eigenvalues equal to hi must be included: widen by a rounding ulp
    const double hi_incl = std::nextafter(hi, std::numeric_limits<double>::infinity());
    const int first = sturm_count(diag, offdiag, lo);
    const int last = sturm_count(diag, offdiag, hi_incl);
    const int m = last - first;

    TridiagEigen out{Eigen::VectorXd(m), Eigen::MatrixXd(static_cast<Eigen::Index>(n), m)};
    if (m == 0) return out;

    // lockstep bisection: count(lo_k) <= first + k < count(hi_k)
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const auto mm = static_cast<std::size_t>(m);
    std::vector<double> blo(mm, lo), bhi(mm, hi_incl), mids(mm);
    std::vector<int> counts(mm);
    for (int step = 0; step < 200; ++step) {
        bool done = true;
        for (std::size_t k = 0; k < mm; ++k) {
            mids[k] = 0.5 * (blo[k] + bhi[k]);
            if (bhi[k] - blo[k] > 1e-7 * std::max(std::abs(blo[k]), std::abs(bhi[k])) + 4.0 * eps * tnorm)
                done = false;
        }
        if (done) break;
        sturm_counts(diag, offdiag, mids, counts);
        for (std::size_t k = 0; k < mm; ++k) {
            if (counts[k] > first + static_cast<int>(k))
                bhi[k] = mids[k];
            else
                blo[k] = mids[k];
        }
    }

    // inverse iteration from the bracket midpoint, Rayleigh quotient for the value
    const double tiny = eps * tnorm;
    const double cluster_gap = 1e-3 * tnorm;
    std::vector<double> b(n);
    auto rayleigh = [&](const std::vector<double>& v) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double tv = diag[i] * v[i];
            if (i > 0) tv += offdiag[i - 1] * v[i - 1];
            if (i + 1 < n) tv += offdiag[i] * v[i + 1];
            s += v[i] * tv;
        }
        return s;
    };
    for (int k = 0; k < m; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        const double shift = 0.5 * (blo[kk] + bhi[kk]);
        TridiagLU lu(diag, offdiag, shift, tiny);
        // deterministic, non-degenerate start vector
        for (std::size_t i = 0; i < n; ++i) b[i] = 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i) + k);
        for (int iter = 0; iter < 3; ++iter) {
            lu.solve(b);
            for (int j = k - 1; j >= 0 && shift - out.values(j) < cluster_gap; --j) {
                double dot = 0.0;
                for (std::size_t i = 0; i < n; ++i) dot += b[i] * out.vectors(static_cast<Eigen::Index>(i), j);
                for (std::size_t i = 0; i < n; ++i) b[i] -= dot * out.vectors(static_cast<Eigen::Index>(i), j);
            }
            double nrm = 0.0;
            for (double v : b) nrm += v * v;
            nrm = std::sqrt(nrm);
            for (double& v : b) v /= nrm;
        }
        const double rq = rayleigh(b);
        const double slack = bhi[kk] - blo[kk] + 4.0 * eps * tnorm;
        out.values(k) = (rq >= blo[kk] - slack && rq <= bhi[kk] + slack) ? rq : shift;
        for (std::size_t i = 0; i < n; ++i) out.vectors(static_cast<Eigen::Index>(i), k) = b[i];
    }
    return out;
}

}  // namespace ocmsd
