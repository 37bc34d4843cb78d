#include "ocmsd/modesolver.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ocmsd/tridiag.hpp"

namespace ocmsd {

namespace {

// Flip so the first significant lobe below the surface is positive.
void fix_sign(Eigen::Ref<Eigen::VectorXd> psi) {
    const double peak = psi.cwiseAbs().maxCoeff();
    for (Eigen::Index l = 0; l < psi.size(); ++l) {
        if (std::abs(psi(l)) > 1e-8 * peak) {
            if (psi(l) < 0.0) psi = -psi;
            return;
        }
    }
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

std::vector<double> wavenumber_squared_profile(const Environment& env, const DepthGrid& grid,
                                               double frequency_hz) {
    if (!(frequency_hz > 0.0)) throw std::invalid_argument("frequency must be positive");
    const double omega = 2.0 * kPi * frequency_hz;
    std::vector<double> k2(static_cast<std::size_t>(grid.size()));
    const double H = env.water_depth();
    for (int l = 0; l <= grid.last_index(); ++l) {
        const double z = std::min(grid.depth(l), H);
        const double k = omega / speed_at(env.ssp(), z);
        k2[static_cast<std::size_t>(l)] = k * k;
    }
    return k2;
}

std::vector<double> propagate_recurrence(std::span<const double> k_squared, double step, double xi,
                                         double u0, double u1) {
    const std::size_t n = k_squared.size();
    std::vector<double> u(n, 0.0);
    if (n == 0) return u;
    u[0] = u0;
    if (n == 1) return u;
    u[1] = u1;
    const double h2 = step * step;
    const double xi2 = xi * xi;
    for (std::size_t l = 1; l + 1 < n; ++l)
        u[l + 1] = (2.0 - h2 * (k_squared[l] - xi2)) * u[l] - u[l - 1];
    return u;
}

std::vector<double> propagate_recurrence(const Environment& env, const DepthGrid& grid,
                                         double frequency_hz, double xi) {
    const double xi_max = 2.0 * kPi * frequency_hz / env.ssp().min_speed();
    if (!(xi > 0.0 && xi < xi_max))
        throw std::domain_error("wavenumber " + std::to_string(xi) +
                                " outside (0, 2*pi*f/min c): no turning point in the water column");
    const auto k2 = wavenumber_squared_profile(env, grid, frequency_hz);
    return propagate_recurrence(k2, grid.step(), xi, 0.0, grid.step());
}

int count_order(const Eigen::Ref<const Eigen::VectorXd>& psi) {
    const double peak = psi.cwiseAbs().maxCoeff();
    if (peak == 0.0) return 0;
    int changes = 0;
    double prev = 0.0;
    for (Eigen::Index l = 0; l < psi.size(); ++l) {
        const double v = psi(l);
        if (std::abs(v) <= 1e-10 * peak) continue;
        if (prev != 0.0 && (v > 0.0) != (prev > 0.0)) ++changes;
        prev = v;
    }
    return changes + 1;
}

ModeSet candidate_mode_set(const Environment& env, const DepthGrid& grid, double frequency_hz,
                           double xi_anchor, const WavenumberBand& band) {
    const auto k2 = wavenumber_squared_profile(env, grid, frequency_hz);
    return candidate_mode_set(k2, grid, xi_anchor, band);
}

ModeSet candidate_mode_set(std::span<const double> k_squared, const DepthGrid& grid,
                           double xi_anchor, const WavenumberBand& band) {
    if (!(band.xi_max > band.xi_min) || !(band.xi_min > 0.0))
        throw std::invalid_argument("candidate band is empty");
    if (!band.contains(xi_anchor)) throw std::invalid_argument("anchor wavenumber outside the band");
    const int L = grid.last_index();
    if (static_cast<int>(k_squared.size()) != L + 1)
        throw std::invalid_argument("k^2 profile does not match the grid");
    const double h = grid.step();
    const double inv_h2 = 1.0 / (h * h);

    // A node of the trial solution sitting on the bottom makes the closure
    // singular; nudge the anchor and try again.
    double anchor = xi_anchor;
    std::vector<double> u;
    for (int attempt = 0;; ++attempt) {
        u = propagate_recurrence(k_squared, h, anchor, 0.0, h);
        if (std::abs(u[L]) >= 1e-12 * max_abs(u)) break;
        if (attempt == 5)
            throw std::runtime_error("trial solution keeps a node at the bottom after 5 perturbations");
        const double sign = (attempt % 2 == 0) ? 1.0 : -1.0;
        anchor = xi_anchor * (1.0 + sign * 1e-7 * (attempt / 2 + 1));
    }

    // Unknowns psi_1..psi_L. Rows 1..L-1 are the recurrence; the last row
    // psi_{L-1}/h^2 + c psi_L = lambda psi_L is satisfied by the trial solution.
    std::vector<double> diag(static_cast<std::size_t>(L));
    std::vector<double> off(static_cast<std::size_t>(L - 1), inv_h2);
    for (int l = 1; l < L; ++l) diag[static_cast<std::size_t>(l - 1)] = -2.0 * inv_h2 + k_squared[l];
    diag[static_cast<std::size_t>(L - 1)] = anchor * anchor - inv_h2 * (u[L - 1] / u[L]);

    const double lo = band.xi_min * band.xi_min * (1.0 - 1e-12);
    const double hi = band.xi_max * band.xi_max * (1.0 + 1e-12);
    const auto eig = tridiag_eigen_window(diag, off, lo, hi);

    const int M = static_cast<int>(eig.values.size());
    ModeSet out{grid, {}, Eigen::MatrixXd::Zero(L + 1, M), {}, ModeKind::Candidate, anchor, {}};
    out.wavenumbers.resize(static_cast<std::size_t>(M));
    out.orders.resize(static_cast<std::size_t>(M));
    const double inv_sqrt_h = 1.0 / std::sqrt(h);
    for (int j = 0; j < M; ++j) {
        const int src = M - 1 - j;  // descending wavenumber
        out.wavenumbers[static_cast<std::size_t>(j)] = std::sqrt(std::max(eig.values(src), 0.0));
        out.functions.col(j).tail(L) = eig.vectors.col(src) * inv_sqrt_h;
        fix_sign(out.functions.col(j));
        out.orders[static_cast<std::size_t>(j)] = count_order(out.functions.col(j));
    }
    return out;
}

ModeSet reference_mode_set(const Environment& env, const DepthGrid& grid, double frequency_hz,
                           const ReferenceSolverOptions& opts) {
    if (!env.halfspace()) throw std::invalid_argument("reference solver needs a seabed halfspace");
    const auto& hs = *env.halfspace();
    const double omega = 2.0 * kPi * frequency_hz;
    const double kb = omega / hs.speed_mps;
    const double kw = omega / env.ssp().min_speed();
    const auto k2 = wavenumber_squared_profile(env, grid, frequency_hz);
    const int L = grid.last_index();
    const double h = grid.step();

    // Ghost-node form of psi'(H) = -(gamma_b / rho_ratio) psi(H), gamma_b = sqrt(xi^2 - kb^2).
    auto mismatch = [&](double xi) {
        const auto u = propagate_recurrence(k2, h, xi, 0.0, h);
        const double g = std::sqrt(std::max(xi * xi - kb * kb, 0.0)) / hs.density_ratio;
        const double dL = 2.0 - h * h * (k2[L] - xi * xi);
        return (u[L] * (dL + 2.0 * h * g) - 2.0 * u[L - 1]) / max_abs(u);
    };

    std::vector<double> roots;
    const int n = std::max(opts.bracket_points, 2);
    double x_prev = kb;
    double f_prev = mismatch(x_prev);
    for (int i = 1; i <= n; ++i) {
        const double x = kb + (kw - kb) * static_cast<double>(i) / n;
        const double fx = mismatch(x);
        if (f_prev == 0.0) {
            roots.push_back(x_prev);
        } else if ((fx < 0.0) != (f_prev < 0.0) && fx != 0.0) {
            double a = x_prev, b = x, fa = f_prev;
            while (b - a > opts.wavenumber_tol) {
                const double mid = 0.5 * (a + b);
                const double fm = mismatch(mid);
                if ((fm < 0.0) == (fa < 0.0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        x_prev = x;
        f_prev = fx;
    }
    // the open band excludes kb itself
    std::erase_if(roots, [&](double r) { return !(r > kb && r < kw); });
    std::sort(roots.begin(), roots.end(), std::greater<>());

    const int M = static_cast<int>(roots.size());
    ModeSet out{grid, roots, Eigen::MatrixXd::Zero(L + 1, M), {}, ModeKind::Reference, 0.0, {}};
    out.orders.resize(static_cast<std::size_t>(M));
    out.tail_fraction.resize(static_cast<std::size_t>(M));
    if (M == 0) {
        std::cerr << "warning: no trapped modes between " << kb << " and " << kw << " 1/m at "
                  << frequency_hz << " Hz\n";
        return out;
    }
    for (int j = 0; j < M; ++j) {
        const double xi = roots[static_cast<std::size_t>(j)];
        const auto u = propagate_recurrence(k2, h, xi, 0.0, h);
        Eigen::VectorXd psi = Eigen::Map<const Eigen::VectorXd>(u.data(), L + 1);
        const double water = psi.squaredNorm() * h;
        const double gamma = std::sqrt(xi * xi - kb * kb);
        const double tail = psi(L) * psi(L) / (2.0 * hs.density_ratio * gamma);
        out.tail_fraction[static_cast<std::size_t>(j)] = tail / (water + tail);
        psi /= std::sqrt(water);
        fix_sign(psi);
        out.functions.col(j) = psi;
        out.orders[static_cast<std::size_t>(j)] = count_order(psi);
    }
    return out;
}

Eigen::MatrixXd sample_at_depths(const ModeSet& modes, std::span<const double> depths) {
    const int L = modes.grid.last_index();
    const double h = modes.grid.step();
    const double bottom = modes.grid.bottom();
    Eigen::MatrixXd out(static_cast<Eigen::Index>(depths.size()), modes.size());
    for (std::size_t r = 0; r < depths.size(); ++r) {
        const double z = depths[r];
        if (!(z >= 0.0 && z <= bottom * (1.0 + 1e-12)))
            throw std::domain_error("sample depth " + std::to_string(z) + " m outside the water column");
        const double t = std::min(z / h, static_cast<double>(L));
        int l = static_cast<int>(std::floor(t));
        if (l >= L) l = L - 1;
        const double frac = t - l;
        const auto row = static_cast<Eigen::Index>(r);
        if (frac == 0.0)
            out.row(row) = modes.functions.row(l);
        else
            out.row(row) = (1.0 - frac) * modes.functions.row(l) + frac * modes.functions.row(l + 1);
    }
    return out;
}

Eigen::MatrixXd gram_matrix(const ModeSet& modes) {
    return modes.functions.transpose() * modes.functions * modes.grid.step();
}

}  // namespace ocmsd
