#include "ocmsd/ocms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ocmsd/parallel.hpp"

namespace ocmsd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieTolerance = 1e-12;

double objective(const BpdnResult& r) { return r.feasible() ? r.l1_norm : kInf; }

}  // namespace

void SolverConfig::validate() const {
    if (!(epsilon_n > 0.0)) throw std::invalid_argument("epsilon_n must be positive");
    if (!(band.xi_max > band.xi_min && band.xi_min > 0.0))
        throw std::invalid_argument("search band is empty");
    if (coarse_grid_points < 10) throw std::invalid_argument("coarse grid needs at least 10 points");
    if (!(refine_tolerance > 0.0)) throw std::invalid_argument("refine tolerance must be positive");
}

BpdnOptions SolverConfig::bpdn_options() const {
    BpdnOptions o;
    o.max_iter = lasso_max_iter;
    o.rel_tol = lasso_rel_tol;
    return o;
}

AnchorFit fit_at_anchor(const PressureSnapshot& snapshot, std::span<const double> k_squared,
                        const DepthGrid& grid, double xi, const SolverConfig& cfg) {
    ModeSet modes = candidate_mode_set(k_squared, grid, xi, cfg.band);
    if (modes.empty()) {
        BpdnResult none;
        none.residual = none.ls_residual = kInf;
        return {std::move(modes), std::move(none)};
    }
    const Eigen::MatrixXd psi = sample_at_depths(modes, snapshot.element_depths_m);
    BpdnResult fit = bpdn_solve(psi, snapshot.pressure, cfg.epsilon_n, cfg.bpdn_options());
    return {std::move(modes), std::move(fit)};
}

ModeEstimate estimate_modes(const PressureSnapshot& snapshot, const Environment& water,
                            const SolverConfig& cfg) {
    cfg.validate();
    if (snapshot.size() < 1 || snapshot.element_depths_m.size() != static_cast<std::size_t>(snapshot.size()))
        throw std::invalid_argument("snapshot depths and pressures disagree");
    const DepthGrid grid = DepthGrid::for_frequency(water, snapshot.frequency_hz, cfg.grid_max_step);
    const auto k2 = wavenumber_squared_profile(water, grid, snapshot.frequency_hz);

    const int n = cfg.coarse_grid_points;
    const double dx = cfg.band.width() / (n - 1);
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = cfg.band.xi_min + i * dx;
    xs.back() = cfg.band.xi_max;

    SolverConfig run = cfg;
    std::vector<double> js(xs.size(), kInf);
    std::vector<double> ls(xs.size(), kInf);
    auto coarse_pass = [&] {
        parallel_for(xs.size(), run.workers, [&](std::size_t i) {
            const BpdnResult r = fit_at_anchor(snapshot, k2, grid, xs[i], run).fit;
            js[i] = objective(r);
            ls[i] = r.ls_residual;
        });
    };
    coarse_pass();
    bool relaxed = false;
    if (cfg.relax_infeasible && std::all_of(js.begin(), js.end(), [](double j) { return std::isinf(j); })) {
        const double floor_ls = *std::min_element(ls.begin(), ls.end());
        if (std::isfinite(floor_ls)) {
            run.epsilon_n = std::max(kEpsilonMargin * floor_ls, cfg.epsilon_n);
            relaxed = true;
            coarse_pass();
        }
    }

    std::vector<ObjectiveSample> trace;
    trace.reserve(xs.size() + 64);
    std::size_t best = xs.size();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        trace.push_back({xs[i], js[i]});
        if (std::isinf(js[i])) continue;
        if (best == xs.size() || js[i] < js[best] - kTieTolerance) best = i;
    }
    if (best == xs.size()) throw std::runtime_error("epsilon_n too small for this snapshot");

    double best_xi = xs[best];
    double best_j = js[best];
    auto consider = [&](double x) {
        const double j = objective(fit_at_anchor(snapshot, k2, grid, x, run).fit);
        trace.push_back({x, j});
        if (j < best_j - kTieTolerance || (std::abs(j - best_j) <= kTieTolerance && x < best_xi)) {
            best_j = j;
            best_xi = x;
        }
        return j;
    };

    // golden-section refinement inside the neighbouring grid cells
    double a = xs[best == 0 ? 0 : best - 1];
    double b = xs[std::min(best + 1, xs.size() - 1)];
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double jc = consider(c);
    double jd = consider(d);
    while (b - a > run.refine_tolerance) {
        if (jc <= jd) {
            b = d;
            d = c;
            jd = jc;
            c = b - invphi * (b - a);
            jc = consider(c);
        } else {
            a = c;
            c = d;
            jc = jd;
            d = a + invphi * (b - a);
            jd = consider(d);
        }
    }

    AnchorFit final_fit = fit_at_anchor(snapshot, k2, grid, best_xi, run);
    const double anchor = final_fit.modes.anchor_xi;
    const double l1 = final_fit.fit.l1_norm;
    return ModeEstimate{.modes = std::move(final_fit.modes),
                        .amplitudes = ModeAmplitudes{final_fit.fit.a},
                        .l1_norm = l1,
                        .residual_l2 = final_fit.fit.residual,
                        .epsilon_n = run.epsilon_n,
                        .epsilon_relaxed = relaxed,
                        .anchor_xi = anchor,
                        .degenerate = l1 == 0.0,
                        .objective_trace = std::move(trace)};
}

double epsilon_known_sigma(const PressureSnapshot& snapshot) {
    if (!snapshot.noise_sigma) throw std::invalid_argument("snapshot carries no noise sigma");
    const double eps = kEpsilonMargin * *snapshot.noise_sigma * std::sqrt(static_cast<double>(snapshot.size()));
    return std::max(eps, kEpsilonFloor);
}

double epsilon_off_bin(std::span<const Eigen::VectorXcd> aux_bins) {
    if (aux_bins.empty()) throw std::invalid_argument("off-bin epsilon needs at least one auxiliary bin");
    std::vector<double> norms;
    norms.reserve(aux_bins.size());
    for (const auto& b : aux_bins) norms.push_back(b.norm());
    std::sort(norms.begin(), norms.end());
    const std::size_t k = norms.size();
    const double median = (k % 2 == 1) ? norms[k / 2] : 0.5 * (norms[k / 2 - 1] + norms[k / 2]);
    return std::max(kEpsilonMargin * median, kEpsilonFloor);
}

double epsilon_from_noise(const PressureSnapshot& snapshot, EpsilonMode mode) {
    switch (mode) {
        case EpsilonMode::KnownSigma: return epsilon_known_sigma(snapshot);
        case EpsilonMode::OffBinEstimate: return epsilon_off_bin(snapshot.aux_bins);
    }
    throw std::invalid_argument("unknown epsilon mode");
}

}  // namespace ocmsd
