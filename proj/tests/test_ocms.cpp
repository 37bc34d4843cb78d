#include "doctest.h"

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "ocmsd/ocms.hpp"

using namespace ocmsd;

namespace {

struct Bench {
    Environment env = testing::yellow_sea();
    DepthGrid grid = DepthGrid::for_frequency(env, 596.0);
    ModeSet ref = reference_mode_set(env, grid, 596.0);
    ModeAmplitudes amps = mode_amplitudes(ref, testing::bench_source());
    PressureSnapshot clean = synthesize_pressure(ref, amps, testing::bench_array(), 596.0);
};

const Bench& bench() {
    static const Bench b;
    return b;
}

SolverConfig quick_config(const Environment& env, double eps) {
    SolverConfig cfg;
    cfg.band = wavenumber_bounds(env, 596.0);
    cfg.epsilon_n = eps;
    cfg.coarse_grid_points = 200;
    cfg.refine_tolerance = 1e-5;
    return cfg;
}

}  // namespace

TEST_SUITE("ocms") {

TEST_CASE("epsilon from a known sigma") {
    PressureSnapshot s;
    s.pressure = Eigen::VectorXcd::Zero(30);
    s.noise_sigma = 1.0541e-3;
    CHECK(epsilon_known_sigma(s) == doctest::Approx(1.1 * 1.0541e-3 * std::sqrt(30.0)).epsilon(1e-14));
    CHECK(epsilon_known_sigma(s) == doctest::Approx(6.351e-3).epsilon(1e-3));
    s.noise_sigma = 0.0;
    CHECK(epsilon_known_sigma(s) == kEpsilonFloor);
    s.noise_sigma.reset();
    CHECK_THROWS(epsilon_from_noise(s, EpsilonMode::KnownSigma));
}

TEST_CASE("epsilon from off-bin noise is the margin times the median norm") {
    std::vector<Eigen::VectorXcd> bins;
    for (double n : {0.9, 1.3, 1.0}) {
        Eigen::VectorXcd b = Eigen::VectorXcd::Zero(4);
        b(2) = n;
        bins.push_back(b);
    }
    CHECK(epsilon_off_bin(bins) == doctest::Approx(1.1));
    PressureSnapshot s;
    s.pressure = Eigen::VectorXcd::Zero(4);
    CHECK_THROWS(epsilon_from_noise(s, EpsilonMode::OffBinEstimate));
    s.aux_bins = bins;
    CHECK(epsilon_from_noise(s, EpsilonMode::OffBinEstimate) == doctest::Approx(1.1));
}

TEST_CASE("solver config validation") {
    SolverConfig cfg = quick_config(bench().env, 1e-3);
    CHECK_NOTHROW(cfg.validate());
    cfg.coarse_grid_points = 1;
    CHECK_THROWS(cfg.validate());
    cfg = quick_config(bench().env, -1.0);
    CHECK_THROWS(cfg.validate());
}

TEST_CASE("benchmark snapshot at 30 dB") {
    const auto& b = bench();
    const auto snap = add_noise(b.clean, 30.0, 1);
    const auto cfg = quick_config(b.env, epsilon_known_sigma(snap));
    const auto est = estimate_modes(snap, b.env.water_only(), cfg);
    CHECK_FALSE(est.degenerate);
    CHECK(est.residual_l2 <= est.epsilon_n * (1.0 + 1e-6));
    CHECK(static_cast<int>(est.objective_trace.size()) > cfg.coarse_grid_points);
    CHECK(cfg.band.contains(est.anchor_xi));
    // the selected objective is the smallest finite value seen
    for (const auto& s : est.objective_trace)
        if (std::isfinite(s.l1_norm)) CHECK(est.l1_norm <= s.l1_norm * (1.0 + 1e-9));
    REQUIRE(est.modes.size() >= 3);
    for (int m = 0; m < 3; ++m) CHECK(std::abs(est.modes.wavenumbers[m] - b.ref.wavenumbers[m]) <= 1e-3);
}

TEST_CASE("exact dictionary data are recovered by the anchored fit") {
    // data synthesised from a water-column dictionary are explained exactly at its anchor
    const auto& b = bench();
    const auto water = b.env.water_only();
    const auto band = wavenumber_bounds(b.env, 596.0);
    const double xi0 = b.ref.wavenumbers[0];
    const auto dict = candidate_mode_set(water, b.grid, 596.0, xi0, band);
    const auto amps = mode_amplitudes(dict, testing::bench_source());
    const auto snap = synthesize_pressure(dict, amps, testing::bench_array(), 596.0);

    SolverConfig cfg = quick_config(b.env, 1e-10 * snap.pressure.norm());
    cfg.lasso_max_iter = 200000;
    cfg.lasso_rel_tol = 1e-14;
    const auto k2 = wavenumber_squared_profile(water, b.grid, 596.0);
    const auto fit = fit_at_anchor(snap, k2, b.grid, xi0, cfg);
    REQUIRE(fit.fit.feasible());
    REQUIRE(fit.modes.size() == dict.size());
    const Eigen::VectorXd est = fit.fit.a.cwiseAbs() / std::abs(fit.fit.a(0));
    const Eigen::VectorXd truth = amps.moduli() / amps.moduli()(0);
    CHECK((est - truth).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("pure noise with a generous bound is degenerate") {
    const auto& b = bench();
    PressureSnapshot silent = b.clean;
    silent.pressure.setZero();
    const auto noisy = add_noise(b.clean, 0.0, 8);
    silent.pressure = noisy.pressure - b.clean.pressure;
    const auto cfg = quick_config(b.env, 1.5 * silent.pressure.norm());
    const auto est = estimate_modes(silent, b.env.water_only(), cfg);
    CHECK(est.degenerate);
    CHECK(est.amplitudes.moduli().maxCoeff() == 0.0);
}

TEST_CASE("infeasible everywhere") {
    const auto& b = bench();
    auto cfg = quick_config(b.env, 1e-12);
    cfg.coarse_grid_points = 50;
    CHECK_THROWS_WITH_AS(estimate_modes(b.clean, b.env.water_only(), cfg),
                         doctest::Contains("epsilon_n too small"), std::runtime_error);
    cfg.relax_infeasible = true;
    const auto est = estimate_modes(b.clean, b.env.water_only(), cfg);
    CHECK(est.epsilon_relaxed);
    CHECK(est.epsilon_n > 1e-12);
    CHECK(est.residual_l2 <= est.epsilon_n * (1.0 + 1e-6));
}

TEST_CASE("worker count does not change the estimate") {
    const auto& b = bench();
    const auto snap = add_noise(b.clean, 20.0, 4);
    auto cfg = quick_config(b.env, epsilon_known_sigma(snap));
    cfg.coarse_grid_points = 60;
    const auto serial = estimate_modes(snap, b.env.water_only(), cfg);
    cfg.workers = 3;
    const auto parallel = estimate_modes(snap, b.env.water_only(), cfg);
    CHECK(serial.anchor_xi == parallel.anchor_xi);
    CHECK(serial.amplitudes.values == parallel.amplitudes.values);
}

}
