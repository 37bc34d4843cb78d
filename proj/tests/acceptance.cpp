// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
// Tolerances are the published ones; nothing is relaxed to make a line pass.
// Criteria that cannot be met by a faithful implementation are reported as
// FAIL with the measured numbers.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "bpdn_oracle.hpp"
#include "fixtures.hpp"
#include "ocmsd/dss.hpp"
#include "ocmsd/harness.hpp"
#include "ocmsd/metrics.hpp"
#include "ocmsd/ocms.hpp"
#include "ocmsd/timeseries.hpp"

using namespace ocmsd;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
    std::printf("criterion %2d %s  %s | %s\n", id, ok ? "PASS" : "FAIL", what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string format(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Scenario bench_scenario(double snr_db) {
    return Scenario{testing::yellow_sea(), ArrayLayout{}, testing::bench_source(), snr_db};
}

SweepSpec bench_spec(SweepKind kind, std::vector<double> values, int trials, int workers) {
    return SweepSpec{.kind = kind,
                     .values = std::move(values),
                     .trials = trials,
                     .master_seed = 1,
                     .base = bench_scenario(30.0),
                     .estimator = {},
                     .window = {},
                     .workers = workers};
}

int hardware_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// ---------------------------------------------------------------------------

void criterion_1() {
    const auto env = testing::yellow_sea();
    const double f = testing::kBenchFrequency;
    const auto t0 = Clock::now();
    const auto grid = DepthGrid::for_frequency(env, f);
    const auto ref = reference_mode_set(env, grid, f);
    const auto clean = synthesize_pressure(ref, mode_amplitudes(ref, testing::bench_source()), testing::bench_array(), f);
    const auto snap = add_noise(clean, 30.0, derive_seed(1, 0, 0));
    EstimatorSettings settings;
    const auto est = estimate_modes(snap, env.water_only(), settings.solver_config(env, f, epsilon_known_sigma(snap)));
    const auto depth = estimate_depth(est);
    const double elapsed = seconds_since(t0);
    const double err = std::abs(depth.estimated_depth_m - testing::kBenchSourceDepth);
    report(1, err <= 0.2 && elapsed < 60.0, "596 Hz benchmark at 30 dB: depth within 0.2 m, under 60 s single-threaded",
           format("z_hat = %.2f m (error %.2f m), %.1f s", depth.estimated_depth_m, err, elapsed));
}

void criterion_2() {
    const int seeds = 20;
    auto spec = bench_spec(SweepKind::Snr, {30.0}, seeds, hardware_workers());
    const auto result = run_sweep(spec);
    double worst_leading = 0.0;
    int failed_rows = 0;
    std::vector<double> sum(10, 0.0);
    std::vector<int> count(10, 0);
    for (const auto& t : result.trials) {
        if (t.status != TrialStatus::Ok) {
            ++failed_rows;
            continue;
        }
        for (int m = 0; m < 10 && m < static_cast<int>(t.wavenumber_errors.size()); ++m) {
            const double e = std::abs(t.wavenumber_errors[m]);
            if (std::isnan(e)) {
                if (m < 5) worst_leading = INFINITY;
                continue;
            }
            if (m < 5) worst_leading = std::max(worst_leading, e);
            sum[m] += e;
            ++count[m];
        }
    }
    std::string means;
    bool monotone = true;
    double prev = 0.0;
    for (int m = 0; m < 10; ++m) {
        const double mean = count[m] ? sum[m] / count[m] : NAN;
        means += format("%s%.1e", m ? " " : "", mean);
        if (!(mean >= prev)) monotone = false;
        prev = mean;
    }
    const bool ok = failed_rows == 0 && worst_leading <= 1e-3 && monotone;
    report(2, ok, "wavenumbers: modes 1-5 within 1e-3 over 20 seeds, mean error non-decreasing for modes 1-10",
           format("max |dk| modes 1-5 = %.2e, non-decreasing = %s, mean |dk| = [%s]", worst_leading,
                  monotone ? "yes" : "no", means.c_str()));
}

void criterion_3() {
    double worst = 0.0;
    int sets = 0;
    const auto env = testing::yellow_sea();
    for (double f : {100.0, 300.0, 596.0, 1000.0}) {
        const auto grid = DepthGrid::for_frequency(env, f);
        const auto band = wavenumber_bounds(env, f);
        const auto k2 = wavenumber_squared_profile(env.water_only(), grid, f);
        const int anchors = f == 596.0 ? 400 : 50;
        for (int i = 0; i < anchors; ++i) {
            const double xi = band.xi_min + band.width() * (i + 0.5) / anchors;
            const auto s = candidate_mode_set(k2, grid, xi, band);
            if (s.empty()) continue;
            const Eigen::MatrixXd g = gram_matrix(s);
            worst = std::max(worst, (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff());
            ++sets;
        }
    }
    report(3, worst <= 1e-8, "candidate dictionaries orthonormal within 1e-8",
           format("%d dictionaries, max |G - I| = %.2e", sets, worst));
}

void criterion_4() {
    std::mt19937_64 rng(20240601);
    int certified = 0, agree = 0, feasible = 0;
    const int instances = 200;
    for (int i = 0; i < instances; ++i) {
        const auto s = testing::random_instance(rng);
        const auto r = bpdn_solve(s.dictionary, s.p, s.epsilon);
        feasible += r.feasible() && r.residual <= s.epsilon * (1.0 + 1e-6);
        if (testing::certificate_margin(s) < 1.0) {
            ++certified;
            agree += testing::significant_support(r.a) == testing::oracle_support(s);
        }
    }
    const double rate = certified ? static_cast<double>(agree) / certified : 0.0;
    report(4, certified > 0 && rate >= 0.95 && feasible == instances,
           "BPDN vs exhaustive oracle on 200 random 8x20 3-sparse instances",
           format("support agreement %d/%d low-coherence instances (%.1f%%), feasible %d/%d", agree, certified,
                  100.0 * rate, feasible, instances));
}

void criterion_5() {
    const auto env = testing::yellow_sea();
    const double f = testing::kBenchFrequency;
    const auto grid = DepthGrid::for_frequency(env, f);
    const auto ref = reference_mode_set(env, grid, f);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> depth(1.0, 30.0);
    int sign_ok = 0, depth_ok = 0;
    double worst = 0.0;
    const int cases = 20;
    for (int c = 0; c < cases; ++c) {
        const double zs = depth(rng);
        const Eigen::VectorXd mod = mode_amplitudes(ref, SourceSpec{f, zs, testing::kBenchRange}).moduli();
        const auto r = estimate_depth(ref, std::span<const double>(mod.data(), mod.size()));
        const Eigen::MatrixXd phi = sample_at_depths(ref, std::vector<double>{zs});
        bool signs = true;
        for (int m = 0; m < ref.size(); ++m)
            if (std::abs(phi(0, m)) > 1e-6 && r.selected_signs[m] != mode_sign(phi(0, m))) signs = false;
        const double err = std::abs(r.estimated_depth_m - zs);
        sign_ok += signs;
        depth_ok += err <= grid.step();
        worst = std::max(worst, err);
    }
    report(5, sign_ok == cases && depth_ok == cases, "truth-fed depth-sign search over 20 random source depths",
           format("signs correct %d/%d, depth within one cell (%.3f m) %d/%d, worst error %.2f m", sign_ok, cases,
                  grid.step(), depth_ok, cases, worst));
}

void criterion_6() {
    const std::vector<double> snrs{-20, -10, 0, 10, 20, 30, 40};
    const int workers = hardware_workers();
    auto spec = bench_spec(SweepKind::Snr, snrs, 10, workers);
    const auto result = run_sweep(spec);
    double high = 0.0, low = INFINITY, runtime = 0.0;
    int rows = 0;
    std::string table;
    for (const auto& a : result.aggregates) {
        table += format("%s%g:%.2f", table.empty() ? "" : " ", a.sweep_value, a.mae_m);
        if (a.sweep_value >= 20) high = std::max(high, std::isnan(a.mae_m) ? INFINITY : a.mae_m);
        if (a.sweep_value <= -10) low = std::min(low, std::isnan(a.mae_m) ? INFINITY : a.mae_m);
    }
    for (const auto& t : result.trials) {
        runtime += t.runtime_s;
        ++rows;
    }
    // the full study is 25 SNR points x 50 trials; on fewer than 8 cores the
    // 8-worker wall time is projected from the measured per-trial runtime
    const double per_trial = runtime / rows;
    const double projected = 25 * 50 * per_trial / 8.0;
    report(6, high <= low && projected < 1800.0, "SNR sweep trend (J=10) and full-scale sweep time on 8 workers",
           format("MAE by SNR [%s]; max MAE(>=20 dB) %.2f <= min MAE(<=-10 dB) %.2f; %.2f s/trial -> %.0f s projected "
                  "for 1250 trials on 8 workers (%d hardware threads here)",
                  table.c_str(), high, low, per_trial, projected, workers));
}

void criterion_7() {
    const auto env = testing::yellow_sea();
    const int at_bench = reference_mode_set(env, DepthGrid::for_frequency(env, 596.0), 596.0).size();
    bool monotone = true;
    int prev = 0;
    std::string counts;
    for (double f = 50.0; f <= 1000.0; f += 50.0) {
        const int n = reference_mode_set(env, DepthGrid::for_frequency(env, f), f).size();
        counts += format("%s%d", counts.empty() ? "" : " ", n);
        if (n < prev) monotone = false;
        prev = n;
    }
    report(7, at_bench == 10 && monotone, "exactly 10 trapped modes at 596 Hz; count non-decreasing over 50-1000 Hz",
           format("%d modes at 596 Hz; counts 50..1000 Hz step 50: [%s]", at_bench, counts.c_str()));
}

// J0(x) = (1/pi) int_0^pi cos(x sin t) dt, midpoint rule (spectrally accurate for periodic integrands)
double j0_oracle(double x) {
    const int n = 4000;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::cos(x * std::sin(kPi * (i + 0.5) / n));
    return s / n;
}

void criterion_8() {
    double worst_j = 0.0, worst_y = 0.0, worst_q = 0.0;
    for (int i = 0; i <= 4990; ++i) {
        const double x = 0.1 + 0.01 * i;
        worst_j = std::max(worst_j, std::abs(bessel_j0(x) - std::cyl_bessel_j(0.0, x)));
        worst_y = std::max(worst_y, std::abs(bessel_y0(x) - std::cyl_neumann(0.0, x)));
        if (i % 10 == 0) worst_q = std::max(worst_q, std::abs(bessel_j0(x) - j0_oracle(x)));
    }
    const double x = 1e4, mag = std::sqrt(2.0 / (kPi * x));
    const double rel = std::abs(std::abs(hankel1_0(x)) - mag) / mag;
    report(8, worst_j <= 1e-8 && worst_y <= 1e-8 && worst_q <= 1e-8 && rel <= 1e-6,
           "J0, Y0 within 1e-8 on [0.1, 50]; |H0(1e4)| within 1e-6 relative",
           format("max |dJ0| %.1e, max |dY0| %.1e, J0 vs quadrature %.1e, |H0| rel error %.1e", worst_j, worst_y,
                  worst_q, rel));
}

void criterion_9() {
    const auto grid = DepthGrid(0.05, 620);
    const double H = grid.bottom();
    const Eigen::VectorXd t = dirichlet_template(20.0, 10, H, grid);
    const double self = kl_divergence(t, t, grid);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double min_kl = INFINITY;
    for (int k = 0; k < 100; ++k) {
        Eigen::VectorXd p(grid.size()), q(grid.size());
        for (int l = 0; l < grid.size(); ++l) {
            p(l) = u(rng) < 0.1 ? 0.0 : u(rng);
            q(l) = 1e-3 + u(rng);
        }
        p /= trapezoid(p, grid.step());
        q /= trapezoid(q, grid.step());
        min_kl = std::min(min_kl, kl_divergence(p, q, grid));
    }
    double worst_int = 0.0;
    int peak_ok = 0, templates = 0;
    for (int M : {1, 4, 10, 20})
        for (double zq : {0.1, 5.0, 12.35, 20.0, 31.0}) {
            const Eigen::VectorXd d = dirichlet_template(zq, M, H, grid);
            worst_int = std::max(worst_int, std::abs(trapezoid(d, grid.step()) - 1.0));
            Eigen::Index peak;
            d.maxCoeff(&peak);
            peak_ok += std::abs(grid.depth(static_cast<int>(peak)) - zq) <= 0.5 * grid.step() + 1e-12;
            ++templates;
        }
    report(9, std::abs(self) <= 1e-12 && min_kl >= -1e-12 && worst_int <= 1e-10 && peak_ok == templates,
           "KL(D, D) = 0, KL >= 0 on 100 pairs, template integrates to 1 and peaks at z_q",
           format("KL(D,D) = %.1e, min KL = %.3e, max |int - 1| = %.1e, peaks at z_q %d/%d", self, min_kl,
                  worst_int, peak_ok, templates));
}

void criterion_10() {
    // round trip: tone + noise -> window DFT -> off-bin epsilon -> modes -> depth
    auto spec = bench_spec(SweepKind::WindowLength, {1.0}, 3, 1);
    spec.base.snr_db = 10.0;
    spec.estimator.epsilon_mode = EpsilonMode::OffBinEstimate;
    const auto ctx = prepare_trial_context(spec, 1.0);
    double worst = 0.0;
    std::string depths;
    for (int t = 0; t < spec.trials; ++t) {
        const auto r = run_trial(spec, ctx, 0, t);
        const double e = r.status == TrialStatus::Ok ? r.ae_m : INFINITY;
        worst = std::max(worst, e);
        depths += format("%s%.2f", depths.empty() ? "" : " ", r.estimated_depth_m);
    }

    // window gain, 50 seeds: measured SNR at T = 1 s and T = 2 s
    const auto& clean = ctx.clean;
    const double fs = spec.window.sample_rate_hz;
    const double sd = time_noise_std_for_snr(clean, fs, 0.0);
    double gain = 0.0;
    const int seeds = 50;
    for (int s = 0; s < seeds; ++s) {
        const auto ts = synthesize_time_series(clean, fs, 2.0, sd, derive_seed(7, 0, s));
        gain += measured_snr_db(extract_snapshot(ts, clean.frequency_hz, 2.0)) -
                measured_snr_db(extract_snapshot(ts, clean.frequency_hz, 1.0));
    }
    gain /= seeds;
    const double expect = 10.0 * std::log10(2.0);
    report(10, worst <= 1.0 && std::abs(gain - expect) <= 1.0,
           "time-series round trip at 10 dB within 1 m; window doubling gains 3 +/- 1 dB",
           format("depths [%s] m (worst error %.2f m); mean gain %.2f dB over %d seeds", depths.c_str(), worst, gain,
                  seeds));
}

}  // namespace

int main() {
    const auto t0 = Clock::now();
    void (*criteria[])() = {criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};
    for (int i = 0; i < 10; ++i) {
        try {
            criteria[i]();
        } catch (const std::exception& e) {
            report(i + 1, false, "threw", e.what());
        }
    }
    std::printf("%d of 10 criteria failed (%.0f s)\n", failures, seconds_since(t0));
    return failures ? 1 : 0;
}
