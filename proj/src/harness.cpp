#include "ocmsd/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "ocmsd/metrics.hpp"
#include "ocmsd/parallel.hpp"
#include "ocmsd/timeseries.hpp"

namespace ocmsd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

double ArrayLayout::aperture_m() const {
    if (!explicit_depths.empty()) return explicit_depths.back() - explicit_depths.front();
    return spacing_m * (count - 1);
}

ArrayGeometry ArrayLayout::build(double water_depth) const {
    if (!explicit_depths.empty()) return ArrayGeometry(explicit_depths, water_depth);
    if (!bottom_anchored) return ArrayGeometry::uniform(first_depth_m, spacing_m, count, water_depth);
    std::vector<double> z(static_cast<std::size_t>(std::max(count, 0)));
    for (int i = 0; i < count; ++i)
        z[static_cast<std::size_t>(i)] = water_depth - first_depth_m - (count - 1 - i) * spacing_m;
    return ArrayGeometry(std::move(z), water_depth);
}

WavenumberBand EstimatorSettings::band_for(const Environment& env, double frequency_hz) const {
    if (band) return *band;
    if (band_speeds) return wavenumber_bounds_from_speeds(frequency_hz, band_speeds->first, band_speeds->second);
    return wavenumber_bounds(env, frequency_hz, speed_margin_mps);
}

SolverConfig EstimatorSettings::solver_config(const Environment& env, double frequency_hz, double epsilon) const {
    SolverConfig cfg;
    cfg.epsilon_n = epsilon;
    cfg.band = band_for(env, frequency_hz);
    cfg.coarse_grid_points = coarse_grid_points;
    cfg.refine_tolerance = refine_tolerance;
    cfg.lasso_max_iter = lasso_max_iter;
    cfg.lasso_rel_tol = lasso_rel_tol;
    cfg.relax_infeasible = relax_infeasible;
    return cfg;
}

const char* to_string(SweepKind kind) {
    switch (kind) {
        case SweepKind::Snr: return "snr";
        case SweepKind::Aperture: return "aperture";
        case SweepKind::Elements: return "elements";
        case SweepKind::Frequency: return "frequency";
        case SweepKind::WindowLength: return "window";
    }
    return "?";
}

SweepKind sweep_kind_from_string(const std::string& name) {
    for (SweepKind k : {SweepKind::Snr, SweepKind::Aperture, SweepKind::Elements, SweepKind::Frequency,
                        SweepKind::WindowLength})
        if (name == to_string(k)) return k;
    throw std::invalid_argument("unknown sweep kind: " + name);
}

std::vector<double> default_sweep_values(SweepKind kind) {
    std::vector<double> v;
    auto range = [&](double a, double b, double step) {
        const int n = static_cast<int>(std::floor((b - a) / step + 1e-9)) + 1;
        for (int i = 0; i < n; ++i) v.push_back(a + i * step);
    };
    switch (kind) {
        case SweepKind::Snr: range(-20.0, 40.0, 2.5); break;
        case SweepKind::Aperture: range(4.0, 29.0, 1.0); break;
        case SweepKind::Elements: range(5.0, 30.0, 1.0); break;
        case SweepKind::Frequency: range(50.0, 1000.0, 50.0); break;
        case SweepKind::WindowLength: range(-10.0, 6.0, 1.0); std::reverse(v.begin(), v.end()); break;
    }
    return v;
}

void SweepSpec::validate() const {
    if (values.empty()) throw std::invalid_argument("sweep has no values");
    if (trials < 1) throw std::invalid_argument("sweep needs at least one trial per value");
    if (!base.environment.halfspace()) throw std::invalid_argument("simulation needs a bottom halfspace");
    // every value must yield a valid array and source
    for (double v : values) {
        const Scenario s = scenario_at(*this, v);
        s.array.build(s.environment.water_depth());
        validate_source(s.source, s.environment);
    }
}

const char* to_string(TrialStatus status) {
    switch (status) {
        case TrialStatus::Ok: return "ok";
        case TrialStatus::Infeasible: return "infeasible";
        case TrialStatus::Degenerate: return "degenerate";
        case TrialStatus::Failed: return "failed";
    }
    return "?";
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t value_index, std::uint64_t trial) {
    std::uint64_t h = splitmix64(master_seed);
    h = splitmix64(h ^ (value_index + 0x632BE59BD9B4E019ULL));
    h = splitmix64(h ^ (trial + 0x85157AF5ULL));
    return h;
}

Scenario scenario_at(const SweepSpec& spec, double value) {
    Scenario s = spec.base;
    switch (spec.kind) {
        case SweepKind::Snr: s.snr_db = value; break;
        case SweepKind::Aperture:
            if (s.array.count < 2) throw std::invalid_argument("aperture sweep needs at least two elements");
            s.array.explicit_depths.clear();
            s.array.spacing_m = value / (s.array.count - 1);
            break;
        case SweepKind::Elements: {
            const int n = static_cast<int>(std::lround(value));
            if (n < 2) throw std::invalid_argument("element sweep needs at least two elements");
            const double aperture = spec.base.array.aperture_m();
            s.array.explicit_depths.clear();
            s.array.count = n;
            s.array.spacing_m = aperture / (n - 1);
            break;
        }
        case SweepKind::Frequency: s.source.frequency_hz = value; break;
        case SweepKind::WindowLength: break;  // the window enters in simulate_snapshot
    }
    return s;
}

TrialContext prepare_trial_context(const SweepSpec& spec, double value) {
    Scenario s = scenario_at(spec, value);
    ArrayGeometry array = s.array.build(s.environment.water_depth());
    const double f = s.source.frequency_hz;
    const DepthGrid grid = DepthGrid::for_frequency(s.environment, f);
    ModeSet reference = reference_mode_set(s.environment, grid, f);
    if (reference.empty()) throw std::runtime_error("no trapped modes at this frequency");
    ModeAmplitudes amps = mode_amplitudes(reference, s.source);
    PressureSnapshot clean = synthesize_pressure(reference, amps, array, f);
    return {std::move(s), std::move(array), std::move(reference), std::move(amps), std::move(clean)};
}

std::vector<Eigen::VectorXcd> simulated_aux_bins(int elements, double sigma, std::uint64_t seed, int count) {
    std::mt19937_64 rng(splitmix64(seed ^ 0xA5A5A5A5A5A5A5A5ULL));
    std::normal_distribution<double> gauss(0.0, sigma / std::sqrt(2.0));
    std::vector<Eigen::VectorXcd> bins(static_cast<std::size_t>(count), Eigen::VectorXcd::Zero(elements));
    if (sigma == 0.0) return bins;
    for (auto& b : bins)
        for (Eigen::Index n = 0; n < b.size(); ++n) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            b(n) = complex(re, im);
        }
    return bins;
}

PressureSnapshot simulate_snapshot(const SweepSpec& spec, const TrialContext& ctx, double value,
                                   std::uint64_t seed) {
    if (spec.kind != SweepKind::WindowLength) {
        PressureSnapshot snap = add_noise(ctx.clean, ctx.scenario.snr_db, seed);
        snap.aux_bins = simulated_aux_bins(snap.size(), snap.noise_sigma.value_or(0.0), seed);
        return snap;
    }
    const double fs = spec.window.sample_rate_hz;
    const double T = std::pow(10.0, value / 10.0);
    const double noise_std =
        std::isinf(ctx.scenario.snr_db) ? 0.0 : time_noise_std_for_snr(ctx.clean, fs, ctx.scenario.snr_db);
    const TimeSeries ts = synthesize_time_series(ctx.clean, fs, T, noise_std, seed);
    ExtractedSnapshot x = extract_snapshot(ts, ctx.clean.frequency_hz, T);
    const double K = x.window_samples;
    x.snapshot.noise_sigma = std::sqrt(K) * noise_std;
    x.snapshot.snr_db = ctx.scenario.snr_db + 10.0 * std::log10(K / fs);
    x.snapshot.seed = seed;
    return std::move(x.snapshot);
}

TrialRecord run_trial(const SweepSpec& spec, const TrialContext& ctx, int value_index, int trial) {
    const auto t0 = std::chrono::steady_clock::now();
    TrialRecord r;
    r.value_index = value_index;
    r.sweep_value = spec.values.at(static_cast<std::size_t>(value_index));
    r.trial = trial;
    r.seed = derive_seed(spec.master_seed, static_cast<std::uint64_t>(value_index), static_cast<std::uint64_t>(trial));
    r.reference_modes = ctx.reference.size();
    const double z_true = ctx.scenario.source.depth_m;
    r.estimated_depth_m = kNaN;
    r.ae_m = kNaN;
    r.amplitude_error = kNaN;

    try {
        const PressureSnapshot snap = simulate_snapshot(spec, ctx, r.sweep_value, r.seed);
        r.snr_db = snap.snr_db.value_or(kNoiseFree);
        const double eps = epsilon_from_noise(snap, spec.estimator.epsilon_mode);
        const double f = ctx.scenario.source.frequency_hz;
        const Environment water = ctx.scenario.environment.water_only();
        const SolverConfig cfg = spec.estimator.solver_config(water, f, eps);

        ModeEstimate est = estimate_modes(snap, water, cfg);
        r.estimated_modes = est.modes.size();
        r.epsilon_n = est.epsilon_n;
        r.epsilon_relaxed = est.epsilon_relaxed;
        r.anchor_xi = est.anchor_xi;

        const std::vector<int> pairing = match_modes(est.modes.wavenumbers, ctx.reference.wavenumbers);
        r.wavenumbers.assign(pairing.size(), kNaN);
        r.wavenumber_errors.assign(pairing.size(), kNaN);
        for (std::size_t m = 0; m < pairing.size(); ++m) {
            if (pairing[m] < 0) continue;
            r.wavenumbers[m] = est.modes.wavenumbers[static_cast<std::size_t>(pairing[m])];
            r.wavenumber_errors[m] = r.wavenumbers[m] - ctx.reference.wavenumbers[m];
        }
        r.mode_function_errors = mode_function_error(est.modes, ctx.reference, pairing);

        if (est.degenerate) {
            r.status = TrialStatus::Degenerate;
            r.message = "all amplitudes are zero";
        } else {
            const ModeAmplitudes aligned{align_amplitudes(est.amplitudes, pairing)};
            if (aligned.values.norm() > 0.0) r.amplitude_error = amplitude_error(aligned, ctx.reference_amplitudes);
            const DepthResult depth = estimate_depth(est, spec.estimator.dss);
            r.estimated_depth_m = depth.estimated_depth_m;
            r.ae_m = std::abs(z_true - depth.estimated_depth_m);
            r.status = TrialStatus::Ok;
        }
    } catch (const std::runtime_error& e) {
        const std::string what = e.what();
        r.status = what.find("epsilon_n too small") != std::string::npos ? TrialStatus::Infeasible
                   : what.find("degenerate") != std::string::npos      ? TrialStatus::Degenerate
                                                                       : TrialStatus::Failed;
        r.message = what;
    } catch (const std::exception& e) {
        r.status = TrialStatus::Failed;
        r.message = e.what();
    }
    r.runtime_s = seconds_since(t0);
    return r;
}

TrialRecord run_trial(const SweepSpec& spec, int value_index, int trial) {
    const TrialContext ctx = prepare_trial_context(spec, spec.values.at(static_cast<std::size_t>(value_index)));
    return run_trial(spec, ctx, value_index, trial);
}

SweepAggregate aggregate(double value, const std::vector<TrialRecord>& rows) {
    SweepAggregate a;
    a.sweep_value = value;
    double sum_ae = 0.0, sum_ae2 = 0.0, sum_amp = 0.0, sum_phi = 0.0, runtime = 0.0;
    int amp_count = 0, phi_count = 0;
    for (const auto& r : rows) {
        ++a.trials;
        runtime += r.runtime_s;
        a.reference_modes = r.reference_modes;
        if (r.status != TrialStatus::Ok) {
            ++a.excluded;
            continue;
        }
        ++a.used;
        sum_ae += r.ae_m;
        sum_ae2 += r.ae_m * r.ae_m;
        if (std::isfinite(r.amplitude_error)) {
            sum_amp += r.amplitude_error;
            ++amp_count;
        }
        for (double e : r.mode_function_errors)
            if (std::isfinite(e)) {
                sum_phi += e;
                ++phi_count;
            }
    }
    a.mean_runtime_s = a.trials ? runtime / a.trials : 0.0;
    if (a.used == 0) {
        a.mae_m = a.std_ae_m = kNaN;
    } else {
        a.mae_m = sum_ae / a.used;
        a.std_ae_m = std::sqrt(std::max(0.0, sum_ae2 / a.used - a.mae_m * a.mae_m));
    }
    a.mae_amplitude = amp_count ? sum_amp / amp_count : kNaN;
    a.mae_mode_function = phi_count ? sum_phi / phi_count : kNaN;
    return a;
}

SweepResult run_sweep(const SweepSpec& spec) {
    spec.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t nv = spec.values.size();
    const auto J = static_cast<std::size_t>(spec.trials);

    std::vector<std::optional<TrialContext>> contexts(nv);
    std::vector<std::string> context_errors(nv);
    parallel_for(nv, spec.workers, [&](std::size_t v) {
        try {
            contexts[v] = prepare_trial_context(spec, spec.values[v]);
        } catch (const std::exception& e) {
            context_errors[v] = e.what();
        }
    });

    SweepResult out{.spec = spec, .trials = std::vector<TrialRecord>(nv * J), .aggregates = {}, .wall_time_s = 0.0};
    parallel_for(nv * J, spec.workers, [&](std::size_t idx) {
        const std::size_t v = idx / J;
        const int j = static_cast<int>(idx % J);
        if (contexts[v]) {
            out.trials[idx] = run_trial(spec, *contexts[v], static_cast<int>(v), j);
            return;
        }
        TrialRecord& r = out.trials[idx];
        r.value_index = static_cast<int>(v);
        r.sweep_value = spec.values[v];
        r.trial = j;
        r.seed = derive_seed(spec.master_seed, v, static_cast<std::uint64_t>(j));
        r.status = TrialStatus::Failed;
        r.message = context_errors[v];
        r.estimated_depth_m = r.ae_m = r.amplitude_error = kNaN;
    });

    for (std::size_t v = 0; v < nv; ++v) {
        const std::vector<TrialRecord> rows(out.trials.begin() + static_cast<std::ptrdiff_t>(v * J),
                                            out.trials.begin() + static_cast<std::ptrdiff_t>((v + 1) * J));
        out.aggregates.push_back(aggregate(spec.values[v], rows));
    }
    out.wall_time_s = seconds_since(t0);
    return out;
}

}  // namespace ocmsd
