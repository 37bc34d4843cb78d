/**
 * @file harness.hpp
 * @brief Monte-Carlo sweeps over SNR, array aperture, element count, frequency
 *        and FFT window length.
 *
 * A sweep runs J seeded trials per sweep value. Each trial synthesises a
 * snapshot from the truth model (reference modes with the bottom halfspace),
 * estimates modes from the water column only, runs the depth-sign search and
 * scores the result against the truth. Seeds are derived from
 * (master_seed, value index, trial index) so any row can be replayed alone,
 * and records are written by index so the worker count never changes output.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ocmsd/dss.hpp"
#include "ocmsd/envarray.hpp"
#include "ocmsd/fieldsynth.hpp"
#include "ocmsd/modesolver.hpp"
#include "ocmsd/ocms.hpp"

namespace ocmsd {

struct ArrayLayout {
    double first_depth_m = 1.0;  // distance of the end element from the anchoring boundary
    double spacing_m = 1.0;
    int count = 30;
    bool bottom_anchored = false;  // deepest element at H - first_depth_m
    std::vector<double> explicit_depths;  // overrides the uniform layout when non-empty

    double aperture_m() const;
    ArrayGeometry build(double water_depth) const;
};

struct Scenario {
    Environment environment;  // truth model, halfspace required for simulation
    ArrayLayout array;
    SourceSpec source;
    double snr_db = 30.0;  // kNoiseFree for a clean snapshot
};

struct EstimatorSettings {
    std::optional<WavenumberBand> band;                   // fixed band
    std::optional<std::pair<double, double>> band_speeds;  // (slow, fast) m/s, scales with f
    double speed_margin_mps = 300.0;
    EpsilonMode epsilon_mode = EpsilonMode::KnownSigma;
    int coarse_grid_points = 2000;
    double refine_tolerance = 1e-6;
    int lasso_max_iter = 5000;
    double lasso_rel_tol = 1e-9;
    bool relax_infeasible = true;
    DssOptions dss;

    WavenumberBand band_for(const Environment& env, double frequency_hz) const;
    SolverConfig solver_config(const Environment& env, double frequency_hz, double epsilon) const;
};

struct WindowSettings {
    double sample_rate_hz = 2000.0;
    // snr_db of the scenario is the snapshot SNR a one-second window would see;
    // a window of T seconds gains 10 log10(T)
};

enum class SweepKind { Snr, Aperture, Elements, Frequency, WindowLength };

const char* to_string(SweepKind kind);
SweepKind sweep_kind_from_string(const std::string& name);

/// Default value grids of the simulation study.
std::vector<double> default_sweep_values(SweepKind kind);

struct SweepSpec {
    SweepKind kind = SweepKind::Snr;
    std::vector<double> values;
    int trials = 50;
    std::uint64_t master_seed = 1;
    Scenario base;
    EstimatorSettings estimator;
    WindowSettings window;
    int workers = 1;

    void validate() const;
};

enum class TrialStatus { Ok, Infeasible, Degenerate, Failed };
const char* to_string(TrialStatus status);

struct TrialRecord {
    double sweep_value = 0.0;
    int value_index = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    TrialStatus status = TrialStatus::Failed;
    std::string message;
    double snr_db = 0.0;  // snapshot SNR actually simulated
    double estimated_depth_m = 0.0;
    double ae_m = 0.0;
    int reference_modes = 0;
    int estimated_modes = 0;
    double epsilon_n = 0.0;
    bool epsilon_relaxed = false;
    double anchor_xi = 0.0;
    std::vector<double> wavenumbers;          // estimates paired to reference order (NaN if unpaired)
    std::vector<double> wavenumber_errors;    // k_hat - k
    double amplitude_error = 0.0;
    std::vector<double> mode_function_errors;  // per reference mode
    double runtime_s = 0.0;
};

struct SweepAggregate {
    double sweep_value = 0.0;
    int trials = 0;
    int used = 0;      // trials with status Ok
    int excluded = 0;  // failed, infeasible or degenerate trials
    double mae_m = 0.0;
    double std_ae_m = 0.0;  // population standard deviation of AE
    double mae_amplitude = 0.0;
    double mae_mode_function = 0.0;  // mean over trials and paired modes
    int reference_modes = 0;
    double mean_runtime_s = 0.0;
};

struct SweepResult {
    SweepSpec spec;
    std::vector<TrialRecord> trials;  // ordered by (value index, trial)
    std::vector<SweepAggregate> aggregates;
    double wall_time_s = 0.0;
};

/// 64-bit mix of the three indices (splitmix64 finaliser).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t value_index, std::uint64_t trial);

/// The base scenario with the sweep variable set to `value`.
Scenario scenario_at(const SweepSpec& spec, double value);

/// Everything a trial needs that does not depend on the noise draw.
struct TrialContext {
    Scenario scenario;
    ArrayGeometry array;
    ModeSet reference;
    ModeAmplitudes reference_amplitudes;
    PressureSnapshot clean;
};

TrialContext prepare_trial_context(const SweepSpec& spec, double value);

/// Simulated snapshot for one trial (noise, aux bins, or the time-series path
/// for window sweeps).
PressureSnapshot simulate_snapshot(const SweepSpec& spec, const TrialContext& ctx, double value,
                                   std::uint64_t seed);

/// Complex Gaussian noise vectors with the snapshot's sigma, standing in for
/// signal-free neighbouring bins.
std::vector<Eigen::VectorXcd> simulated_aux_bins(int elements, double sigma, std::uint64_t seed, int count = 4);

TrialRecord run_trial(const SweepSpec& spec, const TrialContext& ctx, int value_index, int trial);
TrialRecord run_trial(const SweepSpec& spec, int value_index, int trial);

SweepAggregate aggregate(double value, const std::vector<TrialRecord>& rows);

SweepResult run_sweep(const SweepSpec& spec);

}  // namespace ocmsd
