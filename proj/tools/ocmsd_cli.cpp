// ocmsd: command-line front end for simulation, estimation and sweeps.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ocmsd/config.hpp"
#include "ocmsd/io.hpp"
#include "ocmsd/metrics.hpp"
#include "ocmsd/svgplot.hpp"
#include "ocmsd/timeseries.hpp"

namespace fs = std::filesystem;
using namespace ocmsd;

namespace {

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out = ".";
    std::optional<int> workers;
    std::string band;
    std::string epsilon_mode;
};

void add_common(CLI::App* app, Common& c, bool needs_config = true) {
    auto* opt = app->add_option("--config", c.config, "JSON run configuration")->check(CLI::ExistingFile);
    if (needs_config) opt->required();
    app->add_option("--seed", c.seed, "random seed (overrides the config)");
    app->add_option("--out", c.out, "output directory")->capture_default_str();
    app->add_option("--workers", c.workers, "worker threads");
    app->add_option("--band", c.band, "search band xi_min,xi_max in 1/m");
    app->add_option("--epsilon-mode", c.epsilon_mode, "residual bound: known or offbin")
        ->check(CLI::IsMember({"known", "offbin"}));
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> v;
    if (text.find(':') != std::string::npos) {
        // start:stop:step, inclusive of stop
        double a = 0, b = 0, step = 0;
        if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &a, &b, &step) != 3 || step == 0.0 || (b - a) / step < 0)
            throw std::invalid_argument("range must be start:stop:step");
        const int n = static_cast<int>(std::floor((b - a) / step + 1e-9)) + 1;
        for (int i = 0; i < n; ++i) v.push_back(a + i * step);
        return v;
    }
    std::string cell;
    std::istringstream ss(text);
    while (std::getline(ss, cell, ',')) v.push_back(parse_double(cell));
    return v;
}

RunConfig configure(const Common& c) {
    RunConfig cfg = load_config(c.config);
    if (c.seed) cfg.seed = *c.seed;
    if (c.workers) cfg.workers = std::max(1, *c.workers);
    if (!c.band.empty()) {
        const auto b = parse_list(c.band);
        if (b.size() != 2 || !(b[0] < b[1])) throw std::invalid_argument("--band expects xi_min,xi_max");
        cfg.estimator.band = WavenumberBand{b[0], b[1]};
    }
    if (!c.epsilon_mode.empty()) cfg.estimator.epsilon_mode = epsilon_mode_from_string(c.epsilon_mode);
    return cfg;
}

SweepSpec single_value_spec(const RunConfig& cfg) {
    return make_sweep_spec(cfg, SweepKind::Snr, {cfg.scenario.snr_db});
}

void write_svg(const fs::path& p, const std::string& svg) {
    write_file(p, [&](std::ostream& o) { o << svg; });
}

int cmd_simulate(const Common& c, std::optional<double> snr, std::optional<double> series_duration,
                 std::optional<double> sample_rate) {
    RunConfig cfg = configure(c);
    if (snr) cfg.scenario.snr_db = *snr;
    if (sample_rate) cfg.window.sample_rate_hz = *sample_rate;
    const SweepSpec spec = single_value_spec(cfg);
    const TrialContext ctx = prepare_trial_context(spec, cfg.scenario.snr_db);
    const fs::path out(c.out);

    std::cout << "reference modes: " << ctx.reference.size() << "\n";
    if (series_duration) {
        const double rate = cfg.window.sample_rate_hz;
        const double noise = std::isinf(cfg.scenario.snr_db)
                                 ? 0.0
                                 : time_noise_std_for_snr(ctx.clean, rate, cfg.scenario.snr_db);
        const TimeSeries ts = synthesize_time_series(ctx.clean, rate, *series_duration, noise, cfg.seed);
        write_file(out / "timeseries.csv", [&](std::ostream& o) { write_time_series(o, ts); });
        std::cout << "wrote " << (out / "timeseries.csv").string() << "\n";
        return 0;
    }
    const PressureSnapshot snap = simulate_snapshot(spec, ctx, cfg.scenario.snr_db, cfg.seed);
    write_file(out / "snapshot.csv", [&](std::ostream& o) { write_snapshot(o, snap); });
    std::cout << "wrote " << (out / "snapshot.csv").string() << "\n";
    return 0;
}

int cmd_estimate_modes(const Common& c, const std::string& snapshot_path, bool dump_modes) {
    const RunConfig cfg = configure(c);
    const PressureSnapshot snap = read_snapshot(snapshot_path);
    const Environment water = cfg.scenario.environment.water_only();
    const double eps = epsilon_from_noise(snap, cfg.estimator.epsilon_mode);
    SolverConfig solver = cfg.estimator.solver_config(water, snap.frequency_hz, eps);
    solver.workers = cfg.workers;

    const auto t0 = std::chrono::steady_clock::now();
    const ModeEstimate est = estimate_modes(snap, water, solver);
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const fs::path out(c.out);
    write_file(out / "mode_estimate.csv", [&](std::ostream& o) { write_mode_estimate(o, est, snap.frequency_hz, solver.band); });
    write_file(out / "objective_trace.csv", [&](std::ostream& o) { write_objective_trace(o, est.objective_trace); });
    if (dump_modes) write_file(out / "mode_functions.csv", [&](std::ostream& o) { write_mode_functions(o, est.modes); });

    std::cout << "modes: " << est.modes.size() << "  anchor_xi: " << fmt(est.anchor_xi)
              << "  l1: " << fmt(est.l1_norm) << "  residual: " << fmt(est.residual_l2)
              << "  epsilon_n: " << fmt(est.epsilon_n) << (est.epsilon_relaxed ? " (relaxed)" : "")
              << "  time: " << dt << " s\n";
    for (int m = 0; m < est.modes.size(); ++m)
        std::cout << "  k_" << m + 1 << " = " << fmt(est.modes.wavenumbers[static_cast<std::size_t>(m)])
                  << "  |a| = " << std::abs(est.amplitudes.values(m)) << "\n";
    if (est.degenerate) std::cout << "warning: degenerate estimate (all amplitudes zero)\n";
    return 0;
}

int cmd_estimate_depth(const Common& c, const std::string& modes_path) {
    const RunConfig cfg = configure(c);
    const ModeEstimate est = restore_mode_estimate(read_mode_estimate(modes_path), cfg.scenario.environment.water_only());
    DssOptions opts = cfg.estimator.dss;
    opts.workers = cfg.workers;
    const DepthResult r = estimate_depth(est, opts);

    const fs::path out(c.out);
    write_file(out / "depth_result.json", [&](std::ostream& o) { o << depth_summary(r).dump(2) << "\n"; });
    write_file(out / "ambiguity.csv", [&](std::ostream& o) { write_ambiguity(o, est.modes.grid, r.ambiguity); });
    write_file(out / "kl_trace.csv", [&](std::ostream& o) { write_kl_trace(o, r, opts.sign_step_m); });
    std::cout << "estimated depth: " << fmt(r.estimated_depth_m) << " m  (q0 = " << r.selected_q0
              << ", z_q0 = " << fmt(r.selected_zq0_m) << " m, template modes = " << r.template_modes << ")\n";
    return 0;
}

int cmd_extract(const Common& c, const std::string& series_path, double f, double window, double start) {
    const TimeSeries ts = read_time_series(series_path);
    const ExtractedSnapshot x = extract_snapshot(ts, f, window, start);
    const fs::path out(c.out);
    write_file(out / "snapshot.csv", [&](std::ostream& o) { write_snapshot(o, x.snapshot); });
    std::cout << "bin " << x.bin_index << " at " << fmt(x.bin_frequency_hz) << " Hz, " << x.window_samples
              << " samples, " << x.snapshot.aux_bins.size() << " aux bins";
    if (!x.snapshot.aux_bins.empty()) std::cout << ", measured SNR " << measured_snr_db(x) << " dB";
    std::cout << "\nwrote " << (out / "snapshot.csv").string() << "\n";
    return 0;
}

int cmd_sweep(const Common& c, const std::string& kind_name, const std::string& values, std::optional<int> trials) {
    RunConfig cfg = configure(c);
    if (trials) cfg.trials = *trials;
    const SweepKind kind = sweep_kind_from_string(kind_name);
    const SweepSpec spec = make_sweep_spec(cfg, kind, values.empty() ? std::vector<double>{} : parse_list(values));
    std::cout << "sweep " << kind_name << ": " << spec.values.size() << " values x " << spec.trials << " trials, "
              << spec.workers << " worker(s)\n";
    const SweepResult r = run_sweep(spec);

    const fs::path out(c.out);
    const std::string stem = std::string("sweep_") + to_string(kind);
    write_file(out / (stem + "_trials.csv"), [&](std::ostream& o) { write_trials_csv(o, r); });
    write_file(out / (stem + "_summary.csv"), [&](std::ostream& o) { write_aggregates_csv(o, r); });
    write_file(out / (stem + "_manifest.json"),
               [&](std::ostream& o) { o << sweep_manifest(r, to_json(cfg)).dump(2) << "\n"; });
    write_svg(out / (stem + "_mae.svg"), render_svg(mae_plot(r)));
    write_svg(out / (stem + "_wavenumber_error.svg"), render_svg(wavenumber_error_map(r)));
    write_svg(out / (stem + "_mode_function_error.svg"), render_svg(mode_function_error_map(r)));

    for (const auto& a : r.aggregates)
        std::cout << "  " << fmt(a.sweep_value) << ": MAE " << a.mae_m << " m (std " << a.std_ae_m << ", used "
                  << a.used << "/" << a.trials << ", modes " << a.reference_modes << ")\n";
    std::cout << "wall time " << r.wall_time_s << " s\n";
    return 0;
}

int cmd_ambiguity(const Common& c, const std::string& modes_path, std::optional<double> zq) {
    const RunConfig cfg = configure(c);
    ModeSet modes = [&] {
        if (!modes_path.empty())
            return restore_mode_estimate(read_mode_estimate(modes_path), cfg.scenario.environment.water_only()).modes;
        const SweepSpec spec = single_value_spec(cfg);
        return prepare_trial_context(spec, cfg.scenario.snr_db).reference;
    }();
    Eigen::VectorXd moduli;
    if (!modes_path.empty()) {
        moduli = ModeAmplitudes{read_mode_estimate(modes_path).amplitudes}.moduli();
    } else {
        moduli = mode_amplitudes(modes, cfg.scenario.source).moduli();
    }
    const std::span<const double> mod(moduli.data(), static_cast<std::size_t>(moduli.size()));

    Eigen::VectorXd d;
    std::string how;
    if (zq) {
        const Eigen::MatrixXd s = sample_at_depths(modes, std::vector<double>{*zq});
        std::vector<int> signs(static_cast<std::size_t>(modes.size()));
        for (int m = 0; m < modes.size(); ++m) signs[static_cast<std::size_t>(m)] = mode_sign(s(0, m));
        d = ambiguity(modes, mod, signs);
        how = "signs at z = " + fmt(*zq);
    } else {
        const DepthResult r = estimate_depth(modes, mod, cfg.estimator.dss);
        d = r.ambiguity;
        how = "signs from the depth-sign search, z_q0 = " + fmt(r.selected_zq0_m);
    }
    Eigen::Index peak = 0;
    d.maxCoeff(&peak);
    const fs::path out(c.out);
    write_file(out / "ambiguity.csv", [&](std::ostream& o) { write_ambiguity(o, modes.grid, d); });
    std::cout << (modes_path.empty() ? "truth modes, " : "estimated modes, ") << how << "; peak at "
              << fmt(modes.grid.depth(static_cast<int>(peak))) << " m\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Source depth estimation from a VLA snapshot by orthogonality-constrained modal search"};
    app.require_subcommand(1);

    Common c;

    auto* sim = app.add_subcommand("simulate", "synthesise a snapshot (or a time series) from the truth model");
    add_common(sim, c);
    std::optional<double> snr, duration, rate;
    sim->add_option("--snr", snr, "snapshot SNR in dB (overrides the config)");
    sim->add_option("--timeseries", duration, "write a time series of this many seconds instead");
    sim->add_option("--sample-rate", rate, "time-series sample rate in Hz");

    auto* em = app.add_subcommand("estimate-modes", "estimate wavenumbers and amplitudes from a snapshot");
    add_common(em, c);
    std::string snapshot_path;
    bool dump = false;
    em->add_option("--snapshot", snapshot_path, "snapshot CSV")->required()->check(CLI::ExistingFile);
    em->add_flag("--dump-modes", dump, "also write the estimated mode functions");

    auto* ed = app.add_subcommand("estimate-depth", "run the depth-sign search on a mode estimate");
    add_common(ed, c);
    std::string modes_path;
    ed->add_option("--modes", modes_path, "mode estimate CSV")->required()->check(CLI::ExistingFile);

    auto* ex = app.add_subcommand("extract", "narrowband snapshot from a multichannel time series");
    add_common(ex, c, false);
    std::string series_path;
    double f = 0.0, window = 1.0, start = 0.0;
    ex->add_option("--timeseries", series_path, "time-series CSV")->required()->check(CLI::ExistingFile);
    ex->add_option("--frequency", f, "tone frequency in Hz")->required();
    ex->add_option("--window", window, "window length T in seconds")->capture_default_str();
    ex->add_option("--start", start, "window start in seconds")->capture_default_str();

    auto* sw = app.add_subcommand("sweep", "Monte-Carlo sweep: snr, aperture, elements, frequency or window");
    add_common(sw, c);
    std::string kind, values;
    std::optional<int> trials;
    sw->add_option("kind", kind, "sweep variable")
        ->required()
        ->check(CLI::IsMember({"snr", "aperture", "elements", "frequency", "window"}));
    sw->add_option("--values", values, "comma list or start:stop:step (default: the study grid)");
    sw->add_option("--trials", trials, "trials per value (overrides the config)");

    auto* am = app.add_subcommand("ambiguity", "emit the depth ambiguity function D(z)");
    add_common(am, c);
    std::string amb_modes;
    std::optional<double> zq;
    am->add_option("--modes", amb_modes, "mode estimate CSV (default: truth modes and amplitudes)")
        ->check(CLI::ExistingFile);
    am->add_option("--zq", zq, "take mode signs at this depth instead of searching");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) return cmd_simulate(c, snr, duration, rate);
        if (*em) return cmd_estimate_modes(c, snapshot_path, dump);
        if (*ed) return cmd_estimate_depth(c, modes_path);
        if (*ex) return cmd_extract(c, series_path, f, window, start);
        if (*sw) return cmd_sweep(c, kind, values, trials);
        if (*am) return cmd_ambiguity(c, amb_modes, zq);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
