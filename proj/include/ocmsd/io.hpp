// Text file formats. Numbers are written as shortest round-trip decimals, so
// reading a file back reproduces every double exactly. Header lines start with
// "# key=value"; everything else is comma separated.
#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "ocmsd/dss.hpp"
#include "ocmsd/harness.hpp"
#include "ocmsd/ocms.hpp"
#include "ocmsd/timeseries.hpp"

namespace ocmsd {

/// Shortest decimal text that parses back to exactly `v` ("inf", "-inf", "nan" for non-finite).
std::string fmt(double v);
double parse_double(const std::string& s);

struct CsvDocument {
    std::map<std::string, std::string> headers;  // from "# key=value" lines
    std::vector<std::vector<std::string>> rows;
};
CsvDocument read_csv(std::istream& in);
CsvDocument read_csv(const std::filesystem::path& path);

// Snapshot: "# freq_hz=", "# snr_db=", "# seed=", "# noise_sigma=", "# aux_bins=K",
// then rows "depth_m,re,im" followed by K (re, im) pairs for the aux bins.
void write_snapshot(std::ostream& out, const PressureSnapshot& s);
PressureSnapshot read_snapshot(std::istream& in);
PressureSnapshot read_snapshot(const std::filesystem::path& path);

// Mode estimate: "# freq_hz=", "# anchor_xi=", "# epsilon_n=", ..., then rows "index,k,re_a,im_a".
struct ModeEstimateFile {
    double frequency_hz = 0.0;
    double anchor_xi = 0.0;
    double epsilon_n = 0.0;
    double xi_min = 0.0;
    double xi_max = 0.0;
    std::vector<double> wavenumbers;
    Eigen::VectorXcd amplitudes;
};
void write_mode_estimate(std::ostream& out, const ModeEstimate& est, double frequency_hz, const WavenumberBand& band);
ModeEstimateFile read_mode_estimate(std::istream& in);
ModeEstimateFile read_mode_estimate(const std::filesystem::path& path);

/// Rebuilds the dictionary of a stored estimate in the given water column and
/// checks it reproduces the stored wavenumbers.
ModeEstimate restore_mode_estimate(const ModeEstimateFile& file, const Environment& water);

void write_mode_functions(std::ostream& out, const ModeSet& modes);  // "z,psi_1..psi_M"
void write_objective_trace(std::ostream& out, const std::vector<ObjectiveSample>& trace);
void write_ambiguity(std::ostream& out, const DepthGrid& grid, const Eigen::VectorXd& d);
void write_kl_trace(std::ostream& out, const DepthResult& r, double sign_step_m);
nlohmann::json depth_summary(const DepthResult& r);

// Time series: "# sample_rate_hz=", then one line of element depths, then one
// row of samples per time step, one column per element.
void write_time_series(std::ostream& out, const TimeSeries& ts);
TimeSeries read_time_series(std::istream& in);
TimeSeries read_time_series(const std::filesystem::path& path);

void write_trials_csv(std::ostream& out, const SweepResult& r);
void write_aggregates_csv(std::ostream& out, const SweepResult& r);

/// Run manifest: config echo, code version, wall time, row counts.
nlohmann::json sweep_manifest(const SweepResult& r, const nlohmann::json& config_echo);

/// Opens `path` (creating parent directories), hands the stream to `body`.
void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body);

const char* code_version();

}  // namespace ocmsd
