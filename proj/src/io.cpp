#include "ocmsd/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef OCMSD_VERSION
#define OCMSD_VERSION "unknown"
#endif

namespace ocmsd {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

const std::string& header(const CsvDocument& doc, const std::string& key) {
    const auto it = doc.headers.find(key);
    if (it == doc.headers.end()) throw std::runtime_error("missing header \"# " + key + "=\"");
    return it->second;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return in;
}

std::string csv_safe(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

}  // namespace

const char* code_version() { return OCMSD_VERSION; }

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& raw) {
    const std::string s = trim(raw);
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan" || s.empty()) return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    const char* first = s.data() + (s.front() == '+' ? 1 : 0);
    const auto res = std::from_chars(first, s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument("not a number: \"" + s + "\"");
    return v;
}

CsvDocument read_csv(std::istream& in) {
    CsvDocument doc;
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '#') {
            const auto eq = t.find('=');
            if (eq != std::string::npos) doc.headers[trim(t.substr(1, eq - 1))] = trim(t.substr(eq + 1));
            continue;
        }
        doc.rows.push_back(split(t));
    }
    return doc;
}

CsvDocument read_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_csv(in);
}

void write_snapshot(std::ostream& out, const PressureSnapshot& s) {
    out << "# freq_hz=" << fmt(s.frequency_hz) << '\n';
    out << "# snr_db=" << (s.snr_db ? fmt(*s.snr_db) : "unknown") << '\n';
    out << "# seed=" << (s.seed ? std::to_string(*s.seed) : "none") << '\n';
    if (s.noise_sigma) out << "# noise_sigma=" << fmt(*s.noise_sigma) << '\n';
    out << "# aux_bins=" << s.aux_bins.size() << '\n';
    out << "depth_m,re,im";
    for (std::size_t b = 0; b < s.aux_bins.size(); ++b) out << ",aux" << b + 1 << "_re,aux" << b + 1 << "_im";
    out << '\n';
    for (int n = 0; n < s.size(); ++n) {
        out << fmt(s.element_depths_m[static_cast<std::size_t>(n)]) << ',' << fmt(s.pressure(n).real()) << ','
            << fmt(s.pressure(n).imag());
        for (const auto& b : s.aux_bins) out << ',' << fmt(b(n).real()) << ',' << fmt(b(n).imag());
        out << '\n';
    }
}

PressureSnapshot read_snapshot(std::istream& in) {
    CsvDocument doc = read_csv(in);
    PressureSnapshot s;
    s.frequency_hz = parse_double(header(doc, "freq_hz"));
    if (doc.headers.count("snr_db") && doc.headers["snr_db"] != "unknown") s.snr_db = parse_double(doc.headers["snr_db"]);
    if (doc.headers.count("seed") && doc.headers["seed"] != "none") s.seed = std::stoull(doc.headers["seed"]);
    if (doc.headers.count("noise_sigma")) s.noise_sigma = parse_double(doc.headers["noise_sigma"]);
    const int aux = doc.headers.count("aux_bins") ? std::stoi(doc.headers["aux_bins"]) : 0;

    if (!doc.rows.empty() && doc.rows.front().at(0) == "depth_m") doc.rows.erase(doc.rows.begin());
    const auto N = static_cast<Eigen::Index>(doc.rows.size());
    if (N == 0) throw std::runtime_error("snapshot has no rows");
    s.pressure.resize(N);
    s.aux_bins.assign(static_cast<std::size_t>(aux), Eigen::VectorXcd(N));
    for (Eigen::Index n = 0; n < N; ++n) {
        const auto& row = doc.rows[static_cast<std::size_t>(n)];
        if (row.size() < 3 + 2 * static_cast<std::size_t>(aux)) throw std::runtime_error("short snapshot row");
        s.element_depths_m.push_back(parse_double(row[0]));
        s.pressure(n) = complex(parse_double(row[1]), parse_double(row[2]));
        for (int b = 0; b < aux; ++b)
            s.aux_bins[static_cast<std::size_t>(b)](n) =
                complex(parse_double(row[3 + 2 * static_cast<std::size_t>(b)]),
                        parse_double(row[4 + 2 * static_cast<std::size_t>(b)]));
    }
    return s;
}

PressureSnapshot read_snapshot(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_snapshot(in);
}

void write_mode_estimate(std::ostream& out, const ModeEstimate& est, double frequency_hz, const WavenumberBand& band) {
    out << "# freq_hz=" << fmt(frequency_hz) << '\n';
    out << "# anchor_xi=" << fmt(est.anchor_xi) << '\n';
    out << "# epsilon_n=" << fmt(est.epsilon_n) << '\n';
    out << "# epsilon_relaxed=" << (est.epsilon_relaxed ? 1 : 0) << '\n';
    out << "# xi_min=" << fmt(band.xi_min) << '\n';
    out << "# xi_max=" << fmt(band.xi_max) << '\n';
    out << "# grid_step_m=" << fmt(est.modes.grid.step()) << '\n';
    out << "# l1_norm=" << fmt(est.l1_norm) << '\n';
    out << "# residual_l2=" << fmt(est.residual_l2) << '\n';
    out << "index,k,re_a,im_a\n";
    for (int m = 0; m < est.modes.size(); ++m)
        out << m + 1 << ',' << fmt(est.modes.wavenumbers[static_cast<std::size_t>(m)]) << ','
            << fmt(est.amplitudes.values(m).real()) << ',' << fmt(est.amplitudes.values(m).imag()) << '\n';
}

ModeEstimateFile read_mode_estimate(std::istream& in) {
    CsvDocument doc = read_csv(in);
    ModeEstimateFile f;
    f.frequency_hz = parse_double(header(doc, "freq_hz"));
    f.anchor_xi = parse_double(header(doc, "anchor_xi"));
    f.epsilon_n = parse_double(header(doc, "epsilon_n"));
    f.xi_min = parse_double(header(doc, "xi_min"));
    f.xi_max = parse_double(header(doc, "xi_max"));
    if (!doc.rows.empty() && doc.rows.front().at(0) == "index") doc.rows.erase(doc.rows.begin());
    f.amplitudes.resize(static_cast<Eigen::Index>(doc.rows.size()));
    for (std::size_t m = 0; m < doc.rows.size(); ++m) {
        const auto& row = doc.rows[m];
        if (row.size() < 4) throw std::runtime_error("short mode-estimate row");
        f.wavenumbers.push_back(parse_double(row[1]));
        f.amplitudes(static_cast<Eigen::Index>(m)) = complex(parse_double(row[2]), parse_double(row[3]));
    }
    return f;
}

ModeEstimateFile read_mode_estimate(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_mode_estimate(in);
}

ModeEstimate restore_mode_estimate(const ModeEstimateFile& file, const Environment& water) {
    const DepthGrid grid = DepthGrid::for_frequency(water, file.frequency_hz);
    ModeSet modes = candidate_mode_set(water, grid, file.frequency_hz, file.anchor_xi,
                                       WavenumberBand{file.xi_min, file.xi_max});
    if (modes.wavenumbers.size() != file.wavenumbers.size())
        throw std::runtime_error("stored estimate does not match this environment (mode count)");
    for (std::size_t m = 0; m < file.wavenumbers.size(); ++m)
        if (std::abs(modes.wavenumbers[m] - file.wavenumbers[m]) > 1e-9 * file.wavenumbers[m])
            throw std::runtime_error("stored estimate does not match this environment (wavenumbers)");
    const double l1 = file.amplitudes.cwiseAbs().sum();
    return ModeEstimate{.modes = std::move(modes),
                        .amplitudes = ModeAmplitudes{file.amplitudes},
                        .l1_norm = l1,
                        .residual_l2 = 0.0,
                        .epsilon_n = file.epsilon_n,
                        .epsilon_relaxed = false,
                        .anchor_xi = file.anchor_xi,
                        .degenerate = l1 == 0.0,
                        .objective_trace = {}};
}

void write_mode_functions(std::ostream& out, const ModeSet& modes) {
    out << "z";
    for (int m = 0; m < modes.size(); ++m) out << ",psi_" << m + 1;
    out << '\n';
    for (int l = 0; l < modes.grid.size(); ++l) {
        out << fmt(modes.grid.depth(l));
        for (int m = 0; m < modes.size(); ++m) out << ',' << fmt(modes.functions(l, m));
        out << '\n';
    }
}

void write_objective_trace(std::ostream& out, const std::vector<ObjectiveSample>& trace) {
    out << "xi,l1_norm\n";
    for (const auto& s : trace) out << fmt(s.xi) << ',' << fmt(s.l1_norm) << '\n';
}

void write_ambiguity(std::ostream& out, const DepthGrid& grid, const Eigen::VectorXd& d) {
    out << "z,D\n";
    for (int l = 0; l < grid.size(); ++l) out << fmt(grid.depth(l)) << ',' << fmt(d(l)) << '\n';
}

void write_kl_trace(std::ostream& out, const DepthResult& r, double sign_step_m) {
    out << "q,z_q,kl\n";
    for (std::size_t i = 0; i < r.kl_trace.size(); ++i)
        out << i + 1 << ',' << fmt(static_cast<double>(i + 1) * sign_step_m) << ',' << fmt(r.kl_trace[i]) << '\n';
}

nlohmann::json depth_summary(const DepthResult& r) {
    return {{"estimated_depth_m", r.estimated_depth_m},
            {"selected_q0", r.selected_q0},
            {"selected_zq0_m", r.selected_zq0_m},
            {"selected_signs", r.selected_signs},
            {"template_modes", r.template_modes}};
}

void write_time_series(std::ostream& out, const TimeSeries& ts) {
    out << "# sample_rate_hz=" << fmt(ts.sample_rate_hz) << '\n';
    for (std::size_t n = 0; n < ts.element_depths_m.size(); ++n) out << (n ? "," : "") << fmt(ts.element_depths_m[n]);
    out << '\n';
    for (Eigen::Index k = 0; k < ts.samples.rows(); ++k) {
        for (Eigen::Index n = 0; n < ts.samples.cols(); ++n) out << (n ? "," : "") << fmt(ts.samples(k, n));
        out << '\n';
    }
}

TimeSeries read_time_series(std::istream& in) {
    CsvDocument doc = read_csv(in);
    TimeSeries ts;
    ts.sample_rate_hz = parse_double(header(doc, "sample_rate_hz"));
    if (doc.rows.empty()) throw std::runtime_error("time series lacks the depths line");
    for (const auto& c : doc.rows.front()) ts.element_depths_m.push_back(parse_double(c));
    const auto N = static_cast<Eigen::Index>(ts.element_depths_m.size());
    ts.samples.resize(static_cast<Eigen::Index>(doc.rows.size() - 1), N);
    for (std::size_t k = 1; k < doc.rows.size(); ++k) {
        const auto& row = doc.rows[k];
        if (static_cast<Eigen::Index>(row.size()) != N) throw std::runtime_error("ragged time-series row");
        for (Eigen::Index n = 0; n < N; ++n)
            ts.samples(static_cast<Eigen::Index>(k - 1), n) = parse_double(row[static_cast<std::size_t>(n)]);
    }
    return ts;
}

TimeSeries read_time_series(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_time_series(in);
}

void write_trials_csv(std::ostream& out, const SweepResult& r) {
    std::size_t M = 0;
    for (const auto& t : r.trials) M = std::max(M, t.wavenumber_errors.size());
    out << "value_index,sweep_value,trial,seed,status,snr_db,estimated_depth_m,ae_m,reference_modes,"
           "estimated_modes,epsilon_n,epsilon_relaxed,anchor_xi,amplitude_error,runtime_s";
    for (std::size_t m = 1; m <= M; ++m) out << ",k_" << m;
    for (std::size_t m = 1; m <= M; ++m) out << ",dk_" << m;
    for (std::size_t m = 1; m <= M; ++m) out << ",phi_err_" << m;
    out << ",message\n";
    auto cells = [&](const std::vector<double>& v) {
        for (std::size_t m = 0; m < M; ++m) out << ',' << (m < v.size() ? fmt(v[m]) : "");
    };
    for (const auto& t : r.trials) {
        out << t.value_index << ',' << fmt(t.sweep_value) << ',' << t.trial << ',' << t.seed << ','
            << to_string(t.status) << ',' << fmt(t.snr_db) << ',' << fmt(t.estimated_depth_m) << ','
            << fmt(t.ae_m) << ',' << t.reference_modes << ',' << t.estimated_modes << ',' << fmt(t.epsilon_n)
            << ',' << (t.epsilon_relaxed ? 1 : 0) << ',' << fmt(t.anchor_xi) << ',' << fmt(t.amplitude_error)
            << ',' << fmt(t.runtime_s);
        cells(t.wavenumbers);
        cells(t.wavenumber_errors);
        cells(t.mode_function_errors);
        out << ',' << csv_safe(t.message) << '\n';
    }
}

void write_aggregates_csv(std::ostream& out, const SweepResult& r) {
    out << "sweep_value,trials,used,excluded,mae_m,std_ae_m,mae_amplitude,mae_mode_function,reference_modes,"
           "mean_runtime_s\n";
    for (const auto& a : r.aggregates)
        out << fmt(a.sweep_value) << ',' << a.trials << ',' << a.used << ',' << a.excluded << ',' << fmt(a.mae_m)
            << ',' << fmt(a.std_ae_m) << ',' << fmt(a.mae_amplitude) << ',' << fmt(a.mae_mode_function) << ','
            << a.reference_modes << ',' << fmt(a.mean_runtime_s) << '\n';
}

nlohmann::json sweep_manifest(const SweepResult& r, const nlohmann::json& config_echo) {
    int excluded = 0;
    for (const auto& a : r.aggregates) excluded += a.excluded;
    return {{"code_version", code_version()},
            {"sweep", to_string(r.spec.kind)},
            {"values", r.spec.values},
            {"trials_per_value", r.spec.trials},
            {"master_seed", r.spec.master_seed},
            {"workers", r.spec.workers},
            {"wall_time_s", r.wall_time_s},
            {"rows", r.trials.size()},
            {"excluded_rows", excluded},
            {"config", config_echo}};
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    body(out);
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace ocmsd
