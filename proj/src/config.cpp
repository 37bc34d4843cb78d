#include "ocmsd/config.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace ocmsd {

using nlohmann::json;

namespace {

double number_or_inf(const json& v) {
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf" || s == "+inf" || s == "noise_free") return kNoiseFree;
        throw std::invalid_argument("expected a number or \"inf\", got \"" + s + "\"");
    }
    if (v.is_null()) return kNoiseFree;
    return v.get<double>();
}

template <class T>
void read_if(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

ArrayLayout parse_array(const json& a) {
    ArrayLayout layout;
    if (a.contains("depths")) {
        layout.explicit_depths = a.at("depths").get<std::vector<double>>();
        layout.count = static_cast<int>(layout.explicit_depths.size());
        return layout;
    }
    read_if(a, "first_depth", layout.first_depth_m);
    read_if(a, "spacing", layout.spacing_m);
    read_if(a, "count", layout.count);
    if (a.contains("anchor")) {
        const auto anchor = a.at("anchor").get<std::string>();
        if (anchor != "surface" && anchor != "bottom")
            throw std::invalid_argument("array.anchor must be \"surface\" or \"bottom\"");
        layout.bottom_anchored = anchor == "bottom";
    }
    return layout;
}

}  // namespace

EpsilonMode epsilon_mode_from_string(const std::string& name) {
    if (name == "known") return EpsilonMode::KnownSigma;
    if (name == "offbin") return EpsilonMode::OffBinEstimate;
    throw std::invalid_argument("epsilon mode must be \"known\" or \"offbin\"");
}

const char* to_string(EpsilonMode mode) {
    return mode == EpsilonMode::KnownSigma ? "known" : "offbin";
}

RunConfig parse_config(const json& doc) {
    std::vector<ProfilePoint> pts;
    for (const auto& p : doc.at("ssp")) {
        if (!p.is_array() || p.size() != 2) throw std::invalid_argument("ssp entries must be [depth, speed]");
        pts.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    const double H = doc.contains("water_depth") ? doc.at("water_depth").get<double>() : pts.back().depth_m;
    std::optional<Halfspace> hs;
    if (doc.contains("halfspace") && !doc.at("halfspace").is_null()) {
        const auto& b = doc.at("halfspace");
        Halfspace h;
        h.speed_mps = b.at("speed").get<double>();
        read_if(b, "density_ratio", h.density_ratio);
        read_if(b, "attenuation_db_per_lambda", h.attenuation_db_per_lambda);
        hs = h;
    }

    SourceSpec src;
    const auto& s = doc.at("source");
    src.frequency_hz = s.at("frequency").get<double>();
    src.depth_m = s.at("depth").get<double>();
    src.range_m = s.at("range").get<double>();
    if (s.contains("spectrum")) {
        const auto& sp = s.at("spectrum");
        src.spectrum = sp.is_array() ? complex(sp.at(0).get<double>(), sp.at(1).get<double>())
                                     : complex(sp.get<double>(), 0.0);
    }

    RunConfig cfg{Scenario{Environment(SoundSpeedProfile(std::move(pts)), H, hs),
                           doc.contains("array") ? parse_array(doc.at("array")) : ArrayLayout{}, src,
                           doc.contains("snr_db") ? number_or_inf(doc.at("snr_db")) : 30.0},
                  {}, {}};
    validate_source(cfg.scenario.source, cfg.scenario.environment);

    if (doc.contains("solver")) {
        const auto& so = doc.at("solver");
        auto& e = cfg.estimator;
        if (so.contains("band")) {
            const auto b = so.at("band").get<std::vector<double>>();
            if (b.size() != 2 || !(b[0] < b[1])) throw std::invalid_argument("solver.band must be [xi_min, xi_max]");
            e.band = WavenumberBand{b[0], b[1]};
        }
        if (so.contains("band_speeds")) {
            const auto b = so.at("band_speeds").get<std::vector<double>>();
            if (b.size() != 2) throw std::invalid_argument("solver.band_speeds must be [slow, fast]");
            e.band_speeds = std::make_pair(b[0], b[1]);
        }
        read_if(so, "speed_margin", e.speed_margin_mps);
        if (so.contains("epsilon_mode")) e.epsilon_mode = epsilon_mode_from_string(so.at("epsilon_mode"));
        read_if(so, "coarse_grid_points", e.coarse_grid_points);
        read_if(so, "refine_tolerance", e.refine_tolerance);
        read_if(so, "lasso_max_iter", e.lasso_max_iter);
        read_if(so, "lasso_rel_tol", e.lasso_rel_tol);
        read_if(so, "relax_infeasible", e.relax_infeasible);
    }
    if (doc.contains("dss")) {
        const auto& d = doc.at("dss");
        read_if(d, "sign_step", cfg.estimator.dss.sign_step_m);
        read_if(d, "amplitude_threshold", cfg.estimator.dss.amplitude_threshold);
        read_if(d, "template_epsilon", cfg.estimator.dss.template_epsilon);
    }
    if (doc.contains("window")) read_if(doc.at("window"), "sample_rate", cfg.window.sample_rate_hz);
    if (doc.contains("sweep")) {
        const auto& sw = doc.at("sweep");
        read_if(sw, "trials", cfg.trials);
        read_if(sw, "seed", cfg.seed);
        read_if(sw, "workers", cfg.workers);
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path.string());
    try {
        return parse_config(json::parse(in, nullptr, true, true));
    } catch (const json::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

json to_json(const RunConfig& cfg) {
    const Scenario& s = cfg.scenario;
    json doc;
    json ssp = json::array();
    for (const auto& p : s.environment.ssp().points()) ssp.push_back({p.depth_m, p.speed_mps});
    doc["ssp"] = ssp;
    doc["water_depth"] = s.environment.water_depth();
    if (const auto& hs = s.environment.halfspace())
        doc["halfspace"] = {{"speed", hs->speed_mps},
                            {"density_ratio", hs->density_ratio},
                            {"attenuation_db_per_lambda", hs->attenuation_db_per_lambda}};
    if (!s.array.explicit_depths.empty())
        doc["array"] = {{"depths", s.array.explicit_depths}};
    else
        doc["array"] = {{"first_depth", s.array.first_depth_m},
                        {"spacing", s.array.spacing_m},
                        {"count", s.array.count},
                        {"anchor", s.array.bottom_anchored ? "bottom" : "surface"}};
    doc["source"] = {{"frequency", s.source.frequency_hz},
                     {"depth", s.source.depth_m},
                     {"range", s.source.range_m},
                     {"spectrum", {s.source.spectrum.real(), s.source.spectrum.imag()}}};
    doc["snr_db"] = std::isinf(s.snr_db) ? json("inf") : json(s.snr_db);

    const auto& e = cfg.estimator;
    json solver = {{"epsilon_mode", to_string(e.epsilon_mode)},
                   {"speed_margin", e.speed_margin_mps},
                   {"coarse_grid_points", e.coarse_grid_points},
                   {"refine_tolerance", e.refine_tolerance},
                   {"lasso_max_iter", e.lasso_max_iter},
                   {"lasso_rel_tol", e.lasso_rel_tol},
                   {"relax_infeasible", e.relax_infeasible}};
    if (e.band) solver["band"] = {e.band->xi_min, e.band->xi_max};
    if (e.band_speeds) solver["band_speeds"] = {e.band_speeds->first, e.band_speeds->second};
    doc["solver"] = solver;
    doc["dss"] = {{"sign_step", e.dss.sign_step_m},
                  {"amplitude_threshold", e.dss.amplitude_threshold},
                  {"template_epsilon", e.dss.template_epsilon}};
    doc["window"] = {{"sample_rate", cfg.window.sample_rate_hz}};
    doc["sweep"] = {{"trials", cfg.trials}, {"seed", cfg.seed}, {"workers", cfg.workers}};
    return doc;
}

SweepSpec make_sweep_spec(const RunConfig& cfg, SweepKind kind, std::vector<double> values) {
    return SweepSpec{.kind = kind,
                     .values = values.empty() ? default_sweep_values(kind) : std::move(values),
                     .trials = cfg.trials,
                     .master_seed = cfg.seed,
                     .base = cfg.scenario,
                     .estimator = cfg.estimator,
                     .window = cfg.window,
                     .workers = cfg.workers};
}

}  // namespace ocmsd
