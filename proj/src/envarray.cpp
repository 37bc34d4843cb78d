#include "ocmsd/envarray.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ocmsd {

SoundSpeedProfile::SoundSpeedProfile(std::vector<ProfilePoint> points) : points_(std::move(points)) {
    if (points_.size() < 2)
        throw std::invalid_argument("sound speed profile needs at least 2 points");
    if (points_.front().depth_m != 0.0)
        throw std::invalid_argument("sound speed profile must start at the surface (depth 0)");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        if (!(p.speed_mps > 1300.0 && p.speed_mps < 1700.0))
            throw std::invalid_argument("sound speed " + std::to_string(p.speed_mps) +
                                        " m/s outside sanity band (1300, 1700)");
        if (i > 0 && !(p.depth_m > points_[i - 1].depth_m))
            throw std::invalid_argument("sound speed profile depths must be strictly increasing");
    }
}

SoundSpeedProfile SoundSpeedProfile::isovelocity(double speed_mps, double depth_m) {
    return SoundSpeedProfile({{0.0, speed_mps}, {depth_m, speed_mps}});
}

double SoundSpeedProfile::min_speed() const {
    return std::min_element(points_.begin(), points_.end(),
                            [](auto& a, auto& b) { return a.speed_mps < b.speed_mps; })
        ->speed_mps;
}

double SoundSpeedProfile::max_speed() const {
    return std::max_element(points_.begin(), points_.end(),
                            [](auto& a, auto& b) { return a.speed_mps < b.speed_mps; })
        ->speed_mps;
}

double speed_at(const SoundSpeedProfile& ssp, double z) {
    const auto& pts = ssp.points();
    if (!(z >= 0.0 && z <= pts.back().depth_m))
        throw std::domain_error("depth " + std::to_string(z) + " m outside the water column");
    auto it = std::upper_bound(pts.begin(), pts.end(), z,
                               [](double v, const ProfilePoint& p) { return v < p.depth_m; });
    if (it == pts.end()) return pts.back().speed_mps;
    if (it == pts.begin()) return pts.front().speed_mps;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double t = (z - lo.depth_m) / (hi.depth_m - lo.depth_m);
    return lo.speed_mps + t * (hi.speed_mps - lo.speed_mps);
}

Environment::Environment(SoundSpeedProfile ssp, double water_depth_m,
                         std::optional<Halfspace> halfspace)
    : ssp_(std::move(ssp)), depth_(water_depth_m), halfspace_(halfspace) {
    if (!(depth_ > 0.0)) throw std::invalid_argument("water depth must be positive");
    if (std::abs(ssp_.bottom_depth() - depth_) > 1e-9 * depth_)
        throw std::invalid_argument("water depth must equal the last sound speed profile depth");
    if (halfspace_) {
        if (!(halfspace_->density_ratio > 0.0))
            throw std::invalid_argument("halfspace density ratio must be positive");
        if (halfspace_->attenuation_db_per_lambda < 0.0)
            throw std::invalid_argument("halfspace attenuation must be non-negative");
        if (!(halfspace_->speed_mps > ssp_.max_speed()))
            throw std::invalid_argument("halfspace speed must exceed the maximum water speed");
    }
}

DepthGrid::DepthGrid(double step_m, int last_index) : h_(step_m), L_(last_index) {
    if (!(h_ > 0.0)) throw std::invalid_argument("grid step must be positive");
    if (L_ < 2) throw std::invalid_argument("grid needs at least 3 nodes");
}

DepthGrid DepthGrid::for_frequency(const Environment& env, double frequency_hz, double max_step_m) {
    if (!(frequency_hz > 0.0)) throw std::invalid_argument("frequency must be positive");
    const double H = env.water_depth();
    const double lambda_min = env.ssp().min_speed() / frequency_hz;
    const double target = std::min(max_step_m, lambda_min / 40.0);
    const int L = static_cast<int>(std::ceil(H / target - 1e-9));
    return DepthGrid(H / L, L);
}

ArrayGeometry::ArrayGeometry(std::vector<double> element_depths_m, double water_depth_m)
    : depths_(std::move(element_depths_m)) {
    if (depths_.size() < 2) throw std::invalid_argument("array needs at least 2 elements");
    for (std::size_t i = 0; i < depths_.size(); ++i) {
        if (!(depths_[i] > 0.0 && depths_[i] < water_depth_m))
            throw std::invalid_argument("array element depth " + std::to_string(depths_[i]) +
                                        " m outside (0, H)");
        if (i > 0 && !(depths_[i] > depths_[i - 1]))
            throw std::invalid_argument("array element depths must be strictly increasing");
    }
}

ArrayGeometry ArrayGeometry::uniform(double first_depth_m, double spacing_m, int count,
                                     double water_depth_m) {
    std::vector<double> d(static_cast<std::size_t>(std::max(count, 0)));
    for (int i = 0; i < count; ++i) d[i] = first_depth_m + i * spacing_m;
    return ArrayGeometry(std::move(d), water_depth_m);
}

void validate_source(const SourceSpec& src, const Environment& env) {
    if (!(src.frequency_hz > 0.0)) throw std::invalid_argument("source frequency must be positive");
    if (!(src.range_m > 0.0)) throw std::invalid_argument("source range must be positive");
    if (!(src.depth_m > 0.0 && src.depth_m < env.water_depth()))
        throw std::invalid_argument("source depth must lie inside (0, H)");
}

WavenumberBand wavenumber_bounds(const Environment& env, double frequency_hz,
                                 double speed_margin_mps) {
    if (!(frequency_hz > 0.0)) throw std::invalid_argument("frequency must be positive");
    const double omega = 2.0 * kPi * frequency_hz;
    return {omega / (env.ssp().max_speed() + speed_margin_mps), omega / env.ssp().min_speed()};
}

WavenumberBand wavenumber_bounds_from_speeds(double frequency_hz, double slow_mps, double fast_mps) {
    if (!(frequency_hz > 0.0)) throw std::invalid_argument("frequency must be positive");
    if (!(fast_mps > slow_mps && slow_mps > 0.0))
        throw std::invalid_argument("band speeds must satisfy 0 < slow < fast");
    const double omega = 2.0 * kPi * frequency_hz;
    return {omega / fast_mps, omega / slow_mps};
}

}  // namespace ocmsd
