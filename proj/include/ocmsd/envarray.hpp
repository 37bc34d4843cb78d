/**
 * @file envarray.hpp
 * @brief Ocean environment, depth discretization, source and array geometry.
 *
 * Everything here is an immutable value after construction. Constructors
 * validate their invariants and throw std::invalid_argument on violation.
 */
#pragma once

#include <complex>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace ocmsd {

using complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

struct ProfilePoint {
    double depth_m;
    double speed_mps;
};

/// Piecewise-linear sound speed profile c(z) from the surface to the bottom.
class SoundSpeedProfile {
public:
    explicit SoundSpeedProfile(std::vector<ProfilePoint> points);

    /// Constant profile over [0, depth].
    static SoundSpeedProfile isovelocity(double speed_mps, double depth_m);

    const std::vector<ProfilePoint>& points() const { return points_; }
    double bottom_depth() const { return points_.back().depth_m; }
    double min_speed() const;
    double max_speed() const;

private:
    std::vector<ProfilePoint> points_;
};

/// Linear interpolation of c(z); throws std::domain_error outside [0, H].
double speed_at(const SoundSpeedProfile& ssp, double z);

/// Fluid halfspace below the water column. Only the truth model reads it.
struct Halfspace {
    double speed_mps = 0.0;
    double density_ratio = 1.0;  // rho_bottom / rho_water, rho_water = 1 g/cm^3
    double attenuation_db_per_lambda = 0.0;
};

class Environment {
public:
    Environment(SoundSpeedProfile ssp, double water_depth_m,
                std::optional<Halfspace> halfspace = std::nullopt);

    const SoundSpeedProfile& ssp() const { return ssp_; }
    double water_depth() const { return depth_; }
    const std::optional<Halfspace>& halfspace() const { return halfspace_; }

    /// Copy of this environment with the seabed removed (what the estimator sees).
    Environment water_only() const { return Environment(ssp_, depth_); }

private:
    SoundSpeedProfile ssp_;
    double depth_;
    std::optional<Halfspace> halfspace_;
};

/// Uniform depth grid z_l = l*h, l = 0..L, with L*h in (H - h, H].
class DepthGrid {
public:
    DepthGrid(double step_m, int last_index);

    /// Grid for the working frequency: h = H / ceil(H / min(max_step, lambda_min/40)),
    /// so that L*h == H. The lambda/40 rule applies whatever cap is passed.
    static DepthGrid for_frequency(const Environment& env, double frequency_hz,
                                   double max_step_m = 0.05);

    double step() const { return h_; }
    int last_index() const { return L_; }
    int size() const { return L_ + 1; }
    double depth(int l) const { return l * h_; }
    double bottom() const { return L_ * h_; }

private:
    double h_;
    int L_;
};

class ArrayGeometry {
public:
    ArrayGeometry(std::vector<double> element_depths_m, double water_depth_m);

    /// N elements starting at first_depth with constant spacing.
    static ArrayGeometry uniform(double first_depth_m, double spacing_m, int count,
                                 double water_depth_m);

    const std::vector<double>& depths() const { return depths_; }
    int size() const { return static_cast<int>(depths_.size()); }
    double aperture() const { return depths_.back() - depths_.front(); }

private:
    std::vector<double> depths_;
};

struct SourceSpec {
    double frequency_hz = 0.0;
    double depth_m = 0.0;
    double range_m = 0.0;
    complex spectrum{1.0, 0.0};

    double angular_frequency() const { return 2.0 * kPi * frequency_hz; }
};

/// Throws std::invalid_argument unless the source sits inside the water column.
void validate_source(const SourceSpec& src, const Environment& env);

struct WavenumberBand {
    double xi_min;
    double xi_max;

    bool contains(double xi) const { return xi >= xi_min && xi <= xi_max; }
    double width() const { return xi_max - xi_min; }
};

inline constexpr double kDefaultSpeedMargin = 300.0;

/// Default candidate search band: [2*pi*f / (max c + margin), 2*pi*f / min c].
WavenumberBand wavenumber_bounds(const Environment& env, double frequency_hz,
                                 double speed_margin_mps = kDefaultSpeedMargin);

/// Band from explicit phase-speed limits, e.g. 2*pi*f/1822 .. 2*pi*f/1488.
WavenumberBand wavenumber_bounds_from_speeds(double frequency_hz, double slow_mps,
                                             double fast_mps);

}  // namespace ocmsd
