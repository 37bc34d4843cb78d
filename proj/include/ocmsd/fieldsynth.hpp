/**
 * @file fieldsynth.hpp
 * @brief Forward model: modal amplitudes, VLA pressure snapshot and noise.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ocmsd/envarray.hpp"
#include "ocmsd/modesolver.hpp"

namespace ocmsd {

/// Bessel functions of order zero and the first-kind Hankel function.
/// Power series for x <= 12, Hankel asymptotic expansion above.
double bessel_j0(double x);
double bessel_y0(double x);
complex hankel1_0(double x);

inline constexpr double kBesselSeriesLimit = 12.0;

struct ModeAmplitudes {
    Eigen::VectorXcd values;

    int size() const { return static_cast<int>(values.size()); }
    Eigen::VectorXd moduli() const { return values.cwiseAbs(); }
};

/// Complex pressure on the array at one frequency.
struct PressureSnapshot {
    double frequency_hz = 0.0;
    std::vector<double> element_depths_m;
    Eigen::VectorXcd pressure;
    std::optional<double> noise_sigma;  // per-element complex noise std
    std::optional<double> snr_db;
    std::optional<std::uint64_t> seed;
    // signal-free neighbouring frequency bins, when the snapshot came from a time series
    std::vector<Eigen::VectorXcd> aux_bins;

    int size() const { return static_cast<int>(pressure.size()); }
};

/// a_m = (i/4) S(omega) phi_m(z_s) H0^(1)(k_m r).
ModeAmplitudes mode_amplitudes(const ModeSet& modes, const SourceSpec& source);

/// p(z_n) = sum_m a_m phi_m(z_n), noise-free.
PressureSnapshot synthesize_pressure(const ModeSet& modes, const ModeAmplitudes& amps,
                                     const ArrayGeometry& array, double frequency_hz);

/// Pass as snr_db for a noise-free copy.
inline constexpr double kNoiseFree = std::numeric_limits<double>::infinity();

/// sigma from SNR = 20 log10(||p||_2 / (N sigma)).
double noise_sigma_for_snr(const Eigen::VectorXcd& p, double snr_db);

/// The same SNR measured on the stored sigma.
double snapshot_snr_db(const Eigen::VectorXcd& p, double sigma);

/// Conventional per-element SNR 20 log10(||p|| / (sqrt(N) sigma)) for a given
/// array-normalised SNR: the two differ by 10 log10(N).
double per_element_snr_db(double snr_db, int elements);

/// Adds i.i.d. circular complex Gaussian noise, variance sigma^2 split evenly
/// between the real and imaginary parts. Deterministic in seed.
PressureSnapshot add_noise(const PressureSnapshot& clean, double snr_db, std::uint64_t seed);

}  // namespace ocmsd
