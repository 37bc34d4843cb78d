// Multichannel VLA time series and narrowband snapshot extraction by a
// rectangular-window DFT at the bin nearest the tone.
#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "ocmsd/fieldsynth.hpp"

namespace ocmsd {

struct TimeSeries {
    double sample_rate_hz = 0.0;
    std::vector<double> element_depths_m;
    Eigen::MatrixXd samples;  // one column per element, rows are time samples

    int channels() const { return static_cast<int>(samples.cols()); }
    int length() const { return static_cast<int>(samples.rows()); }
    double duration_s() const { return length() / sample_rate_hz; }
};

struct ExtractedSnapshot {
    PressureSnapshot snapshot;  // frequency_hz keeps the requested tone frequency
    double bin_frequency_hz = 0.0;
    int bin_index = 0;
    int window_samples = 0;
};

/// Aux bins sit at these offsets from the signal bin; the signal bin and its
/// immediate neighbours carry leakage and are skipped.
inline constexpr int kAuxBinOffsets[] = {-3, -2, 2, 3};

/// DFT coefficient sum_k x[k] exp(-2 pi i b k / K) per channel over
/// [start, start + T). A tone A cos(2 pi f t + phi) on bin b yields A K / 2 e^{i phi}.
ExtractedSnapshot extract_snapshot(const TimeSeries& series, double frequency_hz, double window_s,
                                   double start_s = 0.0);

/// Tone series x_n(t) = |p_n| cos(2 pi f t + arg p_n) plus white Gaussian noise
/// of standard deviation noise_std per sample. The extracted coefficient of
/// the clean part is p K / 2 on an exact bin.
TimeSeries synthesize_time_series(const PressureSnapshot& clean, double sample_rate_hz, double duration_s,
                                  double noise_std, std::uint64_t seed);

/// Per-sample noise level that gives `snr_db` (20 log10(||p|| / (N sigma))) in a snapshot
/// extracted with a one-second window. Longer windows gain 10 log10(T).
double time_noise_std_for_snr(const PressureSnapshot& clean, double sample_rate_hz, double snr_db);

/// Snapshot SNR 20 log10(||X|| / (N sigma)) with sigma estimated
/// as the RMS modulus over all aux bins and channels.
double measured_snr_db(const ExtractedSnapshot& x);

}  // namespace ocmsd
