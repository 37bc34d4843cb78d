#include "ocmsd/timeseries.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace ocmsd {

ExtractedSnapshot extract_snapshot(const TimeSeries& series, double frequency_hz, double window_s,
                                   double start_s) {
    const double fs = series.sample_rate_hz;
    if (!(fs > 0.0)) throw std::invalid_argument("sample rate must be positive");
    if (series.element_depths_m.size() != static_cast<std::size_t>(series.channels()))
        throw std::invalid_argument("one depth per channel expected");
    if (!(frequency_hz > 0.0) || frequency_hz >= 0.5 * fs)
        throw std::invalid_argument("tone frequency must lie in (0, Nyquist)");
    if (!(window_s > 0.0) || start_s < 0.0) throw std::invalid_argument("window must be positive and start >= 0");

    const auto first = static_cast<Eigen::Index>(std::llround(start_s * fs));
    const auto K = static_cast<Eigen::Index>(std::llround(window_s * fs));
    if (K < 1) throw std::invalid_argument("window shorter than one sample");
    if (first + K > series.samples.rows()) throw std::out_of_range("window runs past the end of the series");

    const int bin = static_cast<int>(std::llround(frequency_hz * static_cast<double>(K) / fs));
    auto coefficients = [&](int b) {
        Eigen::VectorXcd row(K);
        for (Eigen::Index k = 0; k < K; ++k)
            row(k) = std::polar(1.0, -2.0 * kPi * b * static_cast<double>(k) / static_cast<double>(K));
        return Eigen::VectorXcd(series.samples.middleRows(first, K).transpose().cast<complex>() * row);
    };

    ExtractedSnapshot out;
    out.bin_index = bin;
    out.window_samples = static_cast<int>(K);
    out.bin_frequency_hz = bin * fs / static_cast<double>(K);
    out.snapshot.frequency_hz = frequency_hz;
    out.snapshot.element_depths_m = series.element_depths_m;
    out.snapshot.pressure = coefficients(bin);
    for (int off : kAuxBinOffsets) {
        const int b = bin + off;
        if (b < 1 || 2 * b >= K) continue;
        out.snapshot.aux_bins.push_back(coefficients(b));
    }
    return out;
}

TimeSeries synthesize_time_series(const PressureSnapshot& clean, double sample_rate_hz, double duration_s,
                                  double noise_std, std::uint64_t seed) {
    if (!(sample_rate_hz > 0.0) || !(duration_s > 0.0)) throw std::invalid_argument("bad sampling parameters");
    if (noise_std < 0.0) throw std::invalid_argument("noise level must be non-negative");
    const auto K = static_cast<Eigen::Index>(std::llround(duration_s * sample_rate_hz));
    const Eigen::Index N = clean.size();
    TimeSeries ts;
    ts.sample_rate_hz = sample_rate_hz;
    ts.element_depths_m = clean.element_depths_m;
    ts.samples.resize(K, N);
    const double w = 2.0 * kPi * clean.frequency_hz / sample_rate_hz;
    for (Eigen::Index n = 0; n < N; ++n) {
        const double amp = std::abs(clean.pressure(n));
        const double ph = std::arg(clean.pressure(n));
        for (Eigen::Index k = 0; k < K; ++k) ts.samples(k, n) = amp * std::cos(w * static_cast<double>(k) + ph);
    }
    if (noise_std > 0.0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, noise_std);
        for (Eigen::Index n = 0; n < N; ++n)
            for (Eigen::Index k = 0; k < K; ++k) ts.samples(k, n) += gauss(rng);
    }
    return ts;
}

double time_noise_std_for_snr(const PressureSnapshot& clean, double sample_rate_hz, double snr_db) {
    // one-second window: K = fs samples, signal coefficient ||p|| K / 2,
    // per-channel noise coefficient std sqrt(K) * noise_std
    const double N = static_cast<double>(clean.size());
    return clean.pressure.norm() * std::sqrt(sample_rate_hz) / (2.0 * N * std::pow(10.0, snr_db / 20.0));
}

double measured_snr_db(const ExtractedSnapshot& x) {
    const auto& aux = x.snapshot.aux_bins;
    if (aux.empty()) throw std::invalid_argument("no aux bins to estimate the noise level");
    double power = 0.0;
    Eigen::Index count = 0;
    for (const auto& b : aux) {
        power += b.squaredNorm();
        count += b.size();
    }
    const double sigma = std::sqrt(power / static_cast<double>(count));
    const double N = static_cast<double>(x.snapshot.size());
    return 20.0 * std::log10(x.snapshot.pressure.norm() / (N * sigma));
}

}  // namespace ocmsd
