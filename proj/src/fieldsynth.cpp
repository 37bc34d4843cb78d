#include "ocmsd/fieldsynth.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace ocmsd {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

// Power series of J0 and Y0; fine for x <= 12 (cancellation costs ~4 digits there).
void bessel_series(double x, double& j0, double& y0) {
    const double q = 0.25 * x * x;
    double term = 1.0;     // (-q)^k / (k!)^2
    double harmonic = 0.0; // H_k
    double sj = 1.0, sy = 0.0;
    for (int k = 1; k < 200; ++k) {
        term *= -q / (static_cast<double>(k) * k);
        harmonic += 1.0 / k;
        sj += term;
        sy -= term * harmonic;
        if (std::abs(term) * (1.0 + harmonic) < 1e-18 * std::max(1.0, std::abs(sj))) break;
    }
    j0 = sj;
    y0 = (2.0 / kPi) * ((std::log(0.5 * x) + kEulerGamma) * sj + sy);
}

// H0^(1)(x) ~ sqrt(2/(pi x)) e^{i(x - pi/4)} sum_k a_k (i/x)^k, summed to the smallest term.
complex hankel_asymptotic(double x) {
    complex sum{1.0, 0.0};
    complex power{1.0, 0.0};
    const complex i_over_x{0.0, 1.0 / x};
    double a = 1.0;
    double last = 1.0;
    for (int k = 1; k < 60; ++k) {
        a *= -static_cast<double>((2 * k - 1) * (2 * k - 1)) / (8.0 * k);
        power *= i_over_x;
        const complex term = a * power;
        const double mag = std::abs(term);
        if (mag > last) break;  // asymptotic series started diverging
        sum += term;
        last = mag;
        if (mag < 1e-17) break;
    }
    const double chi = x - 0.25 * kPi;
    return std::sqrt(2.0 / (kPi * x)) * complex(std::cos(chi), std::sin(chi)) * sum;
}

}  // namespace

double bessel_j0(double x) {
    if (x < 0.0) x = -x;
    if (x <= kBesselSeriesLimit) {
        double j, y;
        if (x == 0.0) return 1.0;
        bessel_series(x, j, y);
        return j;
    }
    return hankel_asymptotic(x).real();
}

double bessel_y0(double x) {
    if (!(x > 0.0)) throw std::domain_error("Y0 requires x > 0");
    if (x <= kBesselSeriesLimit) {
        double j, y;
        bessel_series(x, j, y);
        return y;
    }
    return hankel_asymptotic(x).imag();
}

complex hankel1_0(double x) {
    if (!(x > 0.0)) throw std::domain_error("H0^(1) requires x > 0");
    if (x <= kBesselSeriesLimit) {
        double j, y;
        bessel_series(x, j, y);
        return {j, y};
    }
    return hankel_asymptotic(x);
}

ModeAmplitudes mode_amplitudes(const ModeSet& modes, const SourceSpec& source) {
    if (modes.empty()) throw std::invalid_argument("mode set is empty");
    if (!(source.depth_m > 0.0 && source.depth_m < modes.depth()))
        throw std::invalid_argument("source depth must lie inside (0, H)");
    if (!(source.range_m > 0.0)) throw std::invalid_argument("source range must be positive");
    const double zs[] = {source.depth_m};
    const Eigen::MatrixXd phi = sample_at_depths(modes, zs);
    const complex prefactor = complex(0.0, 0.25) * source.spectrum;
    ModeAmplitudes out{Eigen::VectorXcd(modes.size())};
    for (int m = 0; m < modes.size(); ++m)
        out.values(m) = prefactor * phi(0, m) *
                        hankel1_0(modes.wavenumbers[static_cast<std::size_t>(m)] * source.range_m);
    return out;
}

PressureSnapshot synthesize_pressure(const ModeSet& modes, const ModeAmplitudes& amps,
                                     const ArrayGeometry& array, double frequency_hz) {
    if (amps.size() != modes.size())
        throw std::invalid_argument("amplitude count does not match mode count");
    const Eigen::MatrixXd phi = sample_at_depths(modes, array.depths());
    PressureSnapshot snap;
    snap.frequency_hz = frequency_hz;
    snap.element_depths_m = array.depths();
    snap.pressure = phi.cast<complex>() * amps.values;
    snap.noise_sigma = 0.0;
    return snap;
}

double noise_sigma_for_snr(const Eigen::VectorXcd& p, double snr_db) {
    if (std::isinf(snr_db) && snr_db > 0.0) return 0.0;
    return p.norm() / (static_cast<double>(p.size()) * std::pow(10.0, snr_db / 20.0));
}

double snapshot_snr_db(const Eigen::VectorXcd& p, double sigma) {
    if (sigma == 0.0) return kNoiseFree;
    return 20.0 * std::log10(p.norm() / (static_cast<double>(p.size()) * sigma));
}

double per_element_snr_db(double snr_db, int elements) {
    return snr_db + 10.0 * std::log10(static_cast<double>(elements));
}

PressureSnapshot add_noise(const PressureSnapshot& clean, double snr_db, std::uint64_t seed) {
    PressureSnapshot out = clean;
    out.seed = seed;
    out.snr_db = snr_db;
    const double sigma = noise_sigma_for_snr(clean.pressure, snr_db);
    out.noise_sigma = sigma;
    if (sigma == 0.0) return out;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, sigma / std::sqrt(2.0));
    for (Eigen::Index n = 0; n < out.pressure.size(); ++n) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        out.pressure(n) += complex(re, im);
    }
    return out;
}

}  // namespace ocmsd
