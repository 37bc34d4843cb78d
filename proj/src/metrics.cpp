#include "ocmsd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "ocmsd/dss.hpp"

namespace ocmsd {

std::vector<int> match_modes(const std::vector<double>& estimated, const std::vector<double>& reference) {
    std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
    pairs.reserve(estimated.size() * reference.size());
    for (std::size_t r = 0; r < reference.size(); ++r)
        for (std::size_t e = 0; e < estimated.size(); ++e)
            pairs.emplace_back(std::abs(estimated[e] - reference[r]), r, e);
    std::sort(pairs.begin(), pairs.end());

    std::vector<int> pairing(reference.size(), -1);
    std::vector<bool> used(estimated.size(), false);
    for (const auto& [gap, r, e] : pairs) {
        if (pairing[r] >= 0 || used[e]) continue;
        pairing[r] = static_cast<int>(e);
        used[e] = true;
    }
    return pairing;
}

std::vector<double> mode_function_error(const ModeSet& estimated, const ModeSet& reference) {
    return mode_function_error(estimated, reference, match_modes(estimated.wavenumbers, reference.wavenumbers));
}

std::vector<double> mode_function_error(const ModeSet& estimated, const ModeSet& reference,
                                        const std::vector<int>& pairing) {
    if (estimated.grid.size() != reference.grid.size() ||
        std::abs(estimated.grid.step() - reference.grid.step()) > 1e-12 * reference.grid.step())
        throw std::invalid_argument("mode sets live on different grids");
    if (pairing.size() != static_cast<std::size_t>(reference.size()))
        throw std::invalid_argument("pairing length does not match the reference set");

    const double h = reference.grid.step();
    const double H = reference.depth();
    std::vector<double> out(pairing.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t m = 0; m < pairing.size(); ++m) {
        if (pairing[m] < 0) continue;
        const auto phi = reference.functions.col(static_cast<Eigen::Index>(m));
        Eigen::VectorXd psi = estimated.functions.col(pairing[m]);
        if (psi.dot(phi) < 0.0) psi = -psi;
        out[m] = trapezoid((psi - phi).cwiseAbs(), h) / H;
    }
    return out;
}

double amplitude_error(const ModeAmplitudes& estimated, const ModeAmplitudes& reference) {
    const Eigen::VectorXcd& e = estimated.values;
    const Eigen::VectorXcd& r = reference.values;
    if (e.size() != r.size()) throw std::invalid_argument("amplitude vectors differ in length");
    const double ne = e.norm();
    const double nr = r.norm();
    if (ne == 0.0 || nr == 0.0) throw std::invalid_argument("amplitude error of a zero vector");
    const complex inner = e.dot(r);  // conj(e) . r
    const complex phase = std::abs(inner) > 0.0 ? inner / std::abs(inner) : complex(1.0, 0.0);
    return (phase * e / ne - r / nr).norm();
}

Eigen::VectorXcd align_amplitudes(const ModeAmplitudes& estimated, const std::vector<int>& pairing) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(pairing.size()));
    for (std::size_t m = 0; m < pairing.size(); ++m)
        if (pairing[m] >= 0) out(static_cast<Eigen::Index>(m)) = estimated.values(pairing[m]);
    return out;
}

}  // namespace ocmsd
