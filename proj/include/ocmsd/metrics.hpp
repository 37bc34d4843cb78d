// Error metrics between estimated and reference modal quantities.
#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ocmsd/fieldsynth.hpp"
#include "ocmsd/modesolver.hpp"

namespace ocmsd {

/// For each reference mode, the index of the estimated mode paired with it
/// (-1 when none). Pairs are formed greedily by smallest wavenumber gap, one
/// to one.
std::vector<int> match_modes(const std::vector<double>& estimated, const std::vector<double>& reference);

/// (1/H) * integral |psi_hat_m - phi_m| dz for every reference mode, after
/// flipping psi_hat_m when its inner product with phi_m is negative.
/// Unmatched reference modes get NaN. Both sets must share a grid.
std::vector<double> mode_function_error(const ModeSet& estimated, const ModeSet& reference);

/// Same as above with an explicit pairing from match_modes.
std::vector<double> mode_function_error(const ModeSet& estimated, const ModeSet& reference,
                                        const std::vector<int>& pairing);

/// ||a_hat - a||_2 after scaling both to unit norm and rotating a_hat by the
/// global phase that maximises Re<a_hat, a>.
double amplitude_error(const ModeAmplitudes& estimated, const ModeAmplitudes& reference);

/// Gathers estimated values into reference order; unmatched entries are zero.
Eigen::VectorXcd align_amplitudes(const ModeAmplitudes& estimated, const std::vector<int>& pairing);

}  // namespace ocmsd
