/**
 * @file ocms.hpp
 * @brief Orthogonality-constrained modal search: mode parameters from one snapshot.
 *
 * For every trial anchor wavenumber xi in the search band the water-column
 * dictionary Psi(xi) is sampled at the array depths and the sparsest complex
 * amplitude vector consistent with the data is found:
 *
 *     J(xi) = min ||a||_1  s.t.  ||p - Psi(xi) a||_2 <= eps_n.
 *
 * The estimate is the dictionary and amplitudes at argmin_xi J(xi).
 */
#pragma once

#include <span>
#include <utility>
#include <vector>

#include "ocmsd/bpdn.hpp"
#include "ocmsd/envarray.hpp"
#include "ocmsd/fieldsynth.hpp"
#include "ocmsd/modesolver.hpp"

namespace ocmsd {

struct SolverConfig {
    double epsilon_n = 0.0;
    WavenumberBand band{0.0, 0.0};
    int coarse_grid_points = 2000;
    double refine_tolerance = 1e-6;
    int lasso_max_iter = 5000;
    double lasso_rel_tol = 1e-9;
    double grid_max_step = 0.05;  // depth grid step cap, metres
    int workers = 1;
    // When no grid point is feasible, widen epsilon_n to 1.1x the smallest
    // least-squares residual over the grid and search again instead of failing.
    // Noise-free or model-mismatched snapshots need this.
    bool relax_infeasible = false;

    void validate() const;
    BpdnOptions bpdn_options() const;
};

struct ObjectiveSample {
    double xi;
    double l1_norm;  // +inf where the residual bound cannot be met
};

struct ModeEstimate {
    ModeSet modes;
    ModeAmplitudes amplitudes;
    double l1_norm = 0.0;
    double residual_l2 = 0.0;
    double epsilon_n = 0.0;  // as used; may exceed the configured value when relaxed
    bool epsilon_relaxed = false;
    double anchor_xi = 0.0;
    bool degenerate = false;  // every amplitude is zero
    std::vector<ObjectiveSample> objective_trace;  // coarse grid first, then refinement
};

/// Outer search over the band. Throws std::runtime_error when no grid point is
/// feasible and relax_infeasible is off.
ModeEstimate estimate_modes(const PressureSnapshot& snapshot, const Environment& water,
                            const SolverConfig& cfg);

/// Single objective evaluation at a fixed anchor (what the outer search calls).
struct AnchorFit {
    ModeSet modes;
    BpdnResult fit;
};
AnchorFit fit_at_anchor(const PressureSnapshot& snapshot, std::span<const double> k_squared,
                        const DepthGrid& grid, double xi, const SolverConfig& cfg);

enum class EpsilonMode { KnownSigma, OffBinEstimate };

inline constexpr double kEpsilonMargin = 1.1;
inline constexpr double kEpsilonFloor = 1e-12;

/// 1.1 sigma sqrt(N): expected noise norm with a 10% margin. Needs noise_sigma.
double epsilon_known_sigma(const PressureSnapshot& snapshot);

/// 1.1 x median of the norms of signal-free neighbouring bins.
double epsilon_off_bin(std::span<const Eigen::VectorXcd> aux_bins);

/// Dispatches on mode; OffBinEstimate reads snapshot.aux_bins.
double epsilon_from_noise(const PressureSnapshot& snapshot, EpsilonMode mode);

}  // namespace ocmsd
