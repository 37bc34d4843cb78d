/**
 * @file modesolver.hpp
 * @brief Depth-direction eigen-numerics for the water column.
 *
 * Three producers of mode depth functions on a DepthGrid:
 *  - propagate_recurrence: the three-term recurrence
 *        u[l+1] = (2 - h^2 (k^2(z_l) - xi^2)) u[l] - u[l-1],  u[0] = 0
 *    shot downward from the pressure-release surface.
 *  - candidate_mode_set: an exactly orthonormal dictionary of water-column
 *    modes containing a prescribed anchor wavenumber. It needs only the sound
 *    speed profile, never the seabed.
 *  - reference_mode_set: trapped modes of a water layer over a fluid
 *    halfspace (Pekeris-type truth model), by shooting and bisection.
 *
 * All functions are normalized so that sum_l psi(z_l)^2 h = 1 over l = 0..L,
 * vanish at the surface, and have their first lobe positive.
 */
#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ocmsd/envarray.hpp"

namespace ocmsd {

enum class ModeKind { Reference, Candidate };

struct ModeSet {
    DepthGrid grid;
    std::vector<double> wavenumbers;  // strictly decreasing
    Eigen::MatrixXd functions;        // (L+1) x M, column m is mode m on the grid
    std::vector<int> orders;          // 1 + interior sign changes of each column
    ModeKind kind = ModeKind::Candidate;
    double anchor_xi = 0.0;           // Candidate only
    // Reference only: share of each mode's density-weighted energy that sits
    // in the halfspace tail. Empty for candidate sets.
    std::vector<double> tail_fraction;

    int size() const { return static_cast<int>(wavenumbers.size()); }
    bool empty() const { return wavenumbers.empty(); }
    double depth() const { return grid.bottom(); }
};

/// (omega / c(z_l))^2 on every grid node.
std::vector<double> wavenumber_squared_profile(const Environment& env, const DepthGrid& grid,
                                               double frequency_hz);

/// Unnormalized trial solution for horizontal wavenumber xi, with u[0] = 0, u[1] = h.
/// Throws std::domain_error if xi is not in (0, 2*pi*f/min c).
std::vector<double> propagate_recurrence(const Environment& env, const DepthGrid& grid,
                                         double frequency_hz, double xi);

/// Same recurrence with caller-chosen starting values u[0], u[1].
std::vector<double> propagate_recurrence(std::span<const double> k_squared, double step,
                                         double xi, double u0, double u1);

/// Orthonormal water-column dictionary Psi(z, xi_anchor) clipped to the band.
///
/// The recurrence trial solution for xi_anchor fixes the bottom closure; the
/// symmetric tridiagonal operator on nodes 1..L is completed by a last
/// diagonal entry chosen so that the trial solution is an exact eigenvector.
/// Its eigenvectors are orthonormal over l = 0..L to rounding error.
ModeSet candidate_mode_set(const Environment& env, const DepthGrid& grid, double frequency_hz,
                           double xi_anchor, const WavenumberBand& band);

/// Same as above, reusing a precomputed k^2 profile (hot path of the outer search).
ModeSet candidate_mode_set(std::span<const double> k_squared, const DepthGrid& grid,
                           double xi_anchor, const WavenumberBand& band);

struct ReferenceSolverOptions {
    int bracket_points = 4000;
    double wavenumber_tol = 1e-10;
};

/// Trapped modes of the environment's water layer over its halfspace.
/// Returns an empty set (with a warning on stderr) when no mode is trapped.
ModeSet reference_mode_set(const Environment& env, const DepthGrid& grid, double frequency_hz,
                           const ReferenceSolverOptions& opts = {});

/// Linear interpolation of every mode onto the given depths; rows follow depths,
/// columns follow modes. Throws std::domain_error for depths outside [0, H].
Eigen::MatrixXd sample_at_depths(const ModeSet& modes, std::span<const double> depths);

/// 1 + number of sign changes between nodes where |psi| is not negligible.
int count_order(const Eigen::Ref<const Eigen::VectorXd>& psi);

/// Gram matrix G_mn = sum_l psi_m(z_l) psi_n(z_l) h.
Eigen::MatrixXd gram_matrix(const ModeSet& modes);

}  // namespace ocmsd
