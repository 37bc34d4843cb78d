/**
 * @file dss.hpp
 * @brief Depth-sign search and source depth estimation.
 *
 * For each hypothesised depth z_q on a 0.1 m lattice the mode signs
 * sign(psi_m(z_q)) compensate the amplitude moduli in the depth ambiguity
 * function D(z, q). The hypothesis whose D is closest (KL divergence) to the
 * Dirichlet-type template centred on z_q wins; the depth is argmax_z D(z, q0).
 */
#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ocmsd/modesolver.hpp"
#include "ocmsd/ocms.hpp"

namespace ocmsd {

struct SignHypothesis {
    int q = 0;
    double depth_zq_m = 0.0;
    std::vector<int> signs;  // +1 / -1 per mode
};

struct DepthResult {
    double estimated_depth_m = 0.0;
    int selected_q0 = 0;
    double selected_zq0_m = 0.0;
    std::vector<int> selected_signs;
    Eigen::VectorXd ambiguity;     // D(z, q0) on the mode grid
    std::vector<double> kl_trace;  // KL(q), q = 1..Q
    int template_modes = 0;        // M used in the template
};

struct DssOptions {
    double sign_step_m = 0.1;
    double amplitude_threshold = 1e-3;  // relative to max |a|
    double template_epsilon = 1e-6;
    int workers = 1;
};

/// sign(0) = +1.
inline int mode_sign(double v) { return v < 0.0 ? -1 : 1; }

/// Trapezoid integral of samples on a uniform grid.
double trapezoid(const Eigen::Ref<const Eigen::VectorXd>& f, double step);

/// |sum_m psi_m(z) |a_m| delta_m|^2 normalised to unit integral over [0, H].
Eigen::VectorXd ambiguity(const ModeSet& modes, std::span<const double> amp_moduli,
                          std::span<const int> signs);

/// (|sin((M+1) pi (z - zq)/H) / sin(pi (z - zq)/(2H))|^2 + eps), normalised.
/// Nodes within h/2 of zq take the limit value (2(M+1))^2.
Eigen::VectorXd dirichlet_template(double z_q, int modes, double water_depth, const DepthGrid& grid,
                                   double epsilon = 1e-6);

/// Trapezoid quadrature of D ln(D / Ds); zero where D vanishes.
double kl_divergence(const Eigen::Ref<const Eigen::VectorXd>& d, const Eigen::Ref<const Eigen::VectorXd>& ds,
                     const DepthGrid& grid);

/// Plain sum_i p_i ln(p_i / q_i) for discrete distributions.
double kl_divergence_discrete(std::span<const double> p, std::span<const double> q);

/// Sign hypotheses on the lattice z_q = q * step, q = 1..floor(H/step).
std::vector<SignHypothesis> sign_hypotheses(const ModeSet& modes, double step_m);

DepthResult estimate_depth(const ModeSet& modes, std::span<const double> amp_moduli,
                           const DssOptions& opts = {});

DepthResult estimate_depth(const ModeEstimate& estimate, const DssOptions& opts = {});

}  // namespace ocmsd
