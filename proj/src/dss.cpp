#include "ocmsd/dss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ocmsd/parallel.hpp"

namespace ocmsd {

double trapezoid(const Eigen::Ref<const Eigen::VectorXd>& f, double step) {
    const Eigen::Index n = f.size();
    if (n < 2) return 0.0;
    return step * (f.sum() - 0.5 * (f(0) + f(n - 1)));
}

Eigen::VectorXd ambiguity(const ModeSet& modes, std::span<const double> amp_moduli,
                          std::span<const int> signs) {
    const auto M = static_cast<std::size_t>(modes.size());
    if (amp_moduli.size() != M || signs.size() != M)
        throw std::invalid_argument("amplitude, sign and mode counts disagree");
    Eigen::VectorXd w(static_cast<Eigen::Index>(M));
    for (std::size_t m = 0; m < M; ++m) {
        if (amp_moduli[m] < 0.0) throw std::invalid_argument("amplitude moduli must be non-negative");
        w(static_cast<Eigen::Index>(m)) = amp_moduli[m] * signs[m];
    }
    if (w.cwiseAbs().maxCoeff() == 0.0) throw std::runtime_error("degenerate estimate: all amplitudes are zero");
    Eigen::VectorXd d = (modes.functions * w).array().square();
    const double area = trapezoid(d, modes.grid.step());
    if (!(area > 0.0)) throw std::runtime_error("degenerate estimate: ambiguity function vanishes");
    return d / area;
}

Eigen::VectorXd dirichlet_template(double z_q, int modes, double water_depth, const DepthGrid& grid,
                                   double epsilon) {
    if (!(z_q > 0.0 && z_q <= water_depth * (1.0 + 1e-12)))
        throw std::invalid_argument("template centre must lie in (0, H]");
    if (modes < 1) throw std::invalid_argument("template needs at least one mode");
    const double h = grid.step();
    const double peak = 4.0 * (modes + 1.0) * (modes + 1.0);
    Eigen::VectorXd ds(grid.size());
    for (int l = 0; l < grid.size(); ++l) {
        const double x = grid.depth(l) - z_q;
        double v;
        if (std::abs(x) < 0.5 * h) {
            v = peak;
        } else {
            const double ratio = std::sin((modes + 1.0) * kPi * x / water_depth) /
                                 std::sin(kPi * x / (2.0 * water_depth));
            v = ratio * ratio;
        }
        ds(l) = v + epsilon;
    }
    return ds / trapezoid(ds, h);
}

double kl_divergence(const Eigen::Ref<const Eigen::VectorXd>& d, const Eigen::Ref<const Eigen::VectorXd>& ds,
                     const DepthGrid& grid) {
    if (d.size() != ds.size() || d.size() != grid.size())
        throw std::invalid_argument("KL operands must live on the same grid");
    Eigen::VectorXd integrand(d.size());
    for (Eigen::Index l = 0; l < d.size(); ++l) {
        if (d(l) < 0.0 || ds(l) < 0.0) throw std::invalid_argument("KL operands must be non-negative");
        if (d(l) == 0.0) {
            integrand(l) = 0.0;
            continue;
        }
        if (ds(l) == 0.0) throw std::invalid_argument("KL reference must be positive where D is");
        integrand(l) = d(l) * std::log(d(l) / ds(l));
    }
    return trapezoid(integrand, grid.step());
}

double kl_divergence_discrete(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw std::invalid_argument("KL operands differ in length");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < 0.0 || q[i] < 0.0) throw std::invalid_argument("KL operands must be non-negative");
        if (p[i] > 0.0) s += p[i] * std::log(p[i] / q[i]);
    }
    return s;
}

std::vector<SignHypothesis> sign_hypotheses(const ModeSet& modes, double step_m) {
    if (!(step_m > 0.0)) throw std::invalid_argument("sign step must be positive");
    const double H = modes.depth();
    const int Q = static_cast<int>(std::floor(H / step_m + 1e-9));
    std::vector<double> zq(static_cast<std::size_t>(Q));
    for (int q = 1; q <= Q; ++q) zq[static_cast<std::size_t>(q - 1)] = std::min(q * step_m, H);
    const Eigen::MatrixXd vals = sample_at_depths(modes, zq);
    std::vector<SignHypothesis> out(static_cast<std::size_t>(Q));
    for (int q = 1; q <= Q; ++q) {
        auto& h = out[static_cast<std::size_t>(q - 1)];
        h.q = q;
        h.depth_zq_m = zq[static_cast<std::size_t>(q - 1)];
        h.signs.resize(static_cast<std::size_t>(modes.size()));
        for (int m = 0; m < modes.size(); ++m) h.signs[static_cast<std::size_t>(m)] = mode_sign(vals(q - 1, m));
    }
    return out;
}

DepthResult estimate_depth(const ModeSet& modes, std::span<const double> amp_moduli,
                           const DssOptions& opts) {
    const auto M = static_cast<std::size_t>(modes.size());
    if (amp_moduli.size() != M) throw std::invalid_argument("amplitude count does not match mode count");
    const double amax = M ? *std::max_element(amp_moduli.begin(), amp_moduli.end()) : 0.0;
    if (!(amax > 0.0)) throw std::runtime_error("degenerate estimate: all amplitudes are zero");

    // weak modes keep a + sign and stay out of the template count
    std::vector<bool> active(M);
    int active_count = 0;
    for (std::size_t m = 0; m < M; ++m) {
        active[m] = amp_moduli[m] >= opts.amplitude_threshold * amax;
        active_count += active[m] ? 1 : 0;
    }

    auto hyps = sign_hypotheses(modes, opts.sign_step_m);
    for (auto& h : hyps)
        for (std::size_t m = 0; m < M; ++m)
            if (!active[m]) h.signs[m] = 1;

    const double H = modes.depth();
    std::vector<double> kl(hyps.size());
    parallel_for(hyps.size(), opts.workers, [&](std::size_t i) {
        const Eigen::VectorXd d = ambiguity(modes, amp_moduli, hyps[i].signs);
        const Eigen::VectorXd ds =
            dirichlet_template(hyps[i].depth_zq_m, active_count, H, modes.grid, opts.template_epsilon);
        kl[i] = kl_divergence(d, ds, modes.grid);
    });

    const auto q0 = static_cast<std::size_t>(std::min_element(kl.begin(), kl.end()) - kl.begin());
    DepthResult res;
    res.selected_q0 = hyps[q0].q;
    res.selected_zq0_m = hyps[q0].depth_zq_m;
    res.selected_signs = hyps[q0].signs;
    res.ambiguity = ambiguity(modes, amp_moduli, res.selected_signs);
    Eigen::Index peak = 0;
    res.ambiguity.maxCoeff(&peak);
    res.estimated_depth_m = modes.grid.depth(static_cast<int>(peak));
    res.kl_trace = std::move(kl);
    res.template_modes = active_count;
    return res;
}

DepthResult estimate_depth(const ModeEstimate& estimate, const DssOptions& opts) {
    const Eigen::VectorXd mod = estimate.amplitudes.moduli();
    return estimate_depth(estimate.modes, std::span<const double>(mod.data(), static_cast<std::size_t>(mod.size())),
                          opts);
}

}  // namespace ocmsd
