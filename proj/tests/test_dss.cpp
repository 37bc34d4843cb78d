#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "fixtures.hpp"
#include "ocmsd/dss.hpp"

using namespace ocmsd;

namespace {

struct Bench {
    Environment env = testing::yellow_sea();
    DepthGrid grid = DepthGrid::for_frequency(env, 596.0);
    ModeSet ref = reference_mode_set(env, grid, 596.0);
};

const Bench& bench() {
    static const Bench b;
    return b;
}

std::vector<double> moduli_for(const ModeSet& modes, double zs) {
    const auto a = mode_amplitudes(modes, SourceSpec{596.0, zs, 5000.0});
    const Eigen::VectorXd m = a.moduli();
    return {m.data(), m.data() + m.size()};
}

std::vector<int> true_signs(const ModeSet& modes, double zs) {
    const std::vector<double> at{zs};
    const Eigen::MatrixXd phi = sample_at_depths(modes, at);
    std::vector<int> s(modes.size());
    for (int m = 0; m < modes.size(); ++m) s[m] = mode_sign(phi(0, m));
    return s;
}

}  // namespace

TEST_SUITE("dss") {

TEST_CASE("trapezoid rule") {
    Eigen::VectorXd f(5);
    f << 0, 1, 2, 3, 4;
    CHECK(trapezoid(f, 0.5) == doctest::Approx(4.0));
}

TEST_CASE("ambiguity is normalised and sign-flip invariant") {
    const auto& b = bench();
    const auto mod = moduli_for(b.ref, 20.0);
    auto signs = true_signs(b.ref, 20.0);
    const Eigen::VectorXd d = ambiguity(b.ref, mod, signs);
    CHECK(trapezoid(d, b.grid.step()) == doctest::Approx(1.0).epsilon(1e-12));
    for (auto& s : signs) s = -s;
    const Eigen::VectorXd flipped = ambiguity(b.ref, mod, signs);
    CHECK((d - flipped).cwiseAbs().maxCoeff() <= 1e-14 * d.maxCoeff());

    const std::vector<double> zeros(b.ref.size(), 0.0);
    CHECK_THROWS(ambiguity(b.ref, zeros, signs));
}

TEST_CASE("single mode ambiguity is the squared mode shape") {
    const auto& b = bench();
    ModeSet one = b.ref;
    one.functions = b.ref.functions.leftCols(1);
    one.wavenumbers.resize(1);
    one.orders.resize(1);
    const std::vector<double> mod{0.7};
    const Eigen::VectorXd dp = ambiguity(one, mod, std::vector<int>{1});
    const Eigen::VectorXd dm = ambiguity(one, mod, std::vector<int>{-1});
    CHECK((dp - dm).norm() == 0.0);
    Eigen::VectorXd sq = one.functions.col(0).array().square();
    sq /= trapezoid(sq, b.grid.step());
    CHECK((dp - sq).cwiseAbs().maxCoeff() <= 1e-12);

    // with one mode the depth is the peak of that mode wherever the source is
    Eigen::Index peak;
    sq.maxCoeff(&peak);
    const auto r = estimate_depth(one, mod);
    CHECK(r.estimated_depth_m == doctest::Approx(b.grid.depth(static_cast<int>(peak))));
}

TEST_CASE("true signs put the ambiguity peak near the source") {
    const auto& b = bench();
    for (double zs : {6.5, 12.0, 20.0, 25.3}) {
        CAPTURE(zs);
        const Eigen::VectorXd d = ambiguity(b.ref, moduli_for(b.ref, zs), true_signs(b.ref, zs));
        Eigen::Index peak;
        d.maxCoeff(&peak);
        CHECK(std::abs(b.grid.depth(static_cast<int>(peak)) - zs) <= 0.5);
    }
}

TEST_CASE("Dirichlet template shape") {
    const DepthGrid grid(0.01, 3100);
    const double H = 31.0, zq = 20.0;
    const int M = 10;
    const double eps = 1e-6;
    const Eigen::VectorXd t = dirichlet_template(zq, M, H, grid, eps);
    CHECK(trapezoid(t, grid.step()) == doctest::Approx(1.0).epsilon(1e-10));
    Eigen::Index peak;
    t.maxCoeff(&peak);
    CHECK(grid.depth(static_cast<int>(peak)) == doctest::Approx(zq));
    // peak-to-zero ratio pins the limit value 4 (M + 1)^2 at zq
    const double zero = zq + H / (M + 1);
    const int lz = static_cast<int>(std::lround(zero / grid.step()));
    const double s = std::sin((M + 1) * kPi * (grid.depth(lz) - zq) / H) / std::sin(kPi * (grid.depth(lz) - zq) / (2 * H));
    CHECK(t(lz) / t(peak) == doctest::Approx((s * s + eps) / (4.0 * (M + 1) * (M + 1) + eps)).epsilon(1e-9));
    CHECK(t(lz) < 1e-4 * t(peak));
    CHECK(t.minCoeff() > 0.0);
}

TEST_CASE("KL divergence") {
    const DepthGrid grid(0.1, 310);
    const Eigen::VectorXd t = dirichlet_template(12.0, 6, 31.0, grid);
    CHECK(std::abs(kl_divergence(t, t, grid)) <= 1e-12);

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        Eigen::VectorXd p(grid.size()), q(grid.size());
        for (int l = 0; l < grid.size(); ++l) {
            p(l) = u(rng) < 0.1 ? 0.0 : u(rng);
            q(l) = 1e-3 + u(rng);
        }
        p /= trapezoid(p, grid.step());
        q /= trapezoid(q, grid.step());
        CHECK(kl_divergence(p, q, grid) >= -1e-12);
    }

    const std::vector<double> p{0.8, 0.2}, q{0.5, 0.5};
    CHECK(kl_divergence_discrete(p, q) == doctest::Approx(0.8 * std::log(1.6) + 0.2 * std::log(0.4)).epsilon(1e-14));
    CHECK(kl_divergence_discrete(p, q) == doctest::Approx(0.19274).epsilon(1e-4));

    Eigen::VectorXd neg = t;
    neg(3) = -1.0;
    CHECK_THROWS(kl_divergence(neg, t, grid));
}

TEST_CASE("sign hypotheses sample the mode signs on the lattice") {
    const auto& b = bench();
    const auto hyp = sign_hypotheses(b.ref, 0.1);
    REQUIRE(hyp.size() == 310);
    for (const auto& h : {hyp.front(), hyp[153], hyp.back()}) {
        CHECK(h.depth_zq_m == doctest::Approx(0.1 * h.q));
        CHECK(h.signs == true_signs(b.ref, h.depth_zq_m));
    }
}

TEST_CASE("truth-fed search recovers interior source depths") {
    const auto& b = bench();
    for (double zs : {6.5, 9.5, 13.5, 17.5, 20.0, 22.75, 26.5}) {
        CAPTURE(zs);
        const auto r = estimate_depth(b.ref, moduli_for(b.ref, zs));
        CHECK(std::abs(r.estimated_depth_m - zs) <= 0.5);
        CHECK(r.template_modes == b.ref.size());
        CHECK(static_cast<int>(r.kl_trace.size()) == 310);
        CHECK(r.ambiguity.size() == b.grid.size());
    }
}

TEST_CASE("global sign flip leaves the depth unchanged") {
    const auto& b = bench();
    ModeSet neg = b.ref;
    neg.functions = -b.ref.functions;
    const auto mod = moduli_for(b.ref, 17.5);
    const auto r1 = estimate_depth(b.ref, mod);
    const auto r2 = estimate_depth(neg, mod);
    CHECK(r1.estimated_depth_m == r2.estimated_depth_m);
    CHECK(r1.selected_q0 == r2.selected_q0);
}

TEST_CASE("weak modes are excluded from the template order") {
    const auto& b = bench();
    auto mod = moduli_for(b.ref, 20.0);
    const double top = *std::max_element(mod.begin(), mod.end());
    mod.back() = 1e-5 * top;
    const auto r = estimate_depth(b.ref, mod);
    CHECK(r.template_modes == b.ref.size() - 1);
}

}
