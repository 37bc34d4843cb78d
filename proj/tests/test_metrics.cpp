#include "doctest.h"

#include <cmath>

#include "fixtures.hpp"
#include "ocmsd/metrics.hpp"

using namespace ocmsd;

namespace {

ModeSet bench_reference() {
    const auto env = testing::yellow_sea();
    return reference_mode_set(env, DepthGrid::for_frequency(env, 596.0), 596.0);
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("mode function error") {
    const auto ref = bench_reference();
    auto errs = mode_function_error(ref, ref);
    REQUIRE(static_cast<int>(errs.size()) == ref.size());
    for (double e : errs) CHECK(e == 0.0);

    ModeSet flipped = ref;
    flipped.functions.col(0) *= -1.0;
    CHECK(mode_function_error(flipped, ref)[0] == 0.0);

    ModeSet offset = ref;
    offset.functions.col(0).array() += 0.01;
    CHECK(mode_function_error(offset, ref)[0] == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("unmatched reference modes are NaN") {
    const auto ref = bench_reference();
    ModeSet fewer = ref;
    fewer.functions = ref.functions.leftCols(4);
    fewer.wavenumbers.resize(4);
    fewer.orders.resize(4);
    const auto errs = mode_function_error(fewer, ref);
    REQUIRE(static_cast<int>(errs.size()) == ref.size());
    for (int m = 0; m < 4; ++m) CHECK(errs[m] == 0.0);
    for (int m = 4; m < ref.size(); ++m) CHECK(std::isnan(errs[m]));
}

TEST_CASE("greedy one-to-one matching by wavenumber") {
    const std::vector<double> ref{2.50, 2.45, 2.40};
    const std::vector<double> est{2.449, 2.501, 2.30, 2.452};
    const auto p = match_modes(est, ref);
    CHECK(p == std::vector<int>{1, 0, 3});
    CHECK(match_modes({}, ref) == std::vector<int>{-1, -1, -1});
}

TEST_CASE("amplitude error") {
    Eigen::VectorXcd a(3);
    a << complex(1, 2), complex(-0.5, 0.1), complex(0, 3);
    const ModeAmplitudes ref{a};
    CHECK(amplitude_error(ref, ref) == doctest::Approx(0.0).scale(1.0));
    for (double theta : {0.3, 2.0, -2.9}) {
        const ModeAmplitudes rot{std::polar(2.5, theta) * a};
        CHECK(amplitude_error(rot, ref) <= 1e-14);
    }
    Eigen::VectorXcd u(2), v(2);
    u << 1.0, 0.0;
    v << std::cos(kPi / 3), std::sin(kPi / 3);
    CHECK(amplitude_error(ModeAmplitudes{u}, ModeAmplitudes{v}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS(amplitude_error(ModeAmplitudes{Eigen::VectorXcd::Zero(2)}, ModeAmplitudes{v}));
}

TEST_CASE("align_amplitudes gathers by pairing") {
    Eigen::VectorXcd e(3);
    e << 1.0, 2.0, 3.0;
    const auto out = align_amplitudes(ModeAmplitudes{e}, {2, -1, 0});
    REQUIRE(out.size() == 3);
    CHECK(out(0) == complex(3.0));
    CHECK(out(1) == complex(0.0));
    CHECK(out(2) == complex(1.0));
}

}
