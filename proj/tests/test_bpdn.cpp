#include "doctest.h"

#include <cmath>
#include <random>

#include "bpdn_oracle.hpp"
#include "ocmsd/bpdn.hpp"

using namespace ocmsd;

TEST_SUITE("bpdn") {

TEST_CASE("identity dictionary with zero tolerance returns the data") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    Eigen::VectorXcd p(6);
    for (int i = 0; i < 6; ++i) p(i) = {g(rng), g(rng)};
    const auto r = bpdn_solve(Eigen::MatrixXd(Eigen::MatrixXd::Identity(6, 6)), p, 0.0);
    REQUIRE(r.feasible());
    CHECK((r.a - p).norm() <= 1e-9 * p.norm());
}

TEST_CASE("tolerance above the data norm gives the zero vector") {
    std::mt19937_64 rng(2);
    const auto s = testing::random_instance(rng);
    const auto r = bpdn_solve(s.dictionary, s.p, s.p.norm() * 1.0001);
    REQUIRE(r.feasible());
    CHECK(r.a.norm() == 0.0);
    CHECK(r.l1_norm == 0.0);
}

TEST_CASE("infeasible exactly when least squares cannot meet the bound") {
    // 8 x 3 dictionary cannot fit a generic 8-vector
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    Eigen::MatrixXcd d(8, 3);
    Eigen::VectorXcd p(8);
    for (int i = 0; i < 8; ++i) {
        p(i) = {g(rng), g(rng)};
        for (int j = 0; j < 3; ++j) d(i, j) = {g(rng), g(rng)};
    }
    const Eigen::VectorXcd ls = d.colPivHouseholderQr().solve(p);
    const double floor = (p - d * ls).norm();
    const auto below = bpdn_solve(d, p, 0.99 * floor);
    CHECK_FALSE(below.feasible());
    CHECK(below.ls_residual == doctest::Approx(floor).epsilon(1e-10));
    const auto above = bpdn_solve(d, p, 1.01 * floor);
    CHECK(above.feasible());
    CHECK(above.residual <= 1.01 * floor * (1.0 + 1e-6));
}

TEST_CASE("L1 objective is non-increasing in the tolerance") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        const auto s = testing::random_instance(rng);
        double prev = std::numeric_limits<double>::infinity();
        for (double scale : {0.5, 1.0, 2.0, 8.0}) {
            const auto r = bpdn_solve(s.dictionary, s.p, scale * s.epsilon);
            REQUIRE(r.feasible());
            CHECK(r.residual <= scale * s.epsilon * (1.0 + 1e-6));
            CHECK(r.l1_norm <= prev * (1.0 + 1e-6));
            prev = r.l1_norm;
        }
    }
}

TEST_CASE("support agrees with the exhaustive oracle on certified instances") {
    std::mt19937_64 rng(2024);
    int certified = 0, agree = 0;
    for (int inst = 0; inst < 40; ++inst) {
        const auto s = testing::random_instance(rng);
        const auto r = bpdn_solve(s.dictionary, s.p, s.epsilon);
        CHECK(r.residual <= s.epsilon * (1.0 + 1e-6));
        if (testing::certificate_margin(s) >= 1.0) continue;
        ++certified;
        agree += testing::significant_support(r.a) == testing::oracle_support(s);
    }
    REQUIRE(certified > 0);
    CHECK(agree >= 0.9 * certified);
}

TEST_CASE("real dictionary overload matches the complex one") {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> g;
    Eigen::MatrixXd d(10, 6);
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 6; ++j) d(i, j) = g(rng);
    Eigen::VectorXcd p(10);
    for (int i = 0; i < 10; ++i) p(i) = {g(rng), g(rng)};
    const auto a = bpdn_solve(d, p, 0.8 * p.norm());
    const auto b = bpdn_solve(Eigen::MatrixXcd(d.cast<std::complex<double>>()), p, 0.8 * p.norm());
    CHECK((a.a - b.a).norm() <= 1e-8 * (1.0 + b.a.norm()));
}

TEST_CASE("complex shrinkage keeps the phase") {
    Eigen::VectorXcd v(3);
    v << std::complex<double>(3, 4), std::complex<double>(0.1, 0), std::complex<double>(0, -2);
    const auto s = complex_shrink(v, 1.0);
    CHECK(std::abs(s(0) - std::complex<double>(2.4, 3.2)) <= 1e-15);
    CHECK(s(1) == std::complex<double>(0, 0));
    CHECK(std::abs(s(2) - std::complex<double>(0, -1)) <= 1e-15);
}

TEST_CASE("non-finite input is rejected") {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Identity(3, 3);
    Eigen::VectorXcd p = Eigen::VectorXcd::Ones(3);
    p(1) = std::complex<double>(std::nan(""), 0.0);
    CHECK_THROWS(bpdn_solve(d, p, 0.1));
}

}
