#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cldnn/ls_gain.hpp"

#include <cmath>
#include <random>

using namespace cldnn;

TEST_CASE("scalar forgetting-only gain matches the closed form to 1e-10") {
    // gram = 0: Gamma_inv' = -beta Gamma_inv, so Gamma(t) = gamma0 e^{beta t}.
    const double beta = 0.01, gamma0 = 1.0, dt = 0.01;
    LsGain gain(1, gamma0, beta);
    const Matrix gram = Matrix::Zero(1, 1);
    for (int i = 1; i <= 1000; ++i) {
        gain.step(gram, 0.12, dt);
        const double expected = gamma0 * std::exp(beta * i * dt);
        CHECK(std::abs(1.0 / gain.gamma_inv()(0, 0) - expected) < 1e-10 * expected);
    }
}

TEST_CASE("scalar gain with constant gram matches the affine ODE solution") {
    // Gamma_inv' = -beta Gamma_inv + gamma1 g has the solution
    // (G0 - gamma1 g / beta) e^{-beta t} + gamma1 g / beta.
    const double beta = 0.5, gamma0 = 2.0, gamma1 = 0.12, g = 3.0, dt = 0.005;
    LsGain gain(1, gamma0, beta);
    Matrix gram(1, 1);
    gram << g;
    const double steady = gamma1 * g / beta;
    for (int i = 1; i <= 400; ++i) {
        gain.step(gram, gamma1, dt);
        const double expected = (1.0 / gamma0 - steady) * std::exp(-beta * i * dt) + steady;
        CHECK(gain.gamma_inv()(0, 0) == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("beta = 0 with zero gram is a constant gain") {
    LsGain gain(2, 4.0, 0.0);
    const Matrix before = gain.gamma_inv();
    for (int i = 0; i < 100; ++i) gain.step(Matrix::Zero(2, 2), 0.12, 0.01);
    CHECK((gain.gamma_inv() - before).norm() == 0.0);
    const auto [lo, hi] = gain.gamma_eigen_range();
    CHECK(lo == doctest::Approx(4.0));
    CHECK(hi == doctest::Approx(4.0));
}

TEST_CASE("upper eigenvalue gate freezes growth") {
    // Pure forgetting doubles Gamma every ln(2)/beta seconds; with a gate at
    // 2.0 the gain must stop there and never overshoot.
    LsGain gain(1, 1.0, 1.0, 1e-3, 2.0);
    for (int i = 0; i < 2000; ++i) {
        gain.step(Matrix::Zero(1, 1), 0.12, 0.01);
        CHECK(gain.gamma_eigen_range().second <= 2.0 * (1.0 + 1e-8));
    }
    CHECK(gain.gamma_eigen_range().second > 1.9);  // actually reached the gate
}

TEST_CASE("lower eigenvalue gate freezes shrinkage") {
    Matrix gram(1, 1);
    gram << 100.0;
    LsGain gain(1, 1.0, 0.0, 0.5, 1e3);
    for (int i = 0; i < 2000; ++i) {
        gain.step(gram, 1.0, 0.01);
        CHECK(gain.gamma_eigen_range().first >= 0.5 * (1.0 - 1e-8));
    }
    CHECK(gain.gamma_eigen_range().first < 0.55);
}

TEST_CASE("matrix steps preserve symmetry and positive definiteness") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    LsGain gain(4, 1.0, 0.01);
    for (int i = 0; i < 500; ++i) {
        Matrix a(4, 4);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) a(r, c) = dist(rng);
        const Matrix gram = a.transpose() * a;  // PSD
        gain.step(gram, 0.12, 0.01);
        const Matrix& gi = gain.gamma_inv();
        CHECK((gi - gi.transpose()).norm() < 1e-12 * gi.norm());
        CHECK(gain.gamma_eigen_range().first > 0.0);
    }
}

TEST_CASE("apply solves Gamma * v through the stored inverse") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    LsGain gain(3, 2.5, 0.01);
    Matrix a(3, 3);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) a(r, c) = dist(rng);
    gain.step(a.transpose() * a, 0.12, 0.01);

    Vector v(3);
    v << 1.0, -2.0, 0.5;
    const Vector got = gain.apply(v);
    const Vector expected = gain.gamma_inv().inverse() * v;
    CHECK((got - expected).norm() < 1e-10 * expected.norm());
}

TEST_CASE("invalid construction and lost definiteness throw") {
    CHECK_THROWS_AS(LsGain(2, 0.0, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(LsGain(2, -1.0, 0.01), std::invalid_argument);
}
