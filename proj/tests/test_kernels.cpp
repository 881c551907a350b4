#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <vector>

#include "ghost_spectra/kernels.hpp"

using namespace gs;

namespace {

Eigen::MatrixXd random_symmetric(int p, std::uint64_t seed) {
    Stream rng(seed);
    Eigen::MatrixXd A(p, p);
    for (int i = 0; i < p; ++i)
        for (int k = 0; k <= i; ++k) {
            const double v = rng.uniform_sym();
            A(i, k) = v;
            A(k, i) = v;
        }
    return A;
}

}  // namespace

TEST_CASE("kernel parameters implied by a preset") {
    const GammaBlockParams g = gamma_params_for(preset_model("M6"), 200);
    CHECK(g.sizes == std::vector<int>{20, 40, 140});
    REQUIRE(g.nu4.size() == 3);
    for (double v : g.nu4) CHECK(v == -2.0);
    CHECK(g.p() == 200);
    CHECK(gamma_scalar_closed_form(g) ==
          doctest::Approx(1415.9229886085736).epsilon(1e-12));

    const GammaBlockParams g4 = gamma_params_for(preset_model("M4"), 200);
    CHECK(gamma_scalar_closed_form(g4) ==
          doctest::Approx(2139.3362109487953).epsilon(1e-12));
}

TEST_CASE("kernel evaluation: dense wrapper reads only diagonals") {
    const GammaBlockParams g = gamma_params_for(preset_model("M3"), 12);
    Eigen::MatrixXd A = random_symmetric(12, 1);
    Eigen::MatrixXd B = random_symmetric(12, 2);
    const double dense = gamma_block(A, B, g);

    std::vector<std::complex<double>> da(12), db(12);
    for (int i = 0; i < 12; ++i) {
        da[static_cast<std::size_t>(i)] = A(i, i);
        db[static_cast<std::size_t>(i)] = B(i, i);
    }
    const std::complex<double> diag = gamma_block(da, db, g);
    CHECK(std::abs(diag.real() - dense) < 1e-13);
    CHECK(std::abs(diag.imag()) < 1e-15);

    // off-diagonal entries are invisible to the kernel
    A(0, 5) = 99.0;
    A(5, 0) = 99.0;
    CHECK(gamma_block(A, B, g) == doctest::Approx(dense).epsilon(1e-14));
}

TEST_CASE("kernel is bilinear and reduces to the scalar on identities") {
    const GammaBlockParams g = gamma_params_for(preset_model("M4"), 20);
    std::vector<std::complex<double>> a(20), b(20), ones(20, 1.0);
    Stream rng(3);
    for (auto& v : a) v = {rng.uniform_sym(), rng.uniform_sym()};
    for (auto& v : b) v = {rng.uniform_sym(), rng.uniform_sym()};

    const std::complex<double> base = gamma_block(a, b, g);
    std::vector<std::complex<double>> a2 = a;
    for (auto& v : a2) v *= 2.0;
    CHECK(std::abs(gamma_block(a2, b, g) - 2.0 * base) < 1e-12);

    CHECK(std::abs(gamma_block(ones, ones, g).real() - gamma_scalar_closed_form(g)) <
          1e-10);
}

TEST_CASE("energy based estimator of the scalar correction") {
    const int p = 50, n = 40;
    SUBCASE("rigid energies give exactly -2p") {
        const Eigen::VectorXd T = Eigen::VectorXd::Constant(n, p);
        CHECK(gamma_hat(T, p) == doctest::Approx(-2.0 * p).epsilon(1e-14));
    }
    SUBCASE("studentized estimator is exactly scale invariant") {
        Stream rng(8);
        Eigen::VectorXd T(n);
        for (int i = 0; i < n; ++i) T[i] = p * (1.0 + 0.1 * rng.uniform_sym());
        const double base = gamma_hat(T, p, true);
        for (double s2 : {0.01, 100.0, 1e6}) {
            const double scaled = gamma_hat((s2 * T).eval(), p, true);
            CHECK(std::abs(scaled - base) <= 1e-12 * std::abs(base));
        }
        // the raw estimator is not
        CHECK(gamma_hat((4.0 * T).eval(), p, false) !=
              doctest::Approx(gamma_hat(T, p, false)).epsilon(1e-3));
    }
}

TEST_CASE("phase indices and fluctuation rescaling") {
    const PhaseIndices one = phase_indices({{1.0, 0.5}}, 400);
    REQUIRE(one.phi.size() == 1);
    CHECK(one.phi[0] == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(one.kappa == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(one.r_p == doctest::Approx(std::pow(400.0, -0.25)).epsilon(1e-14));

    const PhaseIndices sub = phase_indices({{1.0, 1.4}}, 400);
    CHECK(sub.phi[0] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(sub.r_p == 1.0);  // below the transition nothing is rescaled

    const PhaseIndices mix = phase_indices({{1.0, 0.5}, {0.8, 1.2}}, 256);
    CHECK(mix.phi[1] == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(mix.kappa == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(mix.r_p == doctest::Approx(std::pow(256.0, -0.25)).epsilon(1e-14));
}

TEST_CASE("enumeration oracle: diagonal arguments match the kernel exactly") {
    const std::vector<int> sizes = {2, 2};
    const std::vector<double> tau = {0.5, 1.0};
    const std::vector<double> delta = {1.0, 0.6};
    Stream rng(21);
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(4, 4);
        Eigen::MatrixXd B = Eigen::MatrixXd::Zero(4, 4);
        for (int i = 0; i < 4; ++i) {
            A(i, i) = rng.uniform_sym();
            B(i, i) = rng.uniform_sym();
        }
        const OraclePair o = quadform_cov_oracle(A, B, sizes, tau, delta);
        CHECK(std::abs(o.lhs - o.rhs) <= 1e-12);
    }
}

TEST_CASE("enumeration oracle: dense remainder is the same-block radial echo") {
    // For full matrices the decomposition misses exactly
    //   sum_j s_j^2 sum_{i != k in block j} A_ik (B_ik + B_ki),
    // the radial coupling of off-diagonal same-block pairs.
    const std::vector<int> sizes = {2, 3};
    const std::vector<double> tau = {0.5, 1.2};
    const std::vector<double> delta = {1.0, 0.7};
    const int p = 5;
    const Eigen::MatrixXd A = random_symmetric(p, 4);
    const Eigen::MatrixXd B = random_symmetric(p, 9);
    const OraclePair o = quadform_cov_oracle(A, B, sizes, tau, delta);

    double echo = 0.0;
    int offset = 0;
    for (std::size_t j = 0; j < sizes.size(); ++j) {
        const double s2 = tau[j] * std::pow(static_cast<double>(p), -delta[j]);
        for (int i = offset; i < offset + sizes[j]; ++i)
            for (int k = offset; k < offset + sizes[j]; ++k)
                if (i != k) echo += s2 * A(i, k) * (B(i, k) + B(k, i));
        offset += sizes[j];
    }
    CHECK(o.lhs - o.rhs == doctest::Approx(echo).epsilon(1e-10));
    CHECK(std::abs(echo) > 1e-4);  // the probe actually probes something
}

TEST_CASE("correlation boundary kernel closed forms") {
    for (int n : {4, 8, 16, 100}) {
        const double via_beta4 = corr_boundary_gamma(n, beta4_gaussian(n));
        CHECK(via_beta4 == doctest::Approx(-4.0 * n / (n + 2.0)).epsilon(1e-12));
    }
    // independent coordinates with E Y^4 = 3/n^2 (i.i.d. normal scaled by
    // 1/sqrt(n)) give n^2 beta4 = 3, so Gamma = n^2 (3 - 1)/(n-1)... sanity:
    CHECK(corr_boundary_gamma(10, 3.0 / 100.0) ==
          doctest::Approx(100.0 * 2.0 / 9.0 - 20.0).epsilon(1e-12));
}

TEST_CASE("correlation boundary monte carlo hits the closed form") {
    const SeedSpec seed{20260801, "unit|corr-mc"};
    const MCEstimate est = corr_boundary_mc(4, 200000, seed);
    CHECK(est.se > 0.0);
    CHECK(std::abs(est.value - (-8.0 / 3.0)) < 4.0 * est.se);
}

TEST_CASE("oracle rejects oversized and inconsistent inputs") {
    const Eigen::MatrixXd big = Eigen::MatrixXd::Identity(9, 9);
    CHECK_THROWS_AS(quadform_cov_oracle(big, big, {9}, {0.5}, {1.0}),
                    std::invalid_argument);
    const Eigen::MatrixXd ok = Eigen::MatrixXd::Identity(4, 4);
    CHECK_THROWS_AS(quadform_cov_oracle(ok, ok, {2, 3}, {0.5, 0.5}, {1.0, 1.0}),
                    std::invalid_argument);
}
