#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

#include "ghost_spectra/john.hpp"
#include "ghost_spectra/models.hpp"
#include "ghost_spectra/stats.hpp"

using namespace gs;

TEST_CASE("statistic from trace powers") {
    // p = 4, L1 = 4, L2 = 5: U = p L2 / L1^2 - 1 = 0.25, Q = (n p / 2) U.
    const JohnStatistic s = john_statistic(4.0, 5.0, 4, 10);
    CHECK(s.U == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(s.Q == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("entry kurtosis estimator") {
    const SeedSpec seed{17, "unit|john"};
    const Eigen::MatrixXd R = sample_block_dataset(preset_model("M2"), 30, 40, seed, 0);
    CHECK(wy_nu4_estimator(R) == doctest::Approx(-2.0).epsilon(1e-14));

    const Eigen::MatrixXd G = sample_block_dataset(preset_model("M1"), 60, 4000, seed, 1);
    CHECK(std::abs(wy_nu4_estimator(G)) < 0.05);
}

TEST_CASE("report wires the three calibrations together") {
    const SeedSpec seed{23, "unit|john-report"};
    const Eigen::MatrixXd X = sample_block_dataset(preset_model("M4"), 50, 100, seed, 0);
    const SpectralSample s = covariance_stats(X);
    const JohnReport r = calibrate_all(s, &X);

    CHECK(r.p == 50);
    CHECK(r.n == 100);
    CHECK(r.nU == doctest::Approx(100.0 * r.U).epsilon(1e-14));
    CHECK(r.z_gaussian == doctest::Approx((r.nU - 51.0) / 2.0).epsilon(1e-13));
    CHECK(r.z_wy == doctest::Approx((r.nU - 51.0 - r.nu4_hat) / 2.0).epsilon(1e-13));
    CHECK(r.z_corrected ==
          doctest::Approx((r.nU - 51.0 - r.gamma_hat / 50.0) / 2.0).epsilon(1e-13));

    // equivalent Q-form of the corrected score
    const double via_Q = (r.Q - 0.5 * (50.0 * 50.0 + 50.0 + r.gamma_hat)) / 50.0;
    CHECK(via_Q == doctest::Approx(r.z_corrected).epsilon(1e-12));

    CHECK(r.p_gaussian == doctest::Approx(normal_upper(r.z_gaussian)).epsilon(1e-14));
    CHECK(r.p_wy == doctest::Approx(normal_upper(r.z_wy)).epsilon(1e-14));
    CHECK(r.p_corrected == doctest::Approx(normal_upper(r.z_corrected)).epsilon(1e-14));
}

TEST_CASE("without the data matrix the entry calibration is marked missing") {
    const SeedSpec seed{29, "unit|john-nox"};
    const Eigen::MatrixXd X = sample_block_dataset(preset_model("M1"), 40, 80, seed, 0);
    const SpectralSample s = covariance_stats(X);
    const JohnReport r = calibrate_all(s);
    CHECK(std::isnan(r.nu4_hat));
    CHECK(std::isnan(r.z_wy));
    CHECK(std::isfinite(r.z_gaussian));
    CHECK(std::isfinite(r.z_corrected));
}

TEST_CASE("rademacher data: energy and entry corrections coincide exactly") {
    // T_i = p exactly, so gamma_hat = -2p and nu4_hat = -2; the two corrected
    // scores collapse onto each other.
    const SeedSpec seed{31, "unit|john-rad"};
    const Eigen::MatrixXd X = sample_block_dataset(preset_model("M2"), 64, 128, seed, 0);
    const SpectralSample s = covariance_stats(X);
    const JohnReport r = calibrate_all(s, &X);
    CHECK(r.gamma_hat == doctest::Approx(-128.0).epsilon(1e-13));
    CHECK(r.nu4_hat == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(r.z_wy == doctest::Approx(r.z_corrected).epsilon(1e-13));
}

TEST_CASE("the corrected score is scale invariant") {
    const SeedSpec seed{37, "unit|john-scale"};
    const Eigen::MatrixXd X = sample_block_dataset(preset_model("M4"), 50, 100, seed, 0);
    const Eigen::MatrixXd Y = 7.3 * X;
    const JohnReport rx = calibrate_all(covariance_stats(X), &X);
    const JohnReport ry = calibrate_all(covariance_stats(Y), &Y);
    CHECK(std::abs(rx.z_corrected - ry.z_corrected) <= 1e-12 * std::abs(rx.z_corrected) + 1e-12);
    CHECK(std::abs(rx.z_gaussian - ry.z_gaussian) <= 1e-10);  // U itself is scale free
    CHECK(std::abs(rx.z_wy - ry.z_wy) <= 1e-10);
}
