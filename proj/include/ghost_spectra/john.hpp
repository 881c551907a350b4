// John's sphericity test with three calibrations of the reference normal:
// the classical Gaussian-design one, the entry-kurtosis correction, and
// the energy-based correction that absorbs radial mixing.
#pragma once

#include <Eigen/Dense>

#include "ghost_spectra/spectral.hpp"

namespace gs {

struct JohnStatistic {
    double U = 0.0;  // p L2 / L1^2 - 1
    double Q = 0.0;  // (n p / 2) U
};

JohnStatistic john_statistic(double L1, double L2, int p, int n);

// Entry-kurtosis estimator: mean fourth power over (mean square)^2 minus 3.
double wy_nu4_estimator(const Eigen::MatrixXd& X);

// Full report: statistic, corrections, z-scores and upper-tail p-values.
// z_gaussian  = (nU - p - 1) / 2
// z_wy        = (nU - p - 1 - nu4_hat) / 2
// z_corrected = (nU - p - 1 - gamma_hat / p) / 2
struct JohnReport {
    int p = 0;
    int n = 0;
    double U = 0.0;
    double Q = 0.0;
    double nU = 0.0;
    double gamma_hat = 0.0;
    double nu4_hat = 0.0;
    double z_gaussian = 0.0;
    double z_wy = 0.0;
    double z_corrected = 0.0;
    double p_gaussian = 1.0;
    double p_wy = 1.0;
    double p_corrected = 1.0;
};

// Builds the report from spectral statistics; the raw data matrix is only
// needed for the entry-kurtosis estimator and may be omitted (nu4_hat and
// z_wy are then reported as NaN).
JohnReport calibrate_all(const SpectralSample& sample,
                         const Eigen::MatrixXd* X = nullptr,
                         bool studentize_energies = true);

}  // namespace gs
