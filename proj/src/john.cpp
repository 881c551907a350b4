#include "ghost_spectra/john.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ghost_spectra/kernels.hpp"
#include "ghost_spectra/stats.hpp"

namespace gs {

JohnStatistic john_statistic(double L1, double L2, int p, int n) {
    if (p < 1 || n < 1) throw std::invalid_argument("need positive dimensions");
    if (L1 == 0.0) throw std::invalid_argument("degenerate sample: tr S = 0");
    JohnStatistic s;
    s.U = p * L2 / (L1 * L1) - 1.0;
    s.Q = 0.5 * static_cast<double>(n) * p * s.U;
    return s;
}

double wy_nu4_estimator(const Eigen::MatrixXd& X) {
    const double np = static_cast<double>(X.rows()) * X.cols();
    if (np < 2) throw std::invalid_argument("need at least two entries");
    const double m2 = X.array().square().sum() / np;
    if (m2 == 0.0) throw std::invalid_argument("degenerate sample: all entries zero");
    const double m4 = X.array().square().square().sum() / np;
    return m4 / (m2 * m2) - 3.0;
}

JohnReport calibrate_all(const SpectralSample& sample, const Eigen::MatrixXd* X,
                         bool studentize_energies) {
    JohnReport r;
    r.p = sample.p;
    r.n = sample.n;

    const JohnStatistic stat = john_statistic(sample.L1, sample.L2, sample.p, sample.n);
    r.U = stat.U;
    r.Q = stat.Q;
    r.nU = sample.n * stat.U;
    r.gamma_hat = gamma_hat(sample.energies, sample.p, studentize_energies);

    const double centered = r.nU - sample.p - 1.0;
    r.z_gaussian = 0.5 * centered;
    r.z_corrected = 0.5 * (centered - r.gamma_hat / sample.p);
    if (X) {
        r.nu4_hat = wy_nu4_estimator(*X);
        r.z_wy = 0.5 * (centered - r.nu4_hat);
    } else {
        r.nu4_hat = std::numeric_limits<double>::quiet_NaN();
        r.z_wy = std::numeric_limits<double>::quiet_NaN();
    }

    r.p_gaussian = normal_upper(r.z_gaussian);
    r.p_wy = std::isnan(r.z_wy) ? std::numeric_limits<double>::quiet_NaN()
                                : normal_upper(r.z_wy);
    r.p_corrected = normal_upper(r.z_corrected);
    return r;
}

}  // namespace gs
