#include "ghost_spectra/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gs {

SpectralSample covariance_stats(const Eigen::MatrixXd& X, bool want_eigenvalues) {
    const int p = static_cast<int>(X.rows());
    const int n = static_cast<int>(X.cols());
    if (p < 1 || n < 1) throw std::invalid_argument("empty data matrix");

    SpectralSample s;
    s.p = p;
    s.n = n;
    s.energies = X.colwise().squaredNorm().transpose();
    s.L1 = s.energies.sum() / n;

    // Gram matrix on the smaller side: X X^T and X^T X share nonzero
    // spectrum, and tr S^2 = |Gram|_F^2 / n^2 either way.
    const int m = std::min(p, n);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(m, m);
    if (p <= n)
        G.selfadjointView<Eigen::Lower>().rankUpdate(X);
    else
        G.selfadjointView<Eigen::Lower>().rankUpdate(X.transpose());

    double frob2 = 0.0;
    for (int j = 0; j < m; ++j) {
        frob2 += G(j, j) * G(j, j);
        for (int i = j + 1; i < m; ++i) frob2 += 2.0 * G(i, j) * G(i, j);
    }
    s.L2 = frob2 / (static_cast<double>(n) * n);

    if (want_eigenvalues) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
            G, Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success)
            throw std::runtime_error("eigenvalue computation failed");
        s.eigenvalues.assign(static_cast<std::size_t>(p), 0.0);
        // G holds n * S (or its n-side twin); rescale and pad the p - n
        // structural zeros when p > n.
        const int pad = p - m;
        for (int j = 0; j < m; ++j)
            s.eigenvalues[static_cast<std::size_t>(pad + j)] =
                solver.eigenvalues()[j] / n;
        std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
    }
    return s;
}

std::complex<double> empirical_stieltjes(const std::vector<double>& eigenvalues,
                                         std::complex<double> z) {
    if (eigenvalues.empty()) throw std::invalid_argument("no eigenvalues");
    std::complex<double> s = 0.0;
    for (double lam : eigenvalues) s += 1.0 / (lam - z);
    return s / static_cast<double>(eigenvalues.size());
}

double lss_centered(const SpectralSample& sample, const Poly& f, double c_n,
                    const DiscreteLaw& H) {
    if (!(c_n > 0.0)) throw std::invalid_argument("dimension ratio must be positive");
    const int deg = f.degree();
    if (deg < 1) throw std::invalid_argument("test function must have degree >= 1");

    // Raw moments sum_j lambda_j^k of the sample spectrum.
    std::vector<double> raw(static_cast<std::size_t>(deg) + 1, 0.0);
    raw[0] = sample.p;
    if (deg >= 3 || !sample.eigenvalues.empty()) {
        if (sample.eigenvalues.empty())
            throw std::invalid_argument(
                "degree >= 3 linear statistics need the eigenvalues");
        for (double lam : sample.eigenvalues) {
            double pw = lam;
            for (int k = 1; k <= deg; ++k, pw *= lam) raw[static_cast<std::size_t>(k)] += pw;
        }
    } else {
        raw[1] = sample.L1;
        if (deg >= 2) raw[2] = sample.L2;
    }

    double value = 0.0;
    for (int k = 1; k <= deg; ++k) {
        const double ck = f.coeff[static_cast<std::size_t>(k)];
        if (ck == 0.0) continue;
        value += ck * (raw[static_cast<std::size_t>(k)] - sample.p * mp_moment(k, c_n, H));
    }
    return value;
}

}  // namespace gs
