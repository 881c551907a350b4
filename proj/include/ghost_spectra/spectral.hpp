// Sample covariance spectral statistics: trace powers, per-observation
// energies, eigenvalues and centered linear spectral statistics.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "ghost_spectra/mp.hpp"
#include "ghost_spectra/poly.hpp"

namespace gs {

// Statistics of S = (1/n) X X^T for an observation-per-column matrix X.
struct SpectralSample {
    int p = 0;
    int n = 0;
    double L1 = 0.0;  // tr S
    double L2 = 0.0;  // tr S^2
    Eigen::VectorXd energies;         // T_i = |column i|^2
    std::vector<double> eigenvalues;  // ascending, all p of them; may be empty
};

// Computes L1, L2 and energies via the Gram matrix on the smaller side,
// so S itself is never formed when p > n.  Eigenvalues (padded with the
// p - n structural zeros when p > n) only when requested.
SpectralSample covariance_stats(const Eigen::MatrixXd& X, bool want_eigenvalues = false);

// (1/p) sum 1/(lambda_j - z) over the stored eigenvalues.
std::complex<double> empirical_stieltjes(const std::vector<double>& eigenvalues,
                                         std::complex<double> z);

// Centered linear spectral statistic sum_j f(lambda_j) - p * integral f d(MP),
// where the centering uses the limiting law at the exact ratio c_n = p/n.
// Degrees one and two come straight from L1, L2; higher degrees need the
// eigenvalues to be present.
double lss_centered(const SpectralSample& sample, const Poly& f, double c_n,
                    const DiscreteLaw& H);

}  // namespace gs
