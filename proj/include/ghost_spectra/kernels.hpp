// Fourth order correction kernels for quadratic forms in blockwise mixed
// radial observations, their scalar reductions and estimators, plus the
// exact small-dimension oracles used to pin them down.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

#include "ghost_spectra/models.hpp"
#include "ghost_spectra/rng.hpp"

namespace gs {

// Parameters of the correction kernel for a blockwise mixed radial vector:
//   Gamma(A, B) = sum_j nu4_j * tr_j(diag A . diag B)
//               + sum_j tau_j p^{-delta_j} * tr_j(A) tr_j(B),
// where tr_j restricts to the coordinates of block j.  Only the diagonals
// of A and B ever enter.
struct GammaBlockParams {
    std::vector<int> sizes;
    std::vector<double> nu4;
    std::vector<double> tau;
    std::vector<double> delta;

    int p() const;
    void validate() const;
};

// Kernel parameters implied by a model configuration at dimension p.
GammaBlockParams gamma_params_for(const BlockModelConfig& cfg, int p);

// Kernel value for diagonal arguments given as complex vectors (the contour
// integrands evaluate resolvent diagonals at complex points).
std::complex<double> gamma_block(const std::vector<std::complex<double>>& diag_a,
                                 const std::vector<std::complex<double>>& diag_b,
                                 const GammaBlockParams& params);

// Dense convenience wrapper; only the diagonals of A and B are read.
double gamma_block(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                   const GammaBlockParams& params);

// Scalar correction gamma = Gamma(I, I) = sum_j nu4_j p_j + tau_j p_j^2 p^{-delta_j}.
double gamma_scalar_closed_form(const GammaBlockParams& params);

// Estimator of the scalar correction from per-observation energies:
//   gamma_hat = (1/n) sum (T_i - p)^2 - 2p,
// with the energies first studentized to T~_i = p T_i / mean(T) by default,
// which makes the estimator exactly scale invariant.
double gamma_hat(const Eigen::VectorXd& energies, int p, bool studentize = true);

// Phase indices of the radial blocks: phi_j = 2 alpha_j - delta_j,
// kappa = max phi / 2, and the fluctuation rescaling r_p = min(1, p^{(1-max phi)/2}).
struct PhaseIndices {
    std::vector<double> phi;
    double kappa = 0.0;
    double r_p = 1.0;
};
PhaseIndices phase_indices(const std::vector<std::pair<double, double>>& alpha_delta,
                           int p);

// Exact enumeration oracle for the covariance of centered quadratic forms
// Q(A) = w^T A w - tr A under a small blockwise model with rademacher
// directions and two-point radial laws rho^2 = 1 +- s_j, s_j = sqrt(tau_j) p^{-delta_j/2}.
// Returns the enumerated covariance and the claimed decomposition
//   tr(AB) + tr(A B^T) + Gamma(A, B).
struct OraclePair {
    double lhs = 0.0;
    double rhs = 0.0;
};
OraclePair quadform_cov_oracle(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                               const std::vector<int>& sizes,
                               const std::vector<double>& tau,
                               const std::vector<double>& delta);

// Correction kernel of self-normalized rows at the correlation boundary:
// for a trace-zero +-1 diagonal A_n and rows sqrt(n) x / |x|,
//   Gamma(A_n, A_n) = n^2 (n^2 beta4 - 1) / (n - 1) - 2n,
// where beta4 = E Y_1^4 for the normalized coordinates.
double corr_boundary_gamma(int n, double beta4);

// beta4 of Gaussian rows: 3 / (n (n + 2)); then the kernel value above
// simplifies to -4n / (n + 2).
double beta4_gaussian(int n);

// Monte Carlo estimate of Gamma(A_n, A_n) from `rows` sphere rows, with the
// alternating-sign diagonal; returns the estimate and its standard error.
struct MCEstimate {
    double value = 0.0;
    double se = 0.0;
};
MCEstimate corr_boundary_mc(int n, std::int64_t rows, const SeedSpec& seed);

}  // namespace gs
