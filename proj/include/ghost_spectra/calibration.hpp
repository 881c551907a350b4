// Contour-integral calibration of linear spectral statistics: the leading
// mean and covariance functionals of the limiting Gaussian, their fourth
// order corrections driven by a structured kernel, and the closed-form
// residue reduction for polynomial test functions in the spherical case.
#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "ghost_spectra/kernels.hpp"
#include "ghost_spectra/mp.hpp"
#include "ghost_spectra/poly.hpp"

namespace gs {

// Rectangular integration contour around the support, symmetric about the
// real axis, crossing it at x_l and x_r with half height v0.  Quadrature
// uses Gauss-Legendre nodes per side, so no node ever touches the real axis.
struct ContourSpec {
    double x_l = 0.0;
    double x_r = 0.0;
    double v0 = 0.75;
    int nodes_per_side = 512;

    // Encloses the support of the limiting law at ratio c with the given
    // real-axis margin.
    static ContourSpec around(double c, const DiscreteLaw& H, double margin = 0.5,
                              double v0 = 0.75, int nodes_per_side = 512);

    // Throws unless the contour strictly encloses the support interval.
    void validate_encloses(double c, const DiscreteLaw& H) const;
};

// Strictly nested pair for double-contour integrals (inner first).
std::pair<ContourSpec, ContourSpec> nested_contours(double c, const DiscreteLaw& H,
                                                    int nodes_per_side = 512);

// Correction kernel evaluated on the u-plane.  mean_pair(u) is
// Gamma(H^{-1}, H^{-2}) at H(z) = u Sigma + I; cov_pair(u1, u2) the pair
// entering the covariance correction.
struct GammaEvaluator {
    std::function<std::complex<double>(std::complex<double>)> mean_pair;
    std::function<std::complex<double>(std::complex<double>, std::complex<double>)> cov_pair;
};

// Spherical population Sigma = sigma2 I with scalar correction gamma.
// The shipped covariance pair uses the squared resolvent on both slots,
// which is what exact finite sample moments require; classic_form keeps
// first-power resolvents in both slots instead.
GammaEvaluator spherical_gamma_eval(double gamma, double sigma2 = 1.0,
                                    bool classic_form = false);

// Blockwise kernel under a diagonal population Sigma with diagonal sigma_t
// (length p); sigma_t constant within each block enables a fast path.
GammaEvaluator block_gamma_eval(const GammaBlockParams& params,
                                const std::vector<double>& sigma_t,
                                bool classic_form = false);

struct MeanApprox {
    double m0 = 0.0;  // Gaussian-design mean term
    double m1 = 0.0;  // fourth order correction
};

// Mean functionals by quadrature over the upper half of the contour (the
// lower half follows from conjugate symmetry).
MeanApprox mean_approximant(const Poly& f, double c, const DiscreteLaw& H,
                            const GammaEvaluator& eval, int n,
                            const ContourSpec& contour);

struct CovApprox {
    double v0 = 0.0;
    double v1 = 0.0;
};

// Covariance functionals by a double contour integral with z1 on the outer
// and z2 on the inner contour; the contours must be strictly nested so the
// 1/(z1-z2)^2 term stays regular.
CovApprox cov_approximant(const Poly& f, const Poly& g, double c,
                          const DiscreteLaw& H, const GammaEvaluator& eval, int n,
                          const ContourSpec& inner, const ContourSpec& outer);

// Residue at u = 0 of f(z(u)) u / (1 + u)^3 for the null spherical model:
// the closed form multiplier of gamma/n in the mean correction, computed by
// Laurent series arithmetic.  f = x gives 0 and f = x^2 gives 1.  With
// classic_form the sign for a positively oriented u-circle is kept; the
// default sign matches direct quadrature and exact finite sample moments
// (the companion transform winds the contour image clockwise around u = 0,
// which flips the residue sign relative to a positively oriented circle).
double residue_m1_spherical(const Poly& f, double c, bool classic_form = false);

// Asymptotic moments of John's test statistics under the null with scalar
// correction gamma: nU is asymptotically normal with mean p + 1 + gamma/p
// and variance 4; Q = (np/2) U has mean (p^2 + p + gamma)/2 and variance p^2.
struct JohnMoments {
    double mean_nU = 0.0;
    double var_nU = 0.0;
    double mean_Q = 0.0;
    double var_Q = 0.0;
};
JohnMoments john_asymptotics(int p, int n, double gamma);

// Gauss-Legendre nodes and weights on [-1, 1]; cached per order.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int order);

}  // namespace gs
