// Marchenko-Pastur layer: population spectral laws, the companion Stieltjes
// transform and its inverse map, plus limiting spectral moments.
#pragma once

#include <complex>
#include <utility>
#include <vector>

namespace gs {

using cplx = std::complex<double>;

// Discrete population spectral distribution: atoms t_a >= 0 with weights
// summing to one.  The null case is a single atom at sigma^2.
struct DiscreteLaw {
    std::vector<double> atoms;
    std::vector<double> weights;

    static DiscreteLaw point(double t = 1.0) { return DiscreteLaw{{t}, {1.0}}; }

    // Throws std::invalid_argument unless atoms >= 0, weights > 0, sum == 1.
    void validate() const;

    double moment(int k) const;  // integral of t^k dH
};

// Value of the companion transform u(z) together with d/dz u and the
// dimension-side transform m(z).
struct StieltjesValue {
    cplx u;       // companion Stieltjes transform
    cplx uprime;  // derivative with respect to z
    cplx m;       // Stieltjes transform of the sample spectral law
};

// z(u) and z'(u) of the inverse spectral map
//   z(u) = -1/u + c * integral t / (1 + t u) dH(t).
std::pair<cplx, cplx> inverse_map(cplx u, double c, const DiscreteLaw& H);

// Solves the self-consistent equation for the companion transform at z off
// the real axis or outside the support.  Damped fixed point iteration seeded
// at -1/z, polished by Newton on z(u) - z.  Enforces the half-plane
// (Herglotz) property Im u * Im z > 0 whenever Im z is meaningfully nonzero.
StieltjesValue solve_companion(cplx z, double c, const DiscreteLaw& H,
                               double tol = 1e-13, int max_iter = 500);

// Closed form for H = point(sigma2): the companion transform solves
//   sigma2 z u^2 + (z + sigma2 (1 - c)) u + 1 = 0.
StieltjesValue companion_closed_form_null(cplx z, double c, double sigma2 = 1.0);

// Interval certain to contain the support of the limiting sample law:
//   [ min_atom (1-sqrt(c))^2 * 1{c<1},  max_atom (1+sqrt(c))^2 ].
std::pair<double, double> support_interval(double c, const DiscreteLaw& H);

// k-th moment (k <= 4) of the limiting sample spectral law at ratio c.
double mp_moment(int k, double c, const DiscreteLaw& H);

}  // namespace gs
