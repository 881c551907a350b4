#include "ghost_spectra/mp.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace gs {

namespace {

// integral t / (1 + t u) dH
cplx int_t_over(const DiscreteLaw& H, cplx u) {
    cplx s = 0.0;
    for (std::size_t a = 0; a < H.atoms.size(); ++a)
        s += H.weights[a] * H.atoms[a] / (1.0 + H.atoms[a] * u);
    return s;
}

// integral t^2 / (1 + t u)^2 dH
cplx int_t2_over2(const DiscreteLaw& H, cplx u) {
    cplx s = 0.0;
    for (std::size_t a = 0; a < H.atoms.size(); ++a) {
        const cplx d = 1.0 + H.atoms[a] * u;
        s += H.weights[a] * H.atoms[a] * H.atoms[a] / (d * d);
    }
    return s;
}

bool herglotz_ok(cplx z, cplx u) {
    // Only meaningful off the real axis; near it the sign of Im u can be
    // rounding noise, so apply a scale-aware tolerance.
    const double imz = z.imag();
    if (std::abs(imz) <= 1e-12 * std::max(1.0, std::abs(z))) return true;
    return u.imag() * imz > -1e-14 * std::abs(u) * std::abs(imz);
}

StieltjesValue finish(cplx z, cplx u, double c, const DiscreteLaw& H) {
    const auto [zz, zp] = inverse_map(u, c, H);
    (void)zz;
    StieltjesValue v;
    v.u = u;
    v.uprime = 1.0 / zp;
    v.m = (u + (1.0 - c) / z) / c;
    return v;
}

}  // namespace

void DiscreteLaw::validate() const {
    if (atoms.empty() || atoms.size() != weights.size())
        throw std::invalid_argument("spectral law needs matching atoms and weights");
    double sum = 0.0;
    for (std::size_t a = 0; a < atoms.size(); ++a) {
        if (!(atoms[a] >= 0.0))
            throw std::invalid_argument("spectral law atoms must be nonnegative");
        if (!(weights[a] > 0.0))
            throw std::invalid_argument("spectral law weights must be positive");
        sum += weights[a];
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("spectral law weights must sum to one");
}

double DiscreteLaw::moment(int k) const {
    double s = 0.0;
    for (std::size_t a = 0; a < atoms.size(); ++a)
        s += weights[a] * std::pow(atoms[a], k);
    return s;
}

std::pair<cplx, cplx> inverse_map(cplx u, double c, const DiscreteLaw& H) {
    const cplx z = -1.0 / u + c * int_t_over(H, u);
    const cplx zp = 1.0 / (u * u) - c * int_t2_over2(H, u);
    return {z, zp};
}

StieltjesValue solve_companion(cplx z, double c, const DiscreteLaw& H,
                               double tol, int max_iter) {
    H.validate();
    if (z == 0.0) throw std::invalid_argument("companion transform undefined at z = 0");
    const double scale = std::max(1.0, std::abs(z));

    cplx u = -1.0 / z;
    int iter = 0;

    // Damped fixed point u <- u + damp * (g(u) - u) with
    // g(u) = -1 / (z - c * integral t/(1+tu) dH), run until the map residual
    // is small enough for Newton to take over.
    double damp = 0.5;
    for (; iter < max_iter; ++iter) {
        const cplx g = -1.0 / (z - c * int_t_over(H, u));
        u += damp * (g - u);
        const cplx res = inverse_map(u, c, H).first - z;
        if (std::abs(res) < 1e-3 * scale) break;
    }

    // Newton on z(u) - z.
    for (; iter < max_iter; ++iter) {
        const auto [zu, zp] = inverse_map(u, c, H);
        const cplx res = zu - z;
        if (std::abs(res) <= tol * scale) {
            if (!herglotz_ok(z, u))
                throw std::runtime_error("companion solve left the Herglotz half plane");
            return finish(z, u, c, H);
        }
        if (zp == 0.0) break;
        u -= res / zp;
    }
    throw std::runtime_error("companion transform iteration did not converge");
}

StieltjesValue companion_closed_form_null(cplx z, double c, double sigma2) {
    if (z == 0.0) throw std::invalid_argument("companion transform undefined at z = 0");
    // sigma2 z u^2 + (z + sigma2 (1 - c)) u + 1 = 0
    const cplx a = sigma2 * z;
    const cplx b = z + sigma2 * (1.0 - c);
    const cplx disc = std::sqrt(b * b - 4.0 * a);
    // Numerically stable splitting: q carries the large root of the pair.
    const cplx q = (std::real(std::conj(b) * disc) >= 0.0) ? -0.5 * (b + disc)
                                                           : -0.5 * (b - disc);
    const cplx u1 = q / a;
    const cplx u2 = 1.0 / q;

    const DiscreteLaw H = DiscreteLaw::point(sigma2);
    auto pick = [&](cplx ua, cplx ub) {
        if (std::abs(z.imag()) > 1e-10 * std::max(1.0, std::abs(z))) {
            return (ua.imag() * z.imag() > 0.0) ? ua : ub;
        }
        // On (or next to) the real axis outside the support the physical
        // branch is the one where the inverse map is increasing.
        const cplx zpa = inverse_map(ua, c, H).second;
        return (zpa.real() > 0.0) ? ua : ub;
    };
    const cplx u = pick(u1, u2);
    return finish(z, u, c, H);
}

std::pair<double, double> support_interval(double c, const DiscreteLaw& H) {
    H.validate();
    if (!(c > 0.0)) throw std::invalid_argument("dimension ratio must be positive");
    double tmin = H.atoms.front(), tmax = H.atoms.front();
    for (double t : H.atoms) {
        tmin = std::min(tmin, t);
        tmax = std::max(tmax, t);
    }
    const double rc = std::sqrt(c);
    const double lo = (c < 1.0) ? tmin * (1.0 - rc) * (1.0 - rc) : 0.0;
    const double hi = tmax * (1.0 + rc) * (1.0 + rc);
    return {lo, hi};
}

double mp_moment(int k, double c, const DiscreteLaw& H) {
    H.validate();
    const double h1 = H.moment(1), h2 = H.moment(2);
    switch (k) {
        case 0:
            return 1.0;
        case 1:
            return h1;
        case 2:
            return h2 + c * h1 * h1;
        case 3:
            return H.moment(3) + 3.0 * c * h1 * h2 + c * c * h1 * h1 * h1;
        case 4:
            return H.moment(4) + c * (4.0 * h1 * H.moment(3) + 2.0 * h2 * h2) +
                   6.0 * c * c * h1 * h1 * h2 + c * c * c * h1 * h1 * h1 * h1;
        default:
            throw std::invalid_argument("limiting moments implemented for k <= 4");
    }
}

}  // namespace gs
