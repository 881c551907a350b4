#include <doctest.h>

#include <cmath>
#include <complex>

#include "ghost_spectra/mp.hpp"

using namespace gs;
using namespace std::complex_literals;

namespace {
const DiscreteLaw kTwoAtom{{2.0, 1.0}, {0.2, 0.8}};
}

TEST_CASE("discrete law validation") {
    CHECK_NOTHROW(DiscreteLaw::point(1.0).validate());
    CHECK_NOTHROW(kTwoAtom.validate());
    CHECK_THROWS_AS(DiscreteLaw({{1.0}, {0.5}}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(DiscreteLaw({{-1.0}, {1.0}}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(DiscreteLaw({{1.0, 2.0}, {1.0}}).validate(), std::invalid_argument);
    CHECK(kTwoAtom.moment(1) == doctest::Approx(1.2).epsilon(1e-15));
    CHECK(kTwoAtom.moment(2) == doctest::Approx(1.6).epsilon(1e-15));
}

TEST_CASE("closed form solves its quadratic and is Herglotz") {
    for (double c : {0.3, 0.5, 0.9, 1.5}) {
        for (cplx z : {0.7 + 0.9i, -0.4 + 0.2i, 3.2 + 0.05i, 1.0 - 0.6i}) {
            const StieltjesValue v = companion_closed_form_null(z, c, 1.0);
            const cplx resid = z * v.u * v.u + (z + (1.0 - c)) * v.u + 1.0;
            CHECK(std::abs(resid) < 1e-12);
            CHECK(v.u.imag() * z.imag() > 0.0);
        }
    }
}

TEST_CASE("solver agrees with the closed form off the real axis") {
    for (double c : {0.3, 0.5, 1.2}) {
        const DiscreteLaw H = DiscreteLaw::point(1.0);
        for (cplx z : {0.5 + 0.8i, 2.0 + 0.3i, -1.0 + 1.0i, 4.0 + 0.02i}) {
            const StieltjesValue a = solve_companion(z, c, H);
            const StieltjesValue b = companion_closed_form_null(z, c, 1.0);
            CHECK(std::abs(a.u - b.u) < 1e-11);
            CHECK(std::abs(a.uprime - b.uprime) < 1e-9);
            CHECK(std::abs(a.m - b.m) < 1e-10);
        }
    }
}

TEST_CASE("inverse map roundtrip") {
    const double c = 0.5;
    for (const DiscreteLaw& H : {DiscreteLaw::point(1.0), kTwoAtom}) {
        for (cplx z : {1.0 + 0.7i, 2.5 + 0.2i, -0.8 + 0.5i}) {
            const StieltjesValue v = solve_companion(z, c, H);
            const auto [z_back, zprime] = inverse_map(v.u, c, H);
            CHECK(std::abs(z_back - z) / std::abs(z) < 1e-11);
            // u'(z) is the reciprocal of z'(u) along the solution branch.
            CHECK(std::abs(v.uprime * zprime - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("support interval brackets the eigenvalue bulk") {
    const auto [lo, hi] = support_interval(0.5, DiscreteLaw::point(1.0));
    const double r = std::sqrt(0.5);
    CHECK(lo == doctest::Approx((1 - r) * (1 - r)).epsilon(1e-12));
    CHECK(hi == doctest::Approx((1 + r) * (1 + r)).epsilon(1e-12));
    const auto [lo2, hi2] = support_interval(1.5, kTwoAtom);
    CHECK(lo2 == 0.0);  // c > 1 puts mass at zero
    const double r2 = std::sqrt(1.5);
    CHECK(hi2 == doctest::Approx(2.0 * (1 + r2) * (1 + r2)).epsilon(1e-12));
}

TEST_CASE("limiting moments: null closed forms") {
    const DiscreteLaw H = DiscreteLaw::point(1.0);
    for (double c : {0.3, 0.5, 0.9}) {
        CHECK(mp_moment(1, c, H) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(mp_moment(2, c, H) == doctest::Approx(1.0 + c).epsilon(1e-14));
        CHECK(mp_moment(3, c, H) ==
              doctest::Approx(1.0 + 3.0 * c + c * c).epsilon(1e-14));
        CHECK(mp_moment(4, c, H) ==
              doctest::Approx(1.0 + 6.0 * c + 6.0 * c * c + c * c * c).epsilon(1e-14));
    }
    CHECK_THROWS_AS(mp_moment(5, 0.5, H), std::invalid_argument);
}

TEST_CASE("limiting moments: two-atom law by free cumulant expansion") {
    // h1 = 1.2, h2 = 1.6, h3 = 2.4, h4 = 4.0 at c = 0.5.
    const double c = 0.5;
    CHECK(mp_moment(1, c, kTwoAtom) == doctest::Approx(1.2).epsilon(1e-14));
    CHECK(mp_moment(2, c, kTwoAtom) == doctest::Approx(2.32).epsilon(1e-14));
    CHECK(mp_moment(3, c, kTwoAtom) == doctest::Approx(5.712).epsilon(1e-14));
    CHECK(mp_moment(4, c, kTwoAtom) == doctest::Approx(16.0352).epsilon(1e-14));
}

TEST_CASE("solver rejects an invalid population law") {
    CHECK_THROWS_AS(solve_companion(1.0 + 1.0i, 0.5, DiscreteLaw{{1.0}, {0.7}}),
                    std::invalid_argument);
}
