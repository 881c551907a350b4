#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <vector>

#include "ghost_spectra/calibration.hpp"
#include "ghost_spectra/harness.hpp"
#include "ghost_spectra/parallel.hpp"

namespace gs {

namespace {

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

}  // namespace

CheckResult check_mp_closed_form() {
    CheckResult out;
    out.id = "mp-closed-form";

    const double c = 0.5;
    const DiscreteLaw H1 = DiscreteLaw::point(1.0);
    const DiscreteLaw H2{{2.0, 1.0}, {0.2, 0.8}};

    // Spot check: the closed form satisfies its own quadratic at z = i.
    {
        const cplx z(0.0, 1.0);
        const StieltjesValue v = companion_closed_form_null(z, c);
        const cplx res = z * v.u * v.u + (z + (1.0 - c)) * v.u + 1.0;
        if (std::abs(res) > 1e-14) {
            out.detail = fmt("closed-form quadratic residual %.3g at z=i", std::abs(res));
            return out;
        }
    }

    // 100 points on an ellipse around the support, both laws.
    double max_solver_err = 0.0, max_roundtrip = 0.0;
    bool herglotz = true;
    for (const DiscreteLaw* H : {&H1, &H2}) {
        const auto [lo, hi] = support_interval(c, *H);
        const double cx = 0.5 * (lo + hi), ax = 0.5 * (hi - lo) + 0.5, bx = 0.75;
        for (int k = 0; k < 100; ++k) {
            const double th = 2.0 * std::numbers::pi * (k + 0.5) / 100.0;
            const cplx z(cx + ax * std::cos(th), bx * std::sin(th));
            const StieltjesValue v = solve_companion(z, c, *H);
            if (v.u.imag() * z.imag() <= 0.0) herglotz = false;
            const cplx zback = inverse_map(v.u, c, *H).first;
            max_roundtrip = std::max(max_roundtrip,
                                     std::abs(zback - z) / std::max(1.0, std::abs(z)));
            if (H == &H1) {
                const StieltjesValue w = companion_closed_form_null(z, c);
                max_solver_err = std::max(max_solver_err, std::abs(v.u - w.u));
            }
        }
    }

    out.pass = (max_solver_err < 1e-10) && (max_roundtrip < 1e-9) && herglotz;
    out.detail = fmt("solver vs closed form %.3g (tol 1e-10), roundtrip %.3g (tol 1e-9), "
                     "herglotz %s",
                     max_solver_err, max_roundtrip, herglotz ? "ok" : "VIOLATED");
    return out;
}

CheckResult check_residue_reduction() {
    CheckResult out;
    out.id = "residue-reduction";

    const double r1 = residue_m1_spherical(Poly::x(), 0.5);
    double max_r2_err = 0.0;
    for (double c : {0.3, 0.5, 0.9})
        max_r2_err = std::max(max_r2_err, std::abs(residue_m1_spherical(Poly::x2(), c) - 1.0));
    const double lit = residue_m1_spherical(Poly::x2(), 0.5, true);

    // Quadrature cross-check of the sign convention: the correction the
    // contour integral produces equals residue * gamma / n.
    const double c = 0.5, gamma = -400.0;
    const int n = 400;
    const DiscreteLaw H = DiscreteLaw::point(1.0);
    const ContourSpec contour = ContourSpec::around(c, H);
    const GammaEvaluator eval = spherical_gamma_eval(gamma);
    double max_quad_err = 0.0;
    for (int deg = 1; deg <= 3; ++deg) {
        std::vector<double> coeff(static_cast<std::size_t>(deg) + 1, 0.0);
        coeff.back() = 1.0;
        const Poly f{std::vector<double>(coeff)};
        const double m1 = mean_approximant(f, c, H, eval, n, contour).m1;
        const double closed = residue_m1_spherical(f, c) * gamma / n;
        max_quad_err = std::max(max_quad_err, std::abs(m1 - closed));
    }

    out.pass = (std::abs(r1) < 1e-14) && (max_r2_err < 1e-12) &&
               (std::abs(lit + 1.0) < 1e-12) && (max_quad_err < 1e-6);
    out.detail = fmt("residue(x)=%.3g, residue(x^2) err %.3g, classic form %.3g, "
                     "quadrature match %.3g (tol 1e-6)",
                     r1, max_r2_err, lit, max_quad_err);
    return out;
}

CheckResult check_moment_identities() {
    CheckResult out;
    out.id = "moment-identities";

    const double c = 0.5;
    const int n = 400, p = 200;
    const DiscreteLaw H = DiscreteLaw::point(1.0);
    const ContourSpec contour = ContourSpec::around(c, H);
    const auto [inner, outer] = nested_contours(c, H, 384);
    const Poly f1 = Poly::x(), f2 = Poly::x2();

    const double gamma_m4 =
        gamma_scalar_closed_form(gamma_params_for(preset_model("M4"), p));

    const double m0_f1 =
        mean_approximant(f1, c, H, spherical_gamma_eval(0.0), n, contour).m0;
    const double m0_f2 =
        mean_approximant(f2, c, H, spherical_gamma_eval(0.0), n, contour).m0;

    double max_mean_err = 0.0, max_cov_err = 0.0;
    for (double gamma : {-2.0 * p, 0.0, gamma_m4}) {
        const GammaEvaluator eval = spherical_gamma_eval(gamma);
        const MeanApprox mean = mean_approximant(f2, c, H, eval, n, contour);
        max_mean_err = std::max(max_mean_err,
                                std::abs(mean.m0 + mean.m1 - (c + gamma / n)));
        const CovApprox cov = cov_approximant(f1, f1, c, H, eval, n, inner, outer);
        max_cov_err = std::max(max_cov_err,
                               std::abs(cov.v0 + cov.v1 - (2.0 * c + gamma / n)));
    }

    out.pass = (std::abs(m0_f1) < 1e-8) && (std::abs(m0_f2 - c) < 1e-6) &&
               (max_mean_err < 1e-5) && (max_cov_err < 1e-4);
    out.detail = fmt("M0(x)=%.3g (tol 1e-8), M0(x^2)-c=%.3g (tol 1e-6), "
                     "mean identity err %.3g (tol 1e-5), cov identity err %.3g (tol 1e-4)",
                     m0_f1, m0_f2 - c, max_mean_err, max_cov_err);
    return out;
}

CheckResult check_quadform_enumeration(std::uint64_t seed) {
    CheckResult out;
    out.id = "quadform-oracle";

    struct Model {
        std::vector<int> sizes;
        std::vector<double> tau;
        std::vector<double> delta;
    };
    const std::vector<Model> models = {
        {{2, 2}, {0.5, 1.0}, {1.0, 0.6}},
        {{3, 3}, {0.8, 1.2}, {1.0, 0.8}},
    };

    const SeedSpec spec{seed, "validate|quadform"};
    double max_err = 0.0;
    std::uint64_t rep = 0;
    for (const Model& m : models) {
        int p = 0;
        for (int s : m.sizes) p += s;
        // Random diagonal pairs: only diagonals enter the kernel, and for
        // these the decomposition is exact at finite p.
        for (int trial = 0; trial < 10; ++trial) {
            Stream rng = spec.stream(rep++);
            Eigen::MatrixXd A = Eigen::MatrixXd::Zero(p, p), B = Eigen::MatrixXd::Zero(p, p);
            for (int i = 0; i < p; ++i) {
                A(i, i) = rng.uniform_sym();
                B(i, i) = rng.uniform_sym();
            }
            const OraclePair pair = quadform_cov_oracle(A, B, m.sizes, m.tau, m.delta);
            max_err = std::max(max_err, std::abs(pair.lhs - pair.rhs));
        }
        // Identity pair and the zero matrix edge case.
        const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(p, p);
        const OraclePair idp = quadform_cov_oracle(I, I, m.sizes, m.tau, m.delta);
        max_err = std::max(max_err, std::abs(idp.lhs - idp.rhs));
        const OraclePair zp =
            quadform_cov_oracle(I, Eigen::MatrixXd::Zero(p, p), m.sizes, m.tau, m.delta);
        max_err = std::max(max_err, std::abs(zp.lhs) + std::abs(zp.rhs));
    }

    // Hand-checked case: rademacher, no radial part, alternating diagonal.
    {
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(4, 4);
        A.diagonal() << 1.0, -1.0, 1.0, -1.0;
        const OraclePair pair = quadform_cov_oracle(A, A, {4}, {0.0}, {1.0});
        max_err = std::max(max_err, std::abs(pair.lhs - pair.rhs));
        max_err = std::max(max_err, std::abs(pair.lhs));  // 2 tr(A^2) + nu4 sum A_ii^2 = 0
    }

    out.pass = max_err <= 1e-12;
    out.detail = fmt("max |enumerated - decomposition| = %.3g (tol 1e-12)", max_err);
    return out;
}

CheckResult check_poisson_spike(std::uint64_t seed, int threads, int reps, int p, int n) {
    CheckResult out;
    out.id = "poisson-spike";
    const double lambda = 1.0;
    const auto t0 = std::chrono::steady_clock::now();

    const SeedSpec spec{seed, "validate|poisson"};
    std::vector<double> stat(static_cast<std::size_t>(reps));
    parallel_for(stat.size(), threads, [&](std::size_t r) {
        const Eigen::MatrixXd X = sample_spike_dataset(p, n, lambda, spec, r);
        stat[r] = X.squaredNorm() / n - p + lambda;
    });

    double mean = 0.0;
    std::vector<double> counts(8, 0.0);
    for (double s : stat) {
        mean += s;
        const long k = std::lround(s);
        if (k >= 0 && k < static_cast<long>(counts.size())) counts[static_cast<std::size_t>(k)] += 1.0;
    }
    mean /= static_cast<double>(reps);

    double max_pmf_err = 0.0;
    std::string pmf;
    double factorial = 1.0;
    for (int k = 0; k <= 3; ++k) {
        if (k > 0) factorial *= k;
        const double target = std::exp(-lambda) * std::pow(lambda, k) / factorial;
        const double got = counts[static_cast<std::size_t>(k)] / reps;
        max_pmf_err = std::max(max_pmf_err, std::abs(got - target));
        pmf += fmt("%d:%.4f/%.4f ", k, got, target);
    }

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.pass = (max_pmf_err <= 0.02) && (std::abs(mean - 1.0) <= 0.05);
    out.detail = fmt("pmf emp/target %s max err %.3g (tol 0.02), mean %.3f (1 +- 0.05), %.1fs",
                     pmf.c_str(), max_pmf_err, mean, elapsed);
    return out;
}

CheckResult check_corr_boundary(std::uint64_t seed, std::int64_t rows) {
    CheckResult out;
    out.id = "correlation-boundary";

    bool pass = true;
    std::string detail;
    for (int n : {4, 8, 16}) {
        const SeedSpec spec{seed, "validate|corrboundary|n=" + std::to_string(n)};
        const MCEstimate est = corr_boundary_mc(n, rows, spec);
        const double target = corr_boundary_gamma(n, beta4_gaussian(n));
        const bool ok = std::abs(est.value - target) <= 3.0 * est.se;
        pass = pass && ok;
        detail += fmt("n=%d: %.4f vs %.4f (3SE %.4f)%s ", n, est.value, target,
                      3.0 * est.se, ok ? "" : " FAIL");
    }
    // The Gaussian simplification itself.
    for (int n : {4, 8, 16, 100}) {
        const double direct = corr_boundary_gamma(n, beta4_gaussian(n));
        const double simplified = -4.0 * n / (n + 2.0);
        if (std::abs(direct - simplified) > 1e-12 * std::abs(simplified)) {
            pass = false;
            detail += fmt("simplification mismatch at n=%d ", n);
        }
    }

    out.pass = pass;
    out.detail = detail;
    return out;
}

std::vector<CheckResult> run_validate(std::uint64_t seed, int threads, bool quick) {
    std::vector<CheckResult> results;
    results.push_back(check_mp_closed_form());
    results.push_back(check_residue_reduction());
    results.push_back(check_moment_identities());
    results.push_back(check_quadform_enumeration(seed));
    if (quick)
        results.push_back(check_poisson_spike(seed, threads, 3000, 200, 400));
    else
        results.push_back(check_poisson_spike(seed, threads));
    results.push_back(check_corr_boundary(seed, quick ? 200000 : 1000000));
    return results;
}

}  // namespace gs
