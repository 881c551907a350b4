#include "ghost_spectra/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace gs {

int GammaBlockParams::p() const {
    int s = 0;
    for (int sz : sizes) s += sz;
    return s;
}

void GammaBlockParams::validate() const {
    const std::size_t B = sizes.size();
    if (B == 0) throw std::invalid_argument("kernel needs at least one block");
    if (nu4.size() != B || tau.size() != B || delta.size() != B)
        throw std::invalid_argument("kernel parameter lists must have equal length");
    for (std::size_t j = 0; j < B; ++j) {
        if (sizes[j] < 1) throw std::invalid_argument("kernel block sizes must be positive");
        if (!(tau[j] >= 0.0)) throw std::invalid_argument("tau must be nonnegative");
        if (!(delta[j] > 0.0)) throw std::invalid_argument("delta must be positive");
    }
}

GammaBlockParams gamma_params_for(const BlockModelConfig& cfg, int p) {
    validate_model(cfg, p);
    GammaBlockParams params;
    params.sizes = block_sizes(cfg, p);
    for (const BlockSpec& b : cfg.blocks) {
        params.nu4.push_back(nu4_of(b));
        params.tau.push_back(b.tau);
        params.delta.push_back(b.delta);
    }
    return params;
}

std::complex<double> gamma_block(const std::vector<std::complex<double>>& diag_a,
                                 const std::vector<std::complex<double>>& diag_b,
                                 const GammaBlockParams& params) {
    params.validate();
    const int p = params.p();
    if (static_cast<int>(diag_a.size()) != p || static_cast<int>(diag_b.size()) != p)
        throw std::invalid_argument("diagonal length must match kernel dimension");

    std::complex<double> total = 0.0;
    int offset = 0;
    for (std::size_t j = 0; j < params.sizes.size(); ++j) {
        std::complex<double> hadamard = 0.0, tra = 0.0, trb = 0.0;
        for (int i = offset; i < offset + params.sizes[j]; ++i) {
            hadamard += diag_a[static_cast<std::size_t>(i)] * diag_b[static_cast<std::size_t>(i)];
            tra += diag_a[static_cast<std::size_t>(i)];
            trb += diag_b[static_cast<std::size_t>(i)];
        }
        total += params.nu4[j] * hadamard +
                 params.tau[j] * std::pow(p, -params.delta[j]) * tra * trb;
        offset += params.sizes[j];
    }
    return total;
}

double gamma_block(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                   const GammaBlockParams& params) {
    const int p = params.p();
    if (A.rows() != p || A.cols() != p || B.rows() != p || B.cols() != p)
        throw std::invalid_argument("matrix dimensions must match kernel dimension");
    std::vector<std::complex<double>> da(static_cast<std::size_t>(p)),
        db(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) {
        da[static_cast<std::size_t>(i)] = A(i, i);
        db[static_cast<std::size_t>(i)] = B(i, i);
    }
    return gamma_block(da, db, params).real();
}

double gamma_scalar_closed_form(const GammaBlockParams& params) {
    params.validate();
    const double p = params.p();
    double g = 0.0;
    for (std::size_t j = 0; j < params.sizes.size(); ++j) {
        const double pj = params.sizes[j];
        g += params.nu4[j] * pj + params.tau[j] * pj * pj * std::pow(p, -params.delta[j]);
    }
    return g;
}

double gamma_hat(const Eigen::VectorXd& energies, int p, bool studentize) {
    const int n = static_cast<int>(energies.size());
    if (n < 2) throw std::invalid_argument("need at least two observations");
    if (p < 1) throw std::invalid_argument("dimension must be positive");

    double sum_sq = 0.0;
    if (studentize) {
        const double mean = energies.mean();
        if (mean == 0.0)
            throw std::invalid_argument("cannot studentize energies with zero mean");
        for (int i = 0; i < n; ++i) {
            const double d = p * energies[i] / mean - p;
            sum_sq += d * d;
        }
    } else {
        for (int i = 0; i < n; ++i) {
            const double d = energies[i] - p;
            sum_sq += d * d;
        }
    }
    return sum_sq / n - 2.0 * p;
}

PhaseIndices phase_indices(const std::vector<std::pair<double, double>>& alpha_delta,
                           int p) {
    if (alpha_delta.empty()) throw std::invalid_argument("need at least one block");
    if (p < 1) throw std::invalid_argument("dimension must be positive");
    PhaseIndices out;
    double max_phi = -std::numeric_limits<double>::infinity();
    for (const auto& [alpha, delta] : alpha_delta) {
        if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
        const double phi = 2.0 * alpha - delta;
        out.phi.push_back(phi);
        max_phi = std::max(max_phi, phi);
    }
    out.kappa = 0.5 * max_phi;
    out.r_p = (max_phi <= 1.0) ? 1.0 : std::pow(p, (1.0 - max_phi) / 2.0);
    return out;
}

OraclePair quadform_cov_oracle(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                               const std::vector<int>& sizes,
                               const std::vector<double>& tau,
                               const std::vector<double>& delta) {
    const std::size_t nblocks = sizes.size();
    if (tau.size() != nblocks || delta.size() != nblocks)
        throw std::invalid_argument("oracle parameter lists must have equal length");
    int p = 0;
    for (int s : sizes) {
        if (s < 1) throw std::invalid_argument("oracle block sizes must be positive");
        p += s;
    }
    if (p > 8) throw std::invalid_argument("enumeration oracle capped at p <= 8");
    if (A.rows() != p || A.cols() != p || B.rows() != p || B.cols() != p)
        throw std::invalid_argument("matrix dimensions must match the model");

    std::vector<double> s_j(nblocks);
    std::vector<int> block_of(static_cast<std::size_t>(p));
    {
        int offset = 0;
        for (std::size_t j = 0; j < nblocks; ++j) {
            s_j[j] = std::sqrt(tau[j]) * std::pow(p, -delta[j] / 2.0);
            if (s_j[j] >= 1.0)
                throw std::invalid_argument("two-point radial law needs sqrt(tau) p^{-delta/2} < 1");
            for (int i = 0; i < sizes[j]; ++i) block_of[static_cast<std::size_t>(offset + i)] = static_cast<int>(j);
            offset += sizes[j];
        }
    }

    const double tr_a = A.trace(), tr_b = B.trace();
    const std::uint64_t sign_states = 1ULL << p;
    const std::uint64_t radial_states = 1ULL << nblocks;

    // Exact enumeration of E[Q(A) Q(B)] over all sign and radial outcomes.
    double e_ab = 0.0, e_a = 0.0, e_b = 0.0;
    std::vector<double> w(static_cast<std::size_t>(p));
    for (std::uint64_t rb = 0; rb < radial_states; ++rb) {
        std::vector<double> rho(nblocks);
        for (std::size_t j = 0; j < nblocks; ++j)
            rho[j] = std::sqrt(1.0 + ((rb >> j) & 1ULL ? s_j[j] : -s_j[j]));
        for (std::uint64_t sm = 0; sm < sign_states; ++sm) {
            for (int i = 0; i < p; ++i)
                w[static_cast<std::size_t>(i)] =
                    ((sm >> i) & 1ULL ? 1.0 : -1.0) * rho[static_cast<std::size_t>(block_of[static_cast<std::size_t>(i)])];
            double qa = -tr_a, qb = -tr_b;
            for (int i = 0; i < p; ++i)
                for (int k = 0; k < p; ++k) {
                    qa += w[static_cast<std::size_t>(i)] * A(i, k) * w[static_cast<std::size_t>(k)];
                    qb += w[static_cast<std::size_t>(i)] * B(i, k) * w[static_cast<std::size_t>(k)];
                }
            e_ab += qa * qb;
            e_a += qa;
            e_b += qb;
        }
    }
    const double total = static_cast<double>(sign_states) * static_cast<double>(radial_states);
    e_ab /= total;
    e_a /= total;
    e_b /= total;

    GammaBlockParams params;
    params.sizes = sizes;
    params.nu4.assign(nblocks, -2.0);  // rademacher directions
    params.tau = tau;
    params.delta = delta;

    OraclePair out;
    out.lhs = e_ab - e_a * e_b;
    out.rhs = (A * B).trace() + (A * B.transpose()).trace() + gamma_block(A, B, params);
    return out;
}

double corr_boundary_gamma(int n, double beta4) {
    if (n < 2) throw std::invalid_argument("need n >= 2");
    if (!(beta4 > 0.0 && beta4 < 1.0)) throw std::invalid_argument("beta4 must lie in (0,1)");
    const double nn = n;
    return nn * nn * (nn * nn * beta4 - 1.0) / (nn - 1.0) - 2.0 * nn;
}

double beta4_gaussian(int n) {
    if (n < 2) throw std::invalid_argument("need n >= 2");
    return 3.0 / (static_cast<double>(n) * (n + 2.0));
}

MCEstimate corr_boundary_mc(int n, std::int64_t rows, const SeedSpec& seed) {
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("trace-zero sign diagonal needs even n");
    if (rows < 2) throw std::invalid_argument("need at least two rows");

    // Alternating +-1 diagonal has trace zero.
    const std::int64_t chunk = 16384;
    double sum_q2 = 0.0, sum_q4 = 0.0;
    std::int64_t done = 0;
    std::uint64_t rep = 0;
    while (done < rows) {
        const int m = static_cast<int>(std::min<std::int64_t>(chunk, rows - done));
        const Eigen::MatrixXd Y = sample_sphere_rows(n, m, seed, rep++);
        for (int r = 0; r < m; ++r) {
            double q = 0.0;
            for (int i = 0; i < n; ++i) {
                const double y2 = Y(r, i) * Y(r, i);
                q += (i % 2 == 0) ? y2 : -y2;
            }
            q *= n;  // rows are scaled to norm sqrt(n) in the model
            const double q2 = q * q;
            sum_q2 += q2;
            sum_q4 += q2 * q2;
        }
        done += m;
    }
    const double N = static_cast<double>(rows);
    const double mean_q2 = sum_q2 / N;
    const double var_q2 = std::max(0.0, sum_q4 / N - mean_q2 * mean_q2);

    MCEstimate est;
    // E Q^2 = Gaussian part (2n) + Gamma; the tested diagonal squares to I.
    est.value = mean_q2 - 2.0 * n;
    est.se = std::sqrt(var_q2 / N);
    return est;
}

}  // namespace gs
