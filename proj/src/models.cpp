#include "ghost_spectra/models.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace gs {

namespace {

BlockSpec block(double ratio, Dist dist, int df, double tau, double delta) {
    BlockSpec b;
    b.ratio = ratio;
    b.dist = dist;
    b.df = df;
    b.tau = tau;
    b.delta = delta;
    return b;
}

}  // namespace

BlockModelConfig preset_model(std::string_view name) {
    BlockModelConfig cfg;
    cfg.name = std::string(name);
    if (name == "M1") {
        cfg.blocks = {block(1.0, Dist::gaussian, 0, 0.0, 1.0)};
    } else if (name == "M2") {
        cfg.blocks = {block(1.0, Dist::rademacher, 0, 0.0, 1.0)};
    } else if (name == "M3") {
        cfg.blocks = {block(0.4, Dist::gaussian, 0, 0.8, 1.0),
                      block(0.6, Dist::gaussian, 0, 1.2, 0.8)};
    } else if (name == "M4") {
        cfg.blocks = {block(0.2, Dist::gaussian, 0, 1.0, 1.0),
                      block(0.8, Dist::gaussian, 0, 2.0, 0.6)};
    } else if (name == "M5") {
        cfg.blocks = {block(0.2, Dist::student_t, 8, 1.0, 1.0),
                      block(0.8, Dist::student_t, 8, 2.0, 0.6)};
    } else if (name == "M6") {
        cfg.blocks = {block(0.1, Dist::rademacher, 0, 0.8, 1.2),
                      block(0.2, Dist::rademacher, 0, 1.5, 0.9),
                      block(0.7, Dist::rademacher, 0, 2.2, 0.6)};
    } else {
        throw std::invalid_argument("unknown model preset: " + std::string(name));
    }
    return cfg;
}

std::vector<std::string> known_presets() {
    return {"M1", "M2", "M3", "M4", "M5", "M6"};
}

double nu4_of(const BlockSpec& b) {
    switch (b.dist) {
        case Dist::gaussian:
            return 0.0;
        case Dist::rademacher:
            return -2.0;
        case Dist::student_t:
            if (b.df <= 4) throw std::invalid_argument("student_t needs df > 4");
            return 6.0 / (b.df - 4.0);
    }
    throw std::invalid_argument("unknown direction law");
}

std::vector<int> block_sizes(const BlockModelConfig& cfg, int p) {
    if (cfg.blocks.empty()) throw std::invalid_argument("model has no blocks");
    std::vector<int> sizes(cfg.blocks.size());
    int used = 0;
    for (std::size_t j = 0; j + 1 < cfg.blocks.size(); ++j) {
        sizes[j] = static_cast<int>(std::lround(cfg.blocks[j].ratio * p));
        used += sizes[j];
    }
    sizes.back() = p - used;  // last block absorbs the rounding remainder
    for (int s : sizes)
        if (s < 1) throw std::invalid_argument("block size underflow at this dimension");
    return sizes;
}

void validate_model(const BlockModelConfig& cfg, int p) {
    if (p < 1) throw std::invalid_argument("dimension must be positive");
    double ratio_sum = 0.0;
    for (const BlockSpec& b : cfg.blocks) {
        if (!(b.ratio > 0.0 && b.ratio <= 1.0))
            throw std::invalid_argument("block ratio must lie in (0,1]");
        if (!(b.tau >= 0.0)) throw std::invalid_argument("tau must be nonnegative");
        if (!(b.delta > 0.0)) throw std::invalid_argument("delta must be positive");
        if (b.dist == Dist::student_t && b.df <= 4)
            throw std::invalid_argument("student_t needs df > 4");
        if (b.tau > 0.0) {
            const double half_width = std::sqrt(3.0 * b.tau) * std::pow(p, -b.delta / 2.0);
            if (half_width >= 1.0)
                throw std::invalid_argument(
                    "radial spread sqrt(3 tau) p^{-delta/2} >= 1: "
                    "model invalid at this dimension");
        }
        ratio_sum += b.ratio;
    }
    if (std::abs(ratio_sum - 1.0) > 1e-12)
        throw std::invalid_argument("block ratios must sum to one");
    block_sizes(cfg, p);  // checks for empty blocks
}

Eigen::MatrixXd sample_block_dataset(const BlockModelConfig& cfg, int p, int n,
                                     const SeedSpec& seed, std::uint64_t replicate,
                                     const std::vector<double>* sigma_diag,
                                     double sigma2) {
    validate_model(cfg, p);
    if (n < 1) throw std::invalid_argument("sample size must be positive");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be positive");
    if (sigma_diag && static_cast<int>(sigma_diag->size()) != p)
        throw std::invalid_argument("sigma_diag length must equal p");

    const std::vector<int> sizes = block_sizes(cfg, p);

    std::vector<double> scale(p, std::sqrt(sigma2));
    if (sigma_diag) {
        for (int i = 0; i < p; ++i) {
            if (!((*sigma_diag)[i] >= 0.0))
                throw std::invalid_argument("sigma_diag entries must be nonnegative");
            scale[i] = std::sqrt(sigma2 * (*sigma_diag)[i]);
        }
    }

    // Radial half widths sqrt(3 tau) p^{-delta/2}, zero when tau = 0.
    std::vector<double> half_width(cfg.blocks.size(), 0.0);
    for (std::size_t j = 0; j < cfg.blocks.size(); ++j)
        if (cfg.blocks[j].tau > 0.0)
            half_width[j] =
                std::sqrt(3.0 * cfg.blocks[j].tau) * std::pow(p, -cfg.blocks[j].delta / 2.0);

    Eigen::MatrixXd X(p, n);
    Stream rng = seed.stream(replicate);
    for (int k = 0; k < n; ++k) {
        int row = 0;
        for (std::size_t j = 0; j < cfg.blocks.size(); ++j) {
            const BlockSpec& b = cfg.blocks[j];
            double rho = 1.0;
            if (b.tau > 0.0) rho = std::sqrt(1.0 + half_width[j] * rng.uniform_sym());
            for (int i = 0; i < sizes[j]; ++i, ++row) {
                double w;
                switch (b.dist) {
                    case Dist::gaussian:
                        w = rng.normal();
                        break;
                    case Dist::rademacher:
                        w = rng.rademacher();
                        break;
                    case Dist::student_t:
                        w = rng.student_t_unit(b.df);
                        break;
                    default:
                        throw std::invalid_argument("unknown direction law");
                }
                X(row, k) = scale[row] * rho * w;
            }
        }
    }
    return X;
}

Eigen::MatrixXd sample_spike_dataset(int p, int n, double lambda,
                                     const SeedSpec& seed, std::uint64_t replicate) {
    if (p < 1 || n < 2) throw std::invalid_argument("need p >= 1 and n >= 2");
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    const double q = lambda / (static_cast<double>(p) * n);
    if (q * n >= 1.0)
        throw std::invalid_argument("spike probability too large: q*n must stay below 1");
    const double spike = std::sqrt(static_cast<double>(n));
    const double base = std::sqrt((1.0 - q * n) / (1.0 - q));

    Eigen::MatrixXd X(p, n);
    Stream rng = seed.stream(replicate);
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < p; ++i) {
            // A single uniform splits four ways, keeping one draw per entry.
            const double u = rng.uniform01();
            double v;
            if (u < 0.5 * q)
                v = spike;
            else if (u < q)
                v = -spike;
            else if (u < q + 0.5 * (1.0 - q))
                v = base;
            else
                v = -base;
            X(i, k) = v;
        }
    }
    return X;
}

Eigen::MatrixXd sample_sphere_rows(int n, int count, const SeedSpec& seed,
                                   std::uint64_t replicate) {
    if (n < 2) throw std::invalid_argument("sphere dimension must be at least 2");
    if (count < 1) throw std::invalid_argument("row count must be positive");
    Eigen::MatrixXd Y(count, n);
    Stream rng = seed.stream(replicate);
    for (int r = 0; r < count; ++r) {
        double norm2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double g = rng.normal();
            Y(r, i) = g;
            norm2 += g * g;
        }
        Y.row(r) /= std::sqrt(norm2);
    }
    return Y;
}

std::vector<double> alternative_sigma_diag(int p, double a, double frac, double sigma2) {
    if (p < 1) throw std::invalid_argument("dimension must be positive");
    if (!(a > 0.0)) throw std::invalid_argument("alternative strength must be positive");
    if (!(frac >= 0.0 && frac <= 1.0)) throw std::invalid_argument("fraction must lie in [0,1]");
    std::vector<double> d(p, sigma2);
    const int k = static_cast<int>(std::floor(frac * p));
    for (int i = 0; i < k; ++i) d[i] = a * sigma2;
    return d;
}

}  // namespace gs
