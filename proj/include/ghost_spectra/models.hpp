// Data generating processes: blockwise mixed radial observations, the sparse
// spike model and uniform rows on the sphere.
#pragma once

#include <Eigen/Dense>

#include <string>
#include <string_view>
#include <vector>

#include "ghost_spectra/rng.hpp"

namespace gs {

enum class Dist { gaussian, rademacher, student_t };

// One coordinate block of the observation vector.  Within the block the
// entries are i.i.d. unit variance draws from `dist`, all multiplied by a
// shared radial factor rho with
//   rho^2 = 1 + sqrt(3 tau) p^{-delta/2} U,   U uniform on [-1, 1),
// so that E rho^2 = 1 and Var rho^2 = tau p^{-delta}.  tau = 0 switches the
// radial factor off.
struct BlockSpec {
    double ratio = 1.0;  // fraction of the p coordinates
    Dist dist = Dist::gaussian;
    int df = 0;          // student_t only, must be > 4
    double tau = 0.0;
    double delta = 1.0;
    double alpha = 1.0;  // block growth exponent, used by phase diagnostics
};

struct BlockModelConfig {
    std::string name;
    std::vector<BlockSpec> blocks;
};

// Named presets M1..M6 covering the simulation study.
BlockModelConfig preset_model(std::string_view name);
std::vector<std::string> known_presets();

// Excess kurtosis of the unit variance direction entries of a block.
double nu4_of(const BlockSpec& block);

// Block sizes at dimension p: round(ratio_k * p) with the last block
// absorbing the remainder.  Throws if any block ends up empty.
std::vector<int> block_sizes(const BlockModelConfig& cfg, int p);

// Throws std::invalid_argument when the configuration is unusable at
// dimension p (bad ratios, df <= 4, or a radial factor so wide that rho^2
// could reach zero, i.e. sqrt(3 tau) p^{-delta/2} >= 1).
void validate_model(const BlockModelConfig& cfg, int p);

// Draws the p x n matrix whose columns are independent observations
//   r = Sigma^{1/2} w,  Sigma = sigma2 * diag(sigma_diag),
// with w the blockwise mixed radial vector.  A null sigma_diag means the
// identity.  Per-column draw order is fixed: blocks in order, radial factor
// first (when tau > 0), then the block's entries.
Eigen::MatrixXd sample_block_dataset(const BlockModelConfig& cfg, int p, int n,
                                     const SeedSpec& seed, std::uint64_t replicate,
                                     const std::vector<double>* sigma_diag = nullptr,
                                     double sigma2 = 1.0);

// Sparse spike model: entries are +-sqrt(n) with probability q/2 each,
// q = lambda / (p n), and +-b otherwise with b chosen so the variance is
// exactly one.  Requires lambda < p.  One uniform decides each entry.
Eigen::MatrixXd sample_spike_dataset(int p, int n, double lambda,
                                     const SeedSpec& seed, std::uint64_t replicate);

// `count` rows drawn uniformly on the unit sphere of R^n.
Eigen::MatrixXd sample_sphere_rows(int n, int count, const SeedSpec& seed,
                                   std::uint64_t replicate);

// Diagonal of the alternative covariance: the first floor(frac * p) entries
// equal a * sigma2, the rest sigma2.
std::vector<double> alternative_sigma_diag(int p, double a, double frac,
                                           double sigma2 = 1.0);

}  // namespace gs
