// Deterministic random number generation with named substreams.
//
// Every Monte Carlo replicate draws from its own stream, derived from
// (master seed, experiment id, replicate index).  Work can therefore be
// scheduled on any number of threads without changing a single draw.
#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace gs {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// One step of the splitmix64 generator started at `x`.
inline std::uint64_t splitmix64(std::uint64_t x) {
    std::uint64_t z = x + kGolden;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// FNV-1a hash of an experiment identifier, used as stream salt.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::uint64_t substream_seed(std::uint64_t master,
                                    std::string_view experiment_id,
                                    std::uint64_t replicate) {
    return splitmix64(master ^ (replicate + 1) * kGolden ^ fnv1a64(experiment_id));
}

// xoshiro256** with helpers for the draws the samplers need.
class Stream {
  public:
    explicit Stream(std::uint64_t seed) {
        // Expand the 64-bit seed through splitmix64, the recommended warmup.
        std::uint64_t x = seed;
        for (auto& word : s_) {
            x += kGolden;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            word = z ^ (z >> 31);
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0, 1), 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1]; safe under log().
    double uniform_pos() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Uniform on [-1, 1).
    double uniform_sym() { return 2.0 * uniform01() - 1.0; }

    double rademacher() { return (next_u64() >> 63) ? 1.0 : -1.0; }

    // Standard normal via the Marsaglia polar method; pairs are cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = uniform_sym();
            v = uniform_sym();
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    // Chi squared with df degrees of freedom.  Even part via products of
    // uniforms (two degrees of freedom per log), odd part adds one normal^2.
    double chi_squared(int df) {
        double prod = 1.0;
        for (int k = 0; k < df / 2; ++k) prod *= uniform_pos();
        double x = -2.0 * std::log(prod);
        if (df % 2 == 1) {
            const double z = normal();
            x += z * z;
        }
        return x;
    }

    // Student t with df > 4 degrees of freedom, standardized to unit variance.
    double student_t_unit(int df) {
        const double z = normal();
        const double v = chi_squared(df);
        const double t = z / std::sqrt(v / df);
        return t * std::sqrt((df - 2.0) / df);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4]{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Seed bundle handed to samplers; replicate index completes the stream id.
struct SeedSpec {
    std::uint64_t master = 0;
    std::string_view experiment_id;

    Stream stream(std::uint64_t replicate) const {
        return Stream(substream_seed(master, experiment_id, replicate));
    }
};

}  // namespace gs
