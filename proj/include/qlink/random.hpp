#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace qlink {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seedable random stream. Identical (seed, stream_id) pairs yield identical
/// variate sequences; distinct stream ids are decorrelated by hashing.
///
/// The generator contract here is deliberately modest: 64-bit seedable,
/// independent streams, equidistribution good enough for Bernoulli/geometric
/// sampling. mt19937_64 is standard-specified, so sequences are reproducible
/// across platforms; all samplers below are hand-rolled on top of raw 64-bit
/// draws for the same reason (library distributions are implementation
/// defined).
class RandomStream {
  public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed),
          stream_id_(stream_id),
          engine_(splitmix64(splitmix64(seed) ^ splitmix64(stream_id * 0xD6E8FEB86659FD93ULL + 1))) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t raw() { return engine_(); }

    /// Uniform in [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Number of Bernoulli(p) trials up to and including the first success
    /// (support {1, 2, ...}). p in (0, 1]; p >= 1 always returns 1.
    double geometric(double p) {
        if (p >= 1.0) return 1.0;
        const double u = 1.0 - uniform01();  // (0, 1]
        const double k = std::ceil(std::log(u) / std::log1p(-p));
        return k < 1.0 ? 1.0 : k;
    }

    /// Standard normal via Box-Muller.
    double normal() {
        double u1 = 1.0 - uniform01();
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    /// Poisson(lambda). Knuth's product method for small lambda; for large
    /// lambda a rounded normal approximation (mean-exact to < 0.5 counts) is
    /// used, which is only ever consumed by side-channel tallies.
    double poisson(double lambda) {
        if (lambda <= 0.0) return 0.0;
        if (lambda > 256.0) {
            double n = std::round(lambda + std::sqrt(lambda) * normal());
            return n < 0.0 ? 0.0 : n;
        }
        const double limit = std::exp(-lambda);
        double prod = uniform01();
        double count = 0.0;
        while (prod > limit) {
            prod *= uniform01();
            count += 1.0;
        }
        return count;
    }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
};

/// Stream-id layout used by the protocol machines: a replication owns a
/// small contiguous block so per-node streams stay independent.
enum class StreamRole : std::uint64_t { midpoint = 0, node_a = 1, node_b = 2 };

inline RandomStream make_stream(std::uint64_t seed, std::uint64_t replication, StreamRole role) {
    return RandomStream(seed, replication * 4 + static_cast<std::uint64_t>(role));
}

}  // namespace qlink
