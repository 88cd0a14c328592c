#pragma once

#include <cstdint>
#include <random>

namespace expbandit {

// SplitMix64 finalizer; good avalanche, used only for seed derivation.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seeded random stream with cheap derivation of independent substreams.
// split(id) depends only on the root seed and id, never on how many values
// have been consumed, so substream layouts are reproducible by construction.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : root_(seed), engine_(mix64(seed)) {}

    RandomStream split(std::uint64_t id) const {
        return RandomStream(mix64(root_ ^ mix64(id + 0x51ed270b8a3c21d5ULL)));
    }

    std::uint64_t root_seed() const { return root_; }
    std::mt19937_64& engine() { return engine_; }

    // U(0,1); excludes 0 and 1 so inverse-CDF transforms stay finite.
    double uniform() {
        double u = std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
        return u > 0.0 ? u : 5e-324;
    }

    double normal(double mean = 0.0, double stddev = 1.0) {
        return std::normal_distribution<double>(mean, stddev)(engine_);
    }

    // shape/rate parametrization
    double gamma(double shape, double rate) {
        return std::gamma_distribution<double>(shape, 1.0 / rate)(engine_);
    }

    double beta(double a, double b) {
        double x = std::gamma_distribution<double>(a, 1.0)(engine_);
        double y = std::gamma_distribution<double>(b, 1.0)(engine_);
        return x / (x + y);
    }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
    }

  private:
    std::uint64_t root_;
    std::mt19937_64 engine_;
};

}  // namespace expbandit
