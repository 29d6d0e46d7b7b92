#ifndef PTXSIM_RNG_HPP
#define PTXSIM_RNG_HPP

#include <cstdint>
#include <random>

namespace ptxsim {

// Seeded PRNG wrapper. mt19937_64 has a standard-specified output sequence,
// and the uniform helpers below avoid std::uniform_*_distribution (whose
// algorithms are implementation-defined), so a fixed seed gives the same
// stream on any conforming toolchain.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Derives an independent stream from (seed, stream index).
    static Rng substream(std::uint64_t seed, std::uint64_t stream) {
        return Rng(splitmix64(seed + 0x9e3779b97f4a7c15ULL * (stream + 1)));
    }

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    bool bernoulli(double p) { return uniform01() < p; }

    // Unbiased integer in [0, n), n > 0.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

  private:
    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
};

}  // namespace ptxsim

#endif
