#ifndef BDPP_RNG_HPP
#define BDPP_RNG_HPP

#include <cstdint>
#include <random>

namespace bdpp {

/// Deterministic random stream. The uint64 -> double mapping is spelled out
/// here instead of going through std::uniform_real_distribution, whose output
/// is implementation-defined; identical seeds must give identical runs
/// everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    /// Uniform in [0, 1) with 53 bits of mantissa.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
    std::mt19937_64 gen_;
};

}  // namespace bdpp

#endif
