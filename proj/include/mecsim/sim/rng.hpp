#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace mecsim::sim {

/// Deterministic random source. mt19937_64 output is pinned by the standard,
/// and the uniform/normal transforms below avoid the implementation-defined
/// std::*_distribution classes, so a seed yields the same draw sequence on
/// every platform.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform draw in [0, 1) with 53 bits of precision.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Box-Muller transform; the spare value is cached for the next call.
    double normal(double mean, double stddev);

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

}  // namespace mecsim::sim
