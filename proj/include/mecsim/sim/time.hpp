#pragma once

#include <cmath>
#include <compare>
#include <cstdint>

#include "mecsim/errors.hpp"

namespace mecsim::sim {

/// Simulated time measured in ticks; one tick is 100 ms.
struct SimTime {
    static constexpr std::uint64_t ticks_per_second = 10;

    std::uint64_t ticks = 0;

    constexpr SimTime() = default;
    constexpr explicit SimTime(std::uint64_t t) : ticks(t) {}

    static SimTime from_seconds(double s) {
        if (s < 0) {
            throw SimError(Err::schema_error, "negative time");
        }
        double scaled = s * static_cast<double>(ticks_per_second);
        double rounded = std::round(scaled);
        if (std::abs(scaled - rounded) > 1e-6) {
            throw SimError(Err::schema_error, "time is not a multiple of 0.1 s");
        }
        return SimTime(static_cast<std::uint64_t>(rounded));
    }

    double seconds() const { return static_cast<double>(ticks) / ticks_per_second; }

    auto operator<=>(const SimTime&) const = default;

    SimTime operator+(SimTime other) const { return SimTime(ticks + other.ticks); }
    SimTime operator+(std::uint64_t t) const { return SimTime(ticks + t); }
};

}  // namespace mecsim::sim
