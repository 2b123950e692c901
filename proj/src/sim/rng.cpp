#include "mecsim/sim/rng.hpp"

#include <cmath>
#include <numbers>

namespace mecsim::sim {

double SeededRng::normal(double mean, double stddev) {
    if (spare_) {
        double z = *spare_;
        spare_.reset();
        return mean + stddev * z;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 0.0) {
        u1 = uniform01();
    }
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    return mean + stddev * radius * std::cos(angle);
}

}  // namespace mecsim::sim
