#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <string>
#include <vector>

#include "mecsim/errors.hpp"
#include "mecsim/sim/rng.hpp"
#include "mecsim/sim/time.hpp"

namespace mecsim::sim {

using Action = std::function<void()>;
using TickHook = std::function<void(SimTime)>;

/// Deterministic discrete-event engine. Single-threaded by contract: all
/// mutation of simulation state happens on the dispatch loop. Events at the
/// same tick fire in insertion order; per-tick hooks run after the discrete
/// events of that tick.
class Kernel {
public:
    explicit Kernel(std::uint64_t seed = 0) : rng_(seed) {}

    SimTime now() const { return now_; }

    SeededRng& rng() { return rng_; }

    /// Enqueue an action. Throws SchedulingInPast if `at` precedes the clock.
    std::uint64_t schedule(SimTime at, Action action);

    /// Named hooks run once per elapsed tick, in registration order.
    void add_tick_hook(std::string name, TickHook hook);

    /// Dispatch every event with fire_at <= end, run tick hooks for each
    /// elapsed tick, and advance the clock to `end`. Returns the number of
    /// events fired. Calling again with the same end is a no-op.
    std::size_t run_until(SimTime end);

private:
    struct QueuedEvent {
        SimTime fire_at;
        std::uint64_t seq;
        Action action;
    };

    struct LaterFirst {
        bool operator()(const QueuedEvent& a, const QueuedEvent& b) const {
            if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
            return a.seq > b.seq;
        }
    };

    std::size_t dispatch_due(SimTime tick);

    SimTime now_;
    std::uint64_t next_seq_ = 0;
    bool hooks_ran_at_zero_ = false;
    std::uint64_t last_hooked_ = 0;
    std::priority_queue<QueuedEvent, std::vector<QueuedEvent>, LaterFirst> queue_;
    std::vector<std::pair<std::string, TickHook>> hooks_;
    SeededRng rng_;
};

}  // namespace mecsim::sim
