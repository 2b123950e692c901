#include "mecsim/sim/kernel.hpp"

#include <utility>

namespace mecsim::sim {

std::uint64_t Kernel::schedule(SimTime at, Action action) {
    if (at < now_) {
        throw SimError(Err::scheduling_in_past,
                       "schedule at tick " + std::to_string(at.ticks) + " but now is tick " +
                           std::to_string(now_.ticks));
    }
    std::uint64_t id = next_seq_++;
    queue_.push(QueuedEvent{at, id, std::move(action)});
    return id;
}

void Kernel::add_tick_hook(std::string name, TickHook hook) {
    hooks_.emplace_back(std::move(name), std::move(hook));
}

std::size_t Kernel::dispatch_due(SimTime tick) {
    std::size_t fired = 0;
    while (!queue_.empty() && queue_.top().fire_at == tick) {
        Action action = queue_.top().action;
        queue_.pop();
        ++fired;
        action();
    }
    return fired;
}

std::size_t Kernel::run_until(SimTime end) {
    if (end < now_) {
        throw SimError(Err::scheduling_in_past,
                       "run_until(" + std::to_string(end.ticks) + ") but now is tick " +
                           std::to_string(now_.ticks));
    }
    std::size_t fired = 0;
    while (true) {
        fired += dispatch_due(now_);
        if (!hooks_ran_at_zero_ || now_.ticks > last_hooked_) {
            for (auto& [name, hook] : hooks_) {
                hook(now_);
            }
            hooks_ran_at_zero_ = true;
            last_hooked_ = now_.ticks;
            // hooks may enqueue work for the tick they just observed
            fired += dispatch_due(now_);
        }
        if (now_ == end) {
            break;
        }
        if (hooks_.empty()) {
            // no per-tick work: jump straight to the next event (or the end)
            SimTime next = end;
            if (!queue_.empty() && queue_.top().fire_at < next) {
                next = queue_.top().fire_at;
            }
            now_ = next;
        } else {
            now_ = now_ + 1;
        }
    }
    return fired;
}

}  // namespace mecsim::sim
