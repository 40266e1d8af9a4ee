#include "tunsim/sim.hpp"

namespace tunsim {

void Simulator::at(SimTime t, Callback fn) {
    if (t < now_) t = now_;  // never schedule into the past
    queue_.push(Entry{t, next_seq_++, std::move(fn)});
}

void Simulator::run(SimTime until, uint64_t max_events) {
    while (!queue_.empty()) {
        const Entry& top = queue_.top();
        if (until >= 0.0 && top.at > until) break;
        if (dispatched_ >= max_events)
            throw SimOverflowError("event budget exhausted (runaway scenario?)");
        Callback fn = std::move(const_cast<Entry&>(top).fn);
        now_ = top.at;
        queue_.pop();
        ++dispatched_;
        fn();
    }
    if (until >= 0.0 && now_ < until) now_ = until;
}

}  // namespace tunsim
