#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <vector>

namespace tunsim {

// Simulated time in milliseconds. Continuous; no tick quantization.
using SimTime = double;

struct SimOverflowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Deterministic discrete-event loop. Ties at equal timestamps are broken by
// insertion sequence, so a run is a pure function of its inputs.
class Simulator {
public:
    using Callback = std::function<void()>;

    void at(SimTime t, Callback fn);
    SimTime now() const { return now_; }

    // Processes events in (time, insertion) order until the queue drains or
    // `until` is reached. Throws SimOverflowError once more than max_events
    // have been dispatched (runaway-scenario guard).
    void run(SimTime until = -1.0, uint64_t max_events = kDefaultMaxEvents);

    uint64_t dispatched() const { return dispatched_; }

    static constexpr uint64_t kDefaultMaxEvents = 50'000'000;

private:
    struct Entry {
        SimTime at;
        uint64_t seq;
        Callback fn;
    };
    struct Later {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.at != b.at) return a.at > b.at;
            return a.seq > b.seq;
        }
    };

    std::priority_queue<Entry, std::vector<Entry>, Later> queue_;
    SimTime now_ = 0.0;
    uint64_t next_seq_ = 0;
    uint64_t dispatched_ = 0;
};

}  // namespace tunsim
