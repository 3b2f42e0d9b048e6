#pragma once

#include <cstdint>
#include <queue>
#include <vector>

#include "qlink/errors.hpp"

namespace qlink {

enum class EventKind : std::uint8_t {
    attempt_start,   // emission / round launch
    photon_arrival,  // photon(s) reach a measurement station
    swap_complete,   // communication-qubit state parked in a memory
    herald_arrival,  // classical success/failure message reaches the nodes
    discard,         // stored or local-only state dropped
    success,         // one remote entangled pair delivered
};

inline const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::attempt_start: return "attempt_start";
        case EventKind::photon_arrival: return "photon_arrival";
        case EventKind::swap_complete: return "swap_complete";
        case EventKind::herald_arrival: return "herald_arrival";
        case EventKind::discard: return "discard";
        case EventKind::success: return "success";
    }
    return "?";
}

struct Event {
    double time = 0.0;       // simulated seconds
    std::uint64_t seq = 0;   // insertion order; breaks time ties FIFO
    EventKind kind = EventKind::attempt_start;
    std::int32_t slot = -1;  // protocol-defined payload (qubit slot, attempt id, ...)
    std::int64_t tag = 0;    // protocol-defined payload (attempt epoch, counts, ...)
};

/// Min-ordered event collection keyed by (time, seq). Pop order is
/// non-decreasing in time; equal-time events come out in insertion order so
/// traces are reproducible.
class EventQueue {
  public:
    std::uint64_t push(double time, EventKind kind, std::int32_t slot = -1, std::int64_t tag = 0) {
        if (!(time >= 0.0) || !std::isfinite(time)) throw SimError("event time must be finite and >= 0");
        Event e{time, next_seq_++, kind, slot, tag};
        heap_.push(e);
        return e.seq;
    }

    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }
    const Event& peek() const { return heap_.top(); }

    Event pop() {
        Event e = heap_.top();
        heap_.pop();
        if (e.time < last_popped_) throw SimError("event queue ordering violated");
        last_popped_ = e.time;
        return e;
    }

  private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.seq > b.seq;
        }
    };
    std::priority_queue<Event, std::vector<Event>, Later> heap_;
    std::uint64_t next_seq_ = 0;
    double last_popped_ = 0.0;
};

}  // namespace qlink
