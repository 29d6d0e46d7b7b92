#ifndef PTXSIM_EVENT_QUEUE_HPP
#define PTXSIM_EVENT_QUEUE_HPP

#include <cstdint>
#include <memory>
#include <queue>
#include <vector>

#include "ptxsim/geometry.hpp"
#include "ptxsim/packet.hpp"

namespace ptxsim {

enum class EventKind {
    ProbeBroadcast,
    PacketArrival,
    ContentionDeadline,
    ReportDue,
    MetricsSample,
};

struct Event {
    double time = 0.0;
    std::uint64_t seq = 0;  // insertion order, breaks time ties
    EventKind kind = EventKind::MetricsSample;
    NodeId node = kNoNode;

    // PacketArrival payload.
    std::shared_ptr<const Packet> pkt;
    NodeId from = kNoNode;
    bool intended = false;  // addressed to `node` (vs overheard)

    // ContentionDeadline payload: stale deadlines are skipped when the
    // node's contention generation has moved on.
    std::uint64_t contention_gen = 0;
};

// Deterministic min-queue. Events pop in (time, class, key) order: packet
// deliveries and timers first by insertion sequence, then contention
// deadlines at the same instant ordered by node id, so simultaneous claims
// resolve identically on every run.
class EventQueue {
  public:
    void push(Event ev) {
        ev.seq = next_seq_++;
        heap_.push(std::move(ev));
    }

    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }
    const Event& top() const { return heap_.top(); }

    Event pop() {
        Event ev = heap_.top();
        heap_.pop();
        return ev;
    }

  private:
    struct Later {
        static int cls(const Event& e) {
            return e.kind == EventKind::ContentionDeadline ? 1 : 0;
        }
        bool operator()(const Event& a, const Event& b) const {
            if (a.time != b.time) return a.time > b.time;
            if (cls(a) != cls(b)) return cls(a) > cls(b);
            if (cls(a) == 1 && a.node != b.node) return a.node > b.node;
            return a.seq > b.seq;
        }
    };

    std::uint64_t next_seq_ = 0;
    std::priority_queue<Event, std::vector<Event>, Later> heap_;
};

}  // namespace ptxsim

#endif
