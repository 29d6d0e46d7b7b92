#ifndef PTXSIM_LINK_METRICS_HPP
#define PTXSIM_LINK_METRICS_HPP

#include <cstddef>
#include <deque>
#include <optional>
#include <stdexcept>

#include "ptxsim/geometry.hpp"

namespace ptxsim {

// Expected transmission count of a link with forward delivery ratio p_fwd
// and reverse (ack) delivery ratio p_rev.
inline double compute_etx(double p_fwd, double p_rev) {
    if (p_fwd <= 0.0 || p_fwd > 1.0) throw std::domain_error("compute_etx: p_fwd must be in (0, 1]");
    if (p_rev <= 0.0 || p_rev > 1.0) throw std::domain_error("compute_etx: p_rev must be in (0, 1]");
    return 1.0 / (p_fwd * p_rev);
}

// Predicted number of report transmissions the node can sustain over a link:
// residual energy divided by the expected energy cost per delivered report.
inline double compute_ptx(double e_res, double etx, double e_tx) {
    if (e_res < 0.0) throw std::domain_error("compute_ptx: e_res must be >= 0");
    if (etx < 1.0) throw std::domain_error("compute_ptx: etx must be >= 1");
    if (e_tx <= 0.0) throw std::domain_error("compute_ptx: e_tx must be > 0");
    return e_res / (etx * e_tx);
}

enum class ProbeOutcome { Received, Lost };
enum class LinkDirection { Forward, Reverse };

// Sliding window of probe outcomes for one link, kept per direction.
// The ratio is received/recorded over at most the last `capacity` probes.
class LinkStatsWindow {
  public:
    explicit LinkStatsWindow(std::size_t capacity = 10) : capacity_(capacity) {
        if (capacity_ == 0) throw std::invalid_argument("LinkStatsWindow: capacity must be > 0");
    }

    std::size_t capacity() const { return capacity_; }

    void record(ProbeOutcome outcome, LinkDirection dir) {
        auto& w = win(dir);
        w.push_back(outcome == ProbeOutcome::Received);
        if (w.size() > capacity_) w.pop_front();
    }

    std::size_t count(LinkDirection dir) const { return win(dir).size(); }

    // Estimated delivery ratio; 0 until the first probe is recorded.
    double ratio(LinkDirection dir) const {
        const auto& w = win(dir);
        if (w.empty()) return 0.0;
        std::size_t hits = 0;
        for (bool b : w) hits += b ? 1 : 0;
        return static_cast<double>(hits) / static_cast<double>(w.size());
    }

    // ETX from the current window estimates. Empty when either direction has
    // no successful probe yet; such a link is unusable for metric purposes.
    std::optional<double> etx() const {
        const double pf = ratio(LinkDirection::Forward);
        const double pr = ratio(LinkDirection::Reverse);
        if (pf <= 0.0 || pr <= 0.0) return std::nullopt;
        return compute_etx(pf, pr);
    }

  private:
    const std::deque<bool>& win(LinkDirection dir) const {
        return dir == LinkDirection::Forward ? fwd_ : rev_;
    }
    std::deque<bool>& win(LinkDirection dir) {
        return dir == LinkDirection::Forward ? fwd_ : rev_;
    }

    std::size_t capacity_;
    std::deque<bool> fwd_;
    std::deque<bool> rev_;
};

inline void update_link_stats(LinkStatsWindow& window, ProbeOutcome outcome, LinkDirection dir) {
    window.record(outcome, dir);
}

// One row of a node's neighbor view, as used by the election logic.
struct NeighborEntry {
    NodeId neighbor_id = 0;
    double dist = 0.0;
    double p_fwd = 0.0;
    double p_rev = 0.0;
    double etx = 0.0;
    double ptx = 0.0;
};

}  // namespace ptxsim

#endif
