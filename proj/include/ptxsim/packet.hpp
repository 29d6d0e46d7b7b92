#ifndef PTXSIM_PACKET_HPP
#define PTXSIM_PACKET_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ptxsim/cluster_state.hpp"
#include "ptxsim/geometry.hpp"

namespace ptxsim {

enum class PacketKind {
    Probe,   // periodic link-measurement broadcast
    Query,   // sink-originated interest flood
    Report,  // source data, unicast hop by hop
};

inline const char* to_string(PacketKind k) {
    switch (k) {
        case PacketKind::Probe: return "probe";
        case PacketKind::Query: return "query";
        case PacketKind::Report: return "report";
    }
    throw std::logic_error("to_string: bad PacketKind");
}

constexpr NodeId kNoNode = 0xffffffffu;

// In-simulator packet. `src` and `dst` are per-hop sender and intended next
// hop (dst == kNoNode for broadcasts); `origin`/`origin_seq` identify the
// end-to-end message.
struct Packet {
    PacketKind kind = PacketKind::Report;
    NodeId origin = kNoNode;
    std::uint32_t origin_seq = 0;
    NodeId src = kNoNode;
    NodeId dst = kNoNode;
    double bits = 0.0;
    int ttl = 0;

    // Piggybacked sender cluster state.
    ClusterState sender_state = ClusterState::Initial;
    std::optional<NodeId> sender_cluster;

    // Query payload: reporting-rate requirement plus the sink position so
    // sources can address reports geographically.
    double n_req = 0.0;
    std::optional<Position> sink_pos;

    // Report payload destination position (used by greedy forwarding).
    std::optional<Position> dst_pos;

    // Probe payload: (neighbor, delivery ratio measured from that neighbor
    // to the prober) pairs, i.e. each listed neighbor's forward ratio.
    std::vector<std::pair<NodeId, double>> probe_ratios;

    std::uint64_t flow_key() const {
        return (static_cast<std::uint64_t>(origin) << 32) | origin_seq;
    }
};

// Stamps the sender's cluster state onto an outgoing data packet. Internal
// states never transmit data; a node must resolve its contention (or be
// forced external) before this is called.
inline void piggyback_state(Packet& pkt, NodeId sender, ClusterState state,
                            std::optional<NodeId> cluster_id) {
    if (is_internal(state)) {
        throw std::logic_error("piggyback_state: internal state on a data packet");
    }
    pkt.src = sender;
    pkt.sender_state = state;
    pkt.sender_cluster = cluster_id;
}

}  // namespace ptxsim

#endif
