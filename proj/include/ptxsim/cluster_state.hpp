#ifndef PTXSIM_CLUSTER_STATE_HPP
#define PTXSIM_CLUSTER_STATE_HPP

#include <stdexcept>
#include <string>

namespace ptxsim {

// Passive-clustering node states. The two *Ready states are internal:
// a node holds one while it contends for the role and never advertises
// it on a data packet.
enum class ClusterState {
    Initial,           // IN: no cluster knowledge yet
    Ordinary,          // OD: plain member of a cluster
    Clusterhead,       // CH
    Gateway,           // GW: bridges clusters of the same cluster id side
    DistGateway,       // D_GW: one half of a distributed gateway pair
    ClusterheadReady,  // CH_R (internal)
    GatewayReady,      // GW_R (internal)
};

inline bool is_internal(ClusterState s) {
    return s == ClusterState::ClusterheadReady || s == ClusterState::GatewayReady;
}

inline bool is_external(ClusterState s) { return !is_internal(s); }

// Backbone members are the forwarding set of a converged cluster structure.
inline bool is_backbone(ClusterState s) {
    return s == ClusterState::Clusterhead || s == ClusterState::Gateway ||
           s == ClusterState::DistGateway;
}

inline const char* to_string(ClusterState s) {
    switch (s) {
        case ClusterState::Initial: return "IN";
        case ClusterState::Ordinary: return "OD";
        case ClusterState::Clusterhead: return "CH";
        case ClusterState::Gateway: return "GW";
        case ClusterState::DistGateway: return "DGW";
        case ClusterState::ClusterheadReady: return "CH_R";
        case ClusterState::GatewayReady: return "GW_R";
    }
    throw std::logic_error("to_string: bad ClusterState");
}

}  // namespace ptxsim

#endif
