#ifndef PTXSIM_CLUSTERING_HPP
#define PTXSIM_CLUSTERING_HPP

#include <map>
#include <optional>
#include <vector>

#include "ptxsim/cluster_state.hpp"
#include "ptxsim/geometry.hpp"
#include "ptxsim/network_graph.hpp"
#include "ptxsim/rng.hpp"

namespace ptxsim {

struct NeighborPtx {
    NodeId id = 0;
    double ptx = 0.0;
};

struct PrioritySplit {
    std::vector<NeighborPtx> satisfying;     // ptx >= n_req
    std::vector<NeighborPtx> falling_short;  // ptx < n_req
};

struct PriorityResult {
    double rho = 0.0;
    NodeId selected = 0;  // neighbor whose PTX became rho
    PrioritySplit split;
};

// Contention priority of a candidate. Neighbors are split against the
// required report rate; if any link sustains it, rho is the smallest
// sustaining PTX (the weakest link that is still good enough), otherwise
// the largest PTX available. Equal PTX values resolve to the lowest id.
PriorityResult calc_priority_detail(const std::vector<NeighborPtx>& neighbors, double n_req);
double calc_priority(const std::vector<NeighborPtx>& neighbors, double n_req);

// Backoff before claiming a role: slot count floor(sigma/rho) plus a jitter
// drawn uniformly from [0, t_slot) to break ties between equal priorities.
double backoff_base(double rho, double t_slot, double sigma = 1.0);
double backoff_wait(double rho, double t_slot, Rng& rng, double sigma = 1.0);

// Receiver-side state transition for one overheard data packet.
struct TransitionOutcome {
    ClusterState new_state = ClusterState::Initial;
    std::optional<NodeId> new_cluster;
    bool enter_contention = false;
};

TransitionOutcome on_receive_report(ClusterState cur_state, std::optional<NodeId> cur_cluster,
                                    ClusterState sender_state,
                                    std::optional<NodeId> sender_cluster);

enum class ContentionRole { Clusterhead, Gateway };

struct ContentionRecord {
    ContentionRole role = ContentionRole::Gateway;
    double rho = 0.0;
    double t_slot = 0.0;
    double wait = 0.0;      // backoff duration
    double deadline = 0.0;  // absolute time the claim fires
};

// Reaction of a waiting candidate to one overheard declaration.
struct ContentionReaction {
    enum class Kind { KeepWaiting, LoseToOrdinary, BecomeDistGateway };
    Kind kind = Kind::KeepWaiting;
    std::optional<NodeId> adopt_cluster;  // set when a losing CH_R joins the winner
};

// same_cluster_gateways_known counts distinct GW/D_GW nodes of the
// candidate's own cluster the candidate knows of, including the sender of
// the packet being reacted to.
ContentionReaction contention_on_packet(ContentionRole role, std::optional<NodeId> my_cluster,
                                        ClusterState sender_state,
                                        std::optional<NodeId> sender_cluster,
                                        int same_cluster_gateways_known);

// Scripted contention driver: feeds declarations heard before the deadline
// through the reaction rules and resolves the deadline claim. Used by tests;
// the simulator applies the same rules event by event.
struct ContentionObservation {
    double time = 0.0;
    ClusterState sender_state = ClusterState::Initial;
    std::optional<NodeId> sender_cluster;
    int same_cluster_gateways_known = 0;
};

ClusterState run_contention(const ContentionRecord& record, NodeId self,
                            std::optional<NodeId> my_cluster,
                            const std::vector<ContentionObservation>& observed);

// Cluster census as sampled from the ground-truth node states.
struct ClusterMember {
    NodeId id = 0;
    ClusterState state = ClusterState::Initial;
};
using ClusterCensus = std::map<NodeId, std::vector<ClusterMember>>;

// Clusters that touch a foreign cluster, could host two gateways, and have
// fewer than two nodes in GW or D_GW state. Clusters without inter-cluster
// links, or with fewer than two non-head members, are excluded.
std::vector<NodeId> check_gateway_heuristic(const ClusterCensus& census,
                                            const NetworkGraph& graph);

}  // namespace ptxsim

#endif
