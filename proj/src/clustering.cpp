#include "ptxsim/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace ptxsim {

PriorityResult calc_priority_detail(const std::vector<NeighborPtx>& neighbors, double n_req) {
    if (neighbors.empty()) {
        throw std::domain_error("calc_priority: empty neighbor table, node is not a candidate");
    }
    if (n_req <= 0.0) throw std::domain_error("calc_priority: n_req must be > 0");

    PriorityResult out;
    for (const auto& n : neighbors) {
        if (n.ptx < 0.0) throw std::domain_error("calc_priority: negative PTX");
        if (n.ptx >= n_req) {
            out.split.satisfying.push_back(n);
        } else {
            out.split.falling_short.push_back(n);
        }
    }

    const auto by_ptx_then_id = [](const NeighborPtx& a, const NeighborPtx& b) {
        if (a.ptx != b.ptx) return a.ptx < b.ptx;
        return a.id < b.id;
    };
    if (!out.split.satisfying.empty()) {
        const auto it = std::min_element(out.split.satisfying.begin(),
                                         out.split.satisfying.end(), by_ptx_then_id);
        out.rho = it->ptx;
        out.selected = it->id;
    } else {
        // max_element with the same ordering would prefer the higher id on
        // ties; scan explicitly so ties resolve to the lowest id.
        const NeighborPtx* best = &out.split.falling_short.front();
        for (const auto& n : out.split.falling_short) {
            if (n.ptx > best->ptx || (n.ptx == best->ptx && n.id < best->id)) best = &n;
        }
        out.rho = best->ptx;
        out.selected = best->id;
    }
    return out;
}

double calc_priority(const std::vector<NeighborPtx>& neighbors, double n_req) {
    return calc_priority_detail(neighbors, n_req).rho;
}

double backoff_base(double rho, double t_slot, double sigma) {
    if (rho <= 0.0) throw std::domain_error("backoff: rho must be > 0");
    if (t_slot <= 0.0) throw std::domain_error("backoff: t_slot must be > 0");
    if (sigma <= 0.0) throw std::domain_error("backoff: sigma must be > 0");
    return t_slot * std::floor(sigma / rho);
}

double backoff_wait(double rho, double t_slot, Rng& rng, double sigma) {
    return backoff_base(rho, t_slot, sigma) + t_slot * rng.uniform01();
}

TransitionOutcome on_receive_report(ClusterState cur_state, std::optional<NodeId> cur_cluster,
                                    ClusterState sender_state,
                                    std::optional<NodeId> sender_cluster) {
    if (is_internal(sender_state)) {
        throw std::logic_error("on_receive_report: sender advertised an internal state");
    }
    const bool sender_clustered =
        sender_state == ClusterState::Clusterhead || sender_state == ClusterState::Gateway;
    if (sender_clustered && !sender_cluster.has_value()) {
        throw std::logic_error("on_receive_report: CH/GW sender without a cluster id");
    }

    if (cur_state == ClusterState::Initial) {
        if (sender_state == ClusterState::Clusterhead) {
            return {ClusterState::GatewayReady, sender_cluster, true};
        }
        if (sender_state == ClusterState::Gateway) {
            return {ClusterState::ClusterheadReady, sender_cluster, true};
        }
    } else if (cur_state == ClusterState::Ordinary) {
        if (sender_state == ClusterState::Clusterhead && cur_cluster.has_value() &&
            sender_cluster == cur_cluster) {
            return {ClusterState::GatewayReady, cur_cluster, true};
        }
    }
    return {cur_state, cur_cluster, false};
}

ContentionReaction contention_on_packet(ContentionRole role, std::optional<NodeId> my_cluster,
                                        ClusterState sender_state,
                                        std::optional<NodeId> sender_cluster,
                                        int same_cluster_gateways_known) {
    if (is_internal(sender_state)) {
        throw std::logic_error("contention_on_packet: sender advertised an internal state");
    }

    if (role == ContentionRole::Clusterhead) {
        // A clusterhead within range means this candidate must stand down,
        // whatever id the winner claimed: heads are never neighbors.
        if (sender_state == ClusterState::Clusterhead) {
            return {ContentionReaction::Kind::LoseToOrdinary, sender_cluster};
        }
        return {ContentionReaction::Kind::KeepWaiting, std::nullopt};
    }

    // Gateway candidate.
    const bool sender_gateway =
        sender_state == ClusterState::Gateway || sender_state == ClusterState::DistGateway;
    if (!sender_gateway || !sender_cluster.has_value()) {
        return {ContentionReaction::Kind::KeepWaiting, std::nullopt};
    }
    if (sender_cluster == my_cluster) {
        if (same_cluster_gateways_known >= 2) {
            return {ContentionReaction::Kind::LoseToOrdinary, my_cluster};
        }
        return {ContentionReaction::Kind::KeepWaiting, std::nullopt};
    }
    // A gateway of a foreign cluster in range: this candidate pairs with it
    // as a distributed gateway bridging the two clusters.
    return {ContentionReaction::Kind::BecomeDistGateway, std::nullopt};
}

ClusterState run_contention(const ContentionRecord& record, NodeId /*self*/,
                            std::optional<NodeId> my_cluster,
                            const std::vector<ContentionObservation>& observed) {
    std::vector<ContentionObservation> events = observed;
    std::stable_sort(events.begin(), events.end(),
                     [](const auto& a, const auto& b) { return a.time < b.time; });
    for (const auto& ev : events) {
        if (ev.time >= record.deadline) break;
        const auto r = contention_on_packet(record.role, my_cluster, ev.sender_state,
                                            ev.sender_cluster, ev.same_cluster_gateways_known);
        switch (r.kind) {
            case ContentionReaction::Kind::LoseToOrdinary: return ClusterState::Ordinary;
            case ContentionReaction::Kind::BecomeDistGateway: return ClusterState::DistGateway;
            case ContentionReaction::Kind::KeepWaiting: break;
        }
    }
    return record.role == ContentionRole::Clusterhead ? ClusterState::Clusterhead
                                                      : ClusterState::Gateway;
}

std::vector<NodeId> check_gateway_heuristic(const ClusterCensus& census,
                                            const NetworkGraph& graph) {
    std::map<NodeId, NodeId> cluster_of;
    for (const auto& [cid, members] : census) {
        for (const auto& m : members) cluster_of[m.id] = cid;
    }

    std::vector<NodeId> violations;
    for (const auto& [cid, members] : census) {
        int gateways = 0;
        int capable = 0;
        bool foreign_contact = false;
        for (const auto& m : members) {
            if (m.state == ClusterState::Gateway || m.state == ClusterState::DistGateway) {
                ++gateways;
            }
            if (m.state != ClusterState::Clusterhead) ++capable;
            if (!foreign_contact && graph.has_node(m.id)) {
                for (NodeId w : graph.neighbors(m.id)) {
                    auto it = cluster_of.find(w);
                    if (it != cluster_of.end() && it->second != cid) {
                        foreign_contact = true;
                        break;
                    }
                }
            }
        }
        if (foreign_contact && capable >= 2 && gateways < 2) violations.push_back(cid);
    }
    return violations;
}

}  // namespace ptxsim
