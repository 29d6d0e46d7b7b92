#include "ptxsim/network_graph.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>

namespace ptxsim {

NetworkGraph::NetworkGraph(std::vector<PlacedNode> nodes, double comm_range)
    : comm_range_(comm_range) {
    if (comm_range <= 0.0) throw std::invalid_argument("comm_range: must be > 0");
    for (const auto& n : nodes) {
        if (!pos_.emplace(n.id, n.pos).second) {
            throw std::invalid_argument("build_graph: duplicate node id " + std::to_string(n.id));
        }
    }
    order_.reserve(pos_.size());
    for (const auto& [id, p] : pos_) {
        order_.push_back(id);
        adj_[id];
    }
    for (std::size_t i = 0; i < order_.size(); ++i) {
        for (std::size_t j = i + 1; j < order_.size(); ++j) {
            const NodeId a = order_[i];
            const NodeId b = order_[j];
            if (distance(pos_.at(a), pos_.at(b)) <= comm_range_) {
                adj_[a].push_back(b);
                adj_[b].push_back(a);
            }
        }
    }
    for (auto& [id, nb] : adj_) std::sort(nb.begin(), nb.end());
}

const Position& NetworkGraph::position(NodeId id) const {
    auto it = pos_.find(id);
    if (it == pos_.end()) throw std::out_of_range("NetworkGraph: unknown node id " + std::to_string(id));
    return it->second;
}

const std::vector<NodeId>& NetworkGraph::neighbors(NodeId id) const {
    auto it = adj_.find(id);
    if (it == adj_.end()) throw std::out_of_range("NetworkGraph: unknown node id " + std::to_string(id));
    return it->second;
}

bool NetworkGraph::adjacent(NodeId a, NodeId b) const {
    const auto& nb = neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), b);
}

std::vector<NodeId> NetworkGraph::reachable_from(NodeId from) const {
    std::vector<NodeId> out;
    if (!has_node(from)) return out;
    std::set<NodeId> seen{from};
    std::queue<NodeId> q;
    q.push(from);
    while (!q.empty()) {
        const NodeId v = q.front();
        q.pop();
        out.push_back(v);
        for (NodeId w : neighbors(v)) {
            if (seen.insert(w).second) q.push(w);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool NetworkGraph::connected() const {
    if (order_.empty()) return true;
    return reachable_from(order_.front()).size() == order_.size();
}

NetworkGraph build_graph(const std::vector<PlacedNode>& nodes, double comm_range) {
    return NetworkGraph(nodes, comm_range);
}

}  // namespace ptxsim
