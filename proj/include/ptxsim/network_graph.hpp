#ifndef PTXSIM_NETWORK_GRAPH_HPP
#define PTXSIM_NETWORK_GRAPH_HPP

#include <map>
#include <vector>

#include "ptxsim/geometry.hpp"

namespace ptxsim {

struct PlacedNode {
    NodeId id = 0;
    Position pos;
};

// Unit-disk graph over static node positions. Two distinct nodes are
// neighbors when their distance is <= comm_range (boundary inclusive).
class NetworkGraph {
  public:
    NetworkGraph() = default;
    NetworkGraph(std::vector<PlacedNode> nodes, double comm_range);

    double comm_range() const { return comm_range_; }
    std::size_t size() const { return order_.size(); }
    const std::vector<NodeId>& ids() const { return order_; }
    bool has_node(NodeId id) const { return pos_.count(id) != 0; }
    const Position& position(NodeId id) const;
    // Neighbor ids in ascending order.
    const std::vector<NodeId>& neighbors(NodeId id) const;
    bool adjacent(NodeId a, NodeId b) const;
    double dist(NodeId a, NodeId b) const { return distance(position(a), position(b)); }

    bool connected() const;
    // Nodes reachable from `from`, including it.
    std::vector<NodeId> reachable_from(NodeId from) const;

  private:
    double comm_range_ = 0.0;
    std::vector<NodeId> order_;
    std::map<NodeId, Position> pos_;
    std::map<NodeId, std::vector<NodeId>> adj_;
};

NetworkGraph build_graph(const std::vector<PlacedNode>& nodes, double comm_range);

}  // namespace ptxsim

#endif
