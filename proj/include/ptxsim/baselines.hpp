#ifndef PTXSIM_BASELINES_HPP
#define PTXSIM_BASELINES_HPP

#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "ptxsim/geometry.hpp"
#include "ptxsim/rng.hpp"

namespace ptxsim {

// Lowest-id clusterhead election.
NodeId lic_elect(const std::set<NodeId>& candidates);

// Highest-connectivity clusterhead election; degree ties go to the lower id.
NodeId hcc_elect(const std::map<NodeId, int>& degree_by_id);

struct HeedParams {
    double c_prob = 0.05;  // initial clusterhead fraction, in (0, 1]
    double e_ini = 0.0;    // reference (initial) energy, > 0
};

// Per-round clusterhead self-election probability, proportional to the
// node's residual energy.
double heed_ch_prob(const HeedParams& params, double e_res);

// Uniform pick among candidates, deterministic for a given rng state.
NodeId random_pc_select(const std::set<NodeId>& candidates, Rng& rng);

// One step of greedy geographic forwarding: the neighbor strictly closer to
// dest than the current node, closest first; nullopt marks a void region.
// Distance ties go to the lower id.
std::optional<NodeId> gpsr_greedy_next_hop(const Position& current,
                                           const std::vector<std::pair<NodeId, Position>>& neighbors,
                                           const Position& dest);

struct GreedyRoute {
    enum class Status { Delivered, VoidRegion };
    std::vector<NodeId> hops;  // visited node ids, source first
    Status status = Status::VoidRegion;
};

}  // namespace ptxsim

#endif
