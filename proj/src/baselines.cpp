#include "ptxsim/baselines.hpp"

#include <stdexcept>

namespace ptxsim {

NodeId lic_elect(const std::set<NodeId>& candidates) {
    if (candidates.empty()) throw std::domain_error("lic_elect: empty candidate set");
    return *candidates.begin();
}

NodeId hcc_elect(const std::map<NodeId, int>& degree_by_id) {
    if (degree_by_id.empty()) throw std::domain_error("hcc_elect: empty candidate set");
    NodeId best = degree_by_id.begin()->first;
    int best_deg = degree_by_id.begin()->second;
    for (const auto& [id, deg] : degree_by_id) {
        if (deg < 0) throw std::domain_error("hcc_elect: negative degree");
        if (deg > best_deg) {
            best = id;
            best_deg = deg;
        }
    }
    return best;
}

double heed_ch_prob(const HeedParams& params, double e_res) {
    if (params.c_prob <= 0.0 || params.c_prob > 1.0) {
        throw std::domain_error("heed_ch_prob: c_prob must be in (0, 1]");
    }
    if (params.e_ini <= 0.0) throw std::domain_error("heed_ch_prob: e_ini must be > 0");
    if (e_res < 0.0 || e_res > params.e_ini) {
        throw std::domain_error("heed_ch_prob: e_res must be in [0, e_ini]");
    }
    return params.c_prob * e_res / params.e_ini;
}

NodeId random_pc_select(const std::set<NodeId>& candidates, Rng& rng) {
    if (candidates.empty()) throw std::domain_error("random_pc_select: empty candidate set");
    auto it = candidates.begin();
    std::advance(it, static_cast<long>(rng.below(candidates.size())));
    return *it;
}

std::optional<NodeId> gpsr_greedy_next_hop(
    const Position& current, const std::vector<std::pair<NodeId, Position>>& neighbors,
    const Position& dest) {
    const double here = distance(current, dest);
    std::optional<NodeId> best;
    double best_dist = here;
    for (const auto& [id, pos] : neighbors) {
        const double d = distance(pos, dest);
        if (d < best_dist || (best && d == best_dist && id < *best)) {
            best = id;
            best_dist = d;
        }
    }
    return best;
}

}  // namespace ptxsim
