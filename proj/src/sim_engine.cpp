#include "ptxsim/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "ptxsim/baselines.hpp"
#include "ptxsim/radio.hpp"

namespace ptxsim {

namespace {

ScenarioConfig validated(ScenarioConfig cfg) {
    cfg.validate();
    return cfg;
}

}  // namespace

Simulator::Simulator(ScenarioConfig cfg)
    : cfg_(validated(std::move(cfg))),
      placement_(make_placement(cfg_)),
      graph_(build_graph(placement_, cfg_.comm_range)),
      sim_rng_(Rng::substream(cfg_.seed, 2)) {
    nodes_.reserve(cfg_.node_count);
    for (const auto& pn : placement_) {
        Node n;
        n.id = pn.id;
        n.pos = pn.pos;
        nodes_.push_back(std::move(n));
    }
    traffic_stop_ = cfg_.duration - cfg_.traffic_tail;
    draw_link_model();
    check_reachability_warning();
}

std::vector<PlacedNode> Simulator::make_placement(const ScenarioConfig& cfg) {
    Rng rng = Rng::substream(cfg.seed, 0);
    std::vector<PlacedNode> out;
    out.reserve(cfg.node_count);
    if (cfg.placement == Placement::UniformRandom) {
        for (NodeId i = 0; i < cfg.node_count; ++i) {
            Position p{rng.uniform(0.0, cfg.field_width), rng.uniform(0.0, cfg.field_height)};
            out.push_back({i, p});
        }
    } else {
        const auto n = cfg.node_count;
        const auto cols = static_cast<std::uint32_t>(std::ceil(std::sqrt(static_cast<double>(n))));
        const auto rows = (n + cols - 1) / cols;
        for (NodeId i = 0; i < n; ++i) {
            const std::uint32_t c = i % cols;
            const std::uint32_t r = i / cols;
            out.push_back({i, Position{(c + 0.5) * cfg.field_width / cols,
                                       (r + 0.5) * cfg.field_height / rows}});
        }
    }
    if (cfg.sink_at_center && !out.empty()) {
        out[0].pos = Position{cfg.field_width / 2.0, cfg.field_height / 2.0};
    }
    return out;
}

void Simulator::draw_link_model() {
    // True per-direction delivery probabilities, drawn once per directed
    // edge from a stream that depends only on the seed, so runs that differ
    // in strategy share the exact same radio environment.
    Rng rng = Rng::substream(cfg_.seed, 1);
    const std::size_t n = cfg_.node_count;
    link_p_.assign(n * n, 0.0);
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j : graph_.neighbors(i)) {
            link_p_[i * n + j] = rng.uniform(cfg_.link_p_true.min, cfg_.link_p_true.max);
        }
    }
    if (cfg_.link_p_true.min >= cfg_.link_p_true.max) {
        // uniform(a, a) returns a, but keep exact fixed values exact.
        for (double& p : link_p_) {
            if (p != 0.0) p = cfg_.link_p_true.min;
        }
    }
}

double Simulator::p_true(NodeId from, NodeId to) const {
    return link_p_[static_cast<std::size_t>(from) * cfg_.node_count + to];
}

void Simulator::check_reachability_warning() {
    if (!graph_.connected()) {
        warnings_.push_back("network graph is disconnected; some nodes can never be reached");
    }
    const auto reach = graph_.reachable_from(sink_id());
    std::uint32_t region_total = 0;
    std::uint32_t region_cut = 0;
    for (const auto& pn : placement_) {
        if (pn.id == sink_id()) continue;
        if (cfg_.region && !cfg_.region->contains(pn.pos)) continue;
        ++region_total;
        if (!std::binary_search(reach.begin(), reach.end(), pn.id)) ++region_cut;
    }
    if (region_cut > 0) {
        std::ostringstream os;
        os << region_cut << " of " << region_total
           << " source-region nodes are unreachable from the sink";
        warnings_.push_back(os.str());
    }
    if (traffic_stop_ <= cfg_.query_time + cfg_.source_settle) {
        warnings_.push_back("traffic window is empty: sources stop before their first report");
    }
}

RunResult Simulator::run() {
    for (auto& n : nodes_) {
        const double phase = sim_rng_.uniform(0.0, cfg_.probe_period);
        queue_.push({.time = phase, .kind = EventKind::ProbeBroadcast, .node = n.id});
    }
    queue_.push({.time = 0.0, .kind = EventKind::MetricsSample, .node = kNoNode});
    // The sink's query origination rides the traffic timer kind.
    queue_.push({.time = cfg_.query_time, .kind = EventKind::ReportDue, .node = sink_id()});

    while (!queue_.empty() && !ended_early_) {
        Event ev = queue_.pop();
        if (ev.time > cfg_.duration + 1e-12) break;
        now_ = ev.time;
        switch (ev.kind) {
            case EventKind::ProbeBroadcast: handle_probe(ev.node); break;
            case EventKind::PacketArrival: handle_arrival(ev); break;
            case EventKind::ContentionDeadline: handle_deadline(ev.node, ev.contention_gen); break;
            case EventKind::ReportDue: handle_report_due(ev.node); break;
            case EventKind::MetricsSample: handle_sample(); break;
        }
    }

    RunResult res;
    res.series = series_;
    res.totals = totals_;
    res.placement = placement_;
    res.warnings = warnings_;
    res.ended_early = ended_early_;
    res.end_time_s = ended_early_ ? now_ : cfg_.duration;
    res.first_death_s = first_death_;
    res.network_lifetime_s = first_death_ ? *first_death_ : res.end_time_s;
    if (!series_.empty()) res.final_delivery_ratio = series_.back().delivery_ratio;
    for (const auto& row : series_) {
        if (row.reports_sent > 0 && row.delivery_ratio < 0.9) {
            res.time_to_ratio_below_090_s = row.time_s;
            break;
        }
    }
    const double ledger = totals_.tx_energy_j + totals_.rx_energy_j;
    if (totals_.reports_delivered > 0) {
        res.energy_per_delivered_j = ledger / static_cast<double>(totals_.reports_delivered);
    }
    double consumed = 0.0;
    for (const auto& n : nodes_) consumed += n.e_consumed;
    res.conservation_residual_rel = ledger > 0.0 ? std::abs(consumed - ledger) / ledger
                                                 : std::abs(consumed - ledger);
    res.final_nodes.reserve(nodes_.size());
    for (const auto& n : nodes_) {
        res.final_nodes.push_back({n.id, n.pos, std::max(0.0, e_res(n)), n.alive, n.state,
                                   n.cluster, n.dgw_peer, n.parent, n.got_query, n.is_source});
    }
    res.routes.reserve(routes_.size());
    for (auto& [key, tr] : routes_) res.routes.push_back(tr);
    return res;
}

// ---------------------------------------------------------------- radio ----

bool Simulator::charge_tx(Node& n, double bits, double dist) {
    const double cost = tx_energy(bits, dist, cfg_.radio);
    const double avail = e_res(n);
    if (avail >= cost) {
        n.e_consumed += cost;
        totals_.tx_energy_j += cost;
        return true;
    }
    n.e_consumed = cfg_.e_ini;
    totals_.tx_energy_j += avail;
    kill(n);
    return false;
}

bool Simulator::charge_rx(Node& n, double bits) {
    const double cost = rx_energy(bits, cfg_.radio);
    const double avail = e_res(n);
    if (avail >= cost) {
        n.e_consumed += cost;
        totals_.rx_energy_j += cost;
        return true;
    }
    n.e_consumed = cfg_.e_ini;
    totals_.rx_energy_j += avail;
    kill(n);
    return false;
}

void Simulator::kill(Node& n) {
    if (!n.alive) return;
    n.alive = false;
    if (!first_death_) first_death_ = now_;
}

void Simulator::broadcast_packet(Node& sender, const Packet& pkt) {
    if (!charge_tx(sender, pkt.bits, cfg_.comm_range)) return;
    if (pkt.kind == PacketKind::Probe) {
        ++totals_.probes_sent;
    } else if (pkt.kind == PacketKind::Query) {
        ++totals_.query_tx;
    }
    std::shared_ptr<const Packet> sp;
    if (pkt.kind != PacketKind::Probe) sp = std::make_shared<const Packet>(pkt);
    for (NodeId r : graph_.neighbors(sender.id)) {
        Node& rn = nodes_[r];
        if (!rn.alive) continue;
        const bool hit = sim_rng_.bernoulli(p_true(sender.id, r));
        if (pkt.kind == PacketKind::Probe) {
            // Probes are measured at reception; a miss is visible to the
            // receiver later only through its sequence gap, which the window
            // models directly.
            if (hit) {
                if (charge_rx(rn, pkt.bits)) process_probe(rn, sender, pkt);
            } else {
                auto it = rn.table.find(sender.id);
                if (it != rn.table.end()) {
                    it->second.window.record(ProbeOutcome::Lost, LinkDirection::Reverse);
                }
            }
        } else if (hit && charge_rx(rn, pkt.bits)) {
            queue_.push({.time = now_ + cfg_.prop_delay,
                         .kind = EventKind::PacketArrival,
                         .node = r,
                         .pkt = sp,
                         .from = sender.id,
                         .intended = false});
        }
    }
}

bool Simulator::unicast_packet(Node& sender, Packet pkt, NodeId dst) {
    const double d = graph_.dist(sender.id, dst);
    const auto sp = std::make_shared<const Packet>(pkt);
    ++totals_.report_tx;
    std::set<NodeId> overheard;
    bool acked = false;
    for (int attempt = 0; attempt < cfg_.max_tx_attempts && !acked; ++attempt) {
        if (!charge_tx(sender, pkt.bits, d)) return false;
        ++totals_.report_attempts;
        for (NodeId r : graph_.neighbors(sender.id)) {
            Node& rn = nodes_[r];
            if (!rn.alive) continue;
            if (!sim_rng_.bernoulli(p_true(sender.id, r))) continue;
            if (!charge_rx(rn, pkt.bits)) continue;
            if (r == dst) {
                // Delivery needs the implicit ack back; a data hit without
                // the ack is retransmitted and the stale copy discarded.
                if (sim_rng_.bernoulli(p_true(dst, sender.id))) {
                    acked = true;
                    queue_.push({.time = now_ + cfg_.prop_delay,
                                 .kind = EventKind::PacketArrival,
                                 .node = r,
                                 .pkt = sp,
                                 .from = sender.id,
                                 .intended = true});
                }
            } else if (overheard.insert(r).second) {
                queue_.push({.time = now_ + cfg_.prop_delay,
                             .kind = EventKind::PacketArrival,
                             .node = r,
                             .pkt = sp,
                             .from = sender.id,
                             .intended = false});
            }
        }
    }
    return acked;
}

// --------------------------------------------------------------- probes ----

Packet Simulator::build_probe(Node& n) const {
    Packet p;
    p.kind = PacketKind::Probe;
    p.origin = n.id;
    p.src = n.id;
    p.dst = kNoNode;
    p.bits = cfg_.probe_bits;
    // Probes report raw telemetry, internal states included.
    p.sender_state = n.state;
    p.sender_cluster = n.cluster;
    p.probe_ratios.reserve(n.table.size());
    for (const auto& [id, rec] : n.table) {
        p.probe_ratios.emplace_back(id, rec.window.ratio(LinkDirection::Reverse));
    }
    return p;
}

void Simulator::process_probe(Node& receiver, const Node& sender, const Packet& pkt) {
    auto [it, created] = receiver.table.try_emplace(sender.id, NeighborRecord(cfg_.etx_window));
    NeighborRecord& rec = it->second;
    if (created) {
        rec.pos = sender.pos;
        rec.dist = distance(receiver.pos, sender.pos);
    }
    rec.last_heard = now_;
    rec.state = pkt.sender_state;
    rec.cluster = pkt.sender_cluster;
    rec.window.record(ProbeOutcome::Received, LinkDirection::Reverse);
    for (const auto& [id, ratio] : pkt.probe_ratios) {
        if (id == receiver.id) {
            rec.p_fwd = ratio;
            break;
        }
    }
    consistency_checks(receiver);
}

void Simulator::handle_probe(NodeId id) {
    Node& n = nodes_[id];
    if (!n.alive) return;
    broadcast_packet(n, build_probe(n));
    if (n.alive) {
        queue_.push({.time = now_ + cfg_.probe_period, .kind = EventKind::ProbeBroadcast, .node = id});
    }
}

// -------------------------------------------------------------- arrivals ----

void Simulator::note_sender(Node& n, NodeId from, ClusterState st, std::optional<NodeId> cluster) {
    if (from == kNoNode || from == n.id) return;
    auto [it, created] = n.table.try_emplace(from, NeighborRecord(cfg_.etx_window));
    NeighborRecord& rec = it->second;
    if (created) {
        rec.pos = graph_.position(from);
        rec.dist = graph_.dist(n.id, from);
    }
    rec.last_heard = now_;
    rec.state = st;
    rec.cluster = cluster;
}

void Simulator::handle_arrival(const Event& ev) {
    Node& n = nodes_[ev.node];
    if (!n.alive || !ev.pkt) return;
    const Packet& pkt = *ev.pkt;
    note_sender(n, ev.from, pkt.sender_state, pkt.sender_cluster);
    consistency_checks(n);

    if (pkt.kind == PacketKind::Query) {
        const bool first = n.seen_flows.insert(pkt.flow_key()).second;
        if (first) {
            n.got_query = true;
            if (!n.parent && n.id != sink_id()) n.parent = ev.from;
            n.sink_pos = pkt.sink_pos;
            n.n_req = pkt.n_req > 0.0 ? pkt.n_req : cfg_.n_req;
            const bool in_region = !cfg_.region || cfg_.region->contains(n.pos);
            if (n.id != sink_id() && in_region) {
                n.is_source = true;
                const double start =
                    now_ + cfg_.source_settle + sim_rng_.uniform01() / n.n_req;
                queue_.push({.time = start, .kind = EventKind::ReportDue, .node = n.id});
            }
        }
        state_machine(n, pkt);
        if (!n.query_forwarded && !n.query_forward_scheduled) {
            n.query_forward_scheduled = true;
            n.pending.push_back({ev.pkt, false});
            if (!n.cont.active || n.cont.claim_ready) {
                if (n.cont.claim_ready) force_external(n);
                const double delay =
                    is_backbone(n.state)
                        ? sim_rng_.uniform01() * 0.05 * cfg_.t_slot
                        : cfg_.flood_filler_slots * cfg_.t_slot + sim_rng_.uniform01() * cfg_.t_slot;
                queue_.push({.time = now_ + delay,
                             .kind = EventKind::ContentionDeadline,
                             .node = n.id,
                             .contention_gen = n.cont.gen});
            }
            // Otherwise the pending copy flushes when the contention resolves.
        }
        return;
    }

    // Report: every copy feeds the state machine, intended copies are relayed.
    state_machine(n, pkt);
    if (!ev.intended) return;
    if (n.id == sink_id()) {
        if (delivered_flows_.insert(pkt.flow_key()).second) {
            ++totals_.reports_delivered;
            if (auto* tr = trace_of(pkt)) {
                tr->hops.push_back(n.id);
                tr->status = RouteTrace::Status::Delivered;
            }
        }
        return;
    }
    if (auto* tr = trace_of(pkt)) tr->hops.push_back(n.id);
    if (is_internal(n.state) && !n.cont.claim_ready) {
        n.pending.push_back({ev.pkt, false, ev.from});
        return;
    }
    force_external(n);
    forward_report(n, pkt, ev.from);
}

// ------------------------------------------------------- cluster protocol ----

bool Simulator::believed_alive(const NeighborRecord& rec) const {
    return now_ - rec.last_heard <= cfg_.stale_after_periods * cfg_.probe_period;
}

int Simulator::known_gateways(const Node& n, std::optional<NodeId> cluster) const {
    if (!cluster) return 0;
    int count = 0;
    for (const auto& [id, rec] : n.table) {
        if (!believed_alive(rec)) continue;
        if (rec.state != ClusterState::Gateway && rec.state != ClusterState::DistGateway) continue;
        if (rec.cluster == cluster) ++count;
    }
    return count;
}

std::vector<NeighborPtx> Simulator::usable_ptx_table(const Node& n) const {
    std::vector<NeighborPtx> out;
    for (const auto& [id, rec] : n.table) {
        if (!believed_alive(rec)) continue;
        if (rec.p_fwd <= 0.0) continue;
        const double p_rev = rec.window.ratio(LinkDirection::Reverse);
        if (p_rev <= 0.0) continue;
        const double etx = compute_etx(rec.p_fwd, p_rev);
        const double e_tx = tx_energy(cfg_.radio.msg_bits, rec.dist, cfg_.radio);
        out.push_back({id, compute_ptx(std::max(0.0, e_res(n)), etx, e_tx)});
    }
    return out;
}

double Simulator::strategy_wait(Node& n, ContentionRole role) {
    const double ts = cfg_.t_slot;
    switch (cfg_.strategy) {
        case Strategy::LinkPtx: {
            const auto tbl = usable_ptx_table(n);
            const double n_req = n.n_req > 0.0 ? n.n_req : cfg_.n_req;
            const double rho = calc_priority(tbl, n_req);
            return backoff_wait(rho, ts, sim_rng_, cfg_.sigma);
        }
        case Strategy::RandomPc:
            return sim_rng_.uniform01() * ts;
        case Strategy::Lic:
            if (role == ContentionRole::Gateway) return sim_rng_.uniform01() * ts;
            return ts * (n.id + 1.0) / (cfg_.node_count + 1.0);
        case Strategy::Hcc: {
            if (role == ContentionRole::Gateway) return sim_rng_.uniform01() * ts;
            double deg = 0.0;
            for (const auto& [id, rec] : n.table) {
                if (believed_alive(rec)) deg += 1.0;
            }
            const double nn = cfg_.node_count;
            return ts * (1.0 - deg / nn) + ts * (n.id + 1.0) / ((nn + 1.0) * (nn + 1.0));
        }
        case Strategy::Heed: {
            if (role == ContentionRole::Gateway) return sim_rng_.uniform01() * ts;
            const HeedParams hp{cfg_.heed_c_prob, cfg_.e_ini};
            const double p = heed_ch_prob(hp, std::max(0.0, e_res(n)));
            int round = cfg_.heed_rounds;
            for (int i = 0; i < cfg_.heed_rounds; ++i) {
                if (sim_rng_.bernoulli(p)) {
                    round = i;
                    break;
                }
            }
            return ts * round + sim_rng_.uniform01() * ts;
        }
        case Strategy::Gpsr: break;
    }
    throw std::logic_error("strategy_wait: strategy does not contend");
}

void Simulator::state_machine(Node& n, const Packet& pkt) {
    if (n.id == sink_id()) return;  // the sink anchors its cluster and never moves
    if (is_internal(pkt.sender_state)) {
        throw std::logic_error("state_machine: data packet from an internal state");
    }
    if (n.cont.active) {
        const int quota = known_gateways(n, n.cluster);
        const auto reaction = contention_on_packet(n.cont.role, n.cluster, pkt.sender_state,
                                                   pkt.sender_cluster, quota);
        switch (reaction.kind) {
            case ContentionReaction::Kind::KeepWaiting: break;
            case ContentionReaction::Kind::LoseToOrdinary:
                resolve_loss(n, reaction.adopt_cluster);
                break;
            case ContentionReaction::Kind::BecomeDistGateway:
                resolve_dist_gateway(n, pkt.src);
                break;
        }
        return;
    }
    const auto out = on_receive_report(n.state, n.cluster, pkt.sender_state, pkt.sender_cluster);
    if (out.enter_contention) try_enter_contention(n, out, pkt);
}

void Simulator::try_enter_contention(Node& n, const TransitionOutcome& out, const Packet&) {
    if (cfg_.strategy == Strategy::Gpsr) return;  // no clustering at all
    const auto role = out.new_state == ClusterState::ClusterheadReady ? ContentionRole::Clusterhead
                                                                      : ContentionRole::Gateway;
    // A node with no usable links is not a candidate and stays put.
    if (cfg_.strategy == Strategy::LinkPtx) {
        if (usable_ptx_table(n).empty()) return;
    } else {
        bool any = false;
        for (const auto& [id, rec] : n.table) {
            if (believed_alive(rec)) {
                any = true;
                break;
            }
        }
        if (!any) return;
    }
    // Claims that existing knowledge already settles resolve on the spot.
    if (role == ContentionRole::Clusterhead) {
        const NeighborRecord* best = nullptr;
        NodeId best_id = kNoNode;
        for (const auto& [id, rec] : n.table) {
            if (!believed_alive(rec) || rec.state != ClusterState::Clusterhead) continue;
            if (!best || rec.dist < best->dist || (rec.dist == best->dist && id < best_id)) {
                best = &rec;
                best_id = id;
            }
        }
        if (best) {
            n.state = ClusterState::Ordinary;
            n.cluster = best->cluster ? best->cluster : std::optional<NodeId>(best_id);
            return;
        }
    } else if (known_gateways(n, out.new_cluster) >= 2) {
        n.state = ClusterState::Ordinary;
        n.cluster = out.new_cluster;
        return;
    }
    n.state = out.new_state;
    n.cluster = out.new_cluster;
    n.cont.active = true;
    n.cont.claim_ready = false;
    n.cont.role = role;
    n.cont.deadline = now_ + strategy_wait(n, role);
    ++n.cont.gen;
    queue_.push({.time = n.cont.deadline,
                 .kind = EventKind::ContentionDeadline,
                 .node = n.id,
                 .contention_gen = n.cont.gen});
}

void Simulator::commit_claim(Node& n) {
    if (n.cont.role == ContentionRole::Clusterhead) {
        n.state = ClusterState::Clusterhead;
        n.cluster = n.id;
    } else {
        n.state = ClusterState::Gateway;
    }
    n.dgw_peer.reset();
    n.cont.active = false;
    n.cont.claim_ready = false;
    ++n.cont.gen;
}

void Simulator::resolve_loss(Node& n, std::optional<NodeId> adopt) {
    n.state = ClusterState::Ordinary;
    if (adopt) n.cluster = adopt;
    n.cont.active = false;
    n.cont.claim_ready = false;
    ++n.cont.gen;
    flush_pending(n, /*via_timer=*/false);
}

void Simulator::resolve_dist_gateway(Node& n, NodeId peer) {
    n.state = ClusterState::DistGateway;
    n.dgw_peer = peer;
    n.cont.active = false;
    n.cont.claim_ready = false;
    ++n.cont.gen;
    flush_pending(n, /*via_timer=*/false);
}

void Simulator::force_external(Node& n) {
    if (is_internal(n.state)) {
        if (!n.cont.active || !n.cont.claim_ready) {
            throw std::logic_error("force_external: unresolved contention");
        }
        commit_claim(n);
        return;
    }
    if (n.state != ClusterState::Initial) return;
    // A fresh node about to carry traffic claims the role its own knowledge
    // supports: join a known head, or start a cluster where none is known.
    const NeighborRecord* best = nullptr;
    NodeId best_id = kNoNode;
    bool any_structure = false;
    for (const auto& [id, rec] : n.table) {
        if (!believed_alive(rec)) continue;
        if (rec.cluster || rec.state != ClusterState::Initial) any_structure = true;
        if (rec.state != ClusterState::Clusterhead) continue;
        if (!best || rec.dist < best->dist || (rec.dist == best->dist && id < best_id)) {
            best = &rec;
            best_id = id;
        }
    }
    if (best) {
        n.state = ClusterState::Ordinary;
        n.cluster = best->cluster ? best->cluster : std::optional<NodeId>(best_id);
    } else if (!any_structure && cfg_.strategy != Strategy::Gpsr) {
        n.state = ClusterState::Clusterhead;
        n.cluster = n.id;
    }
    // Otherwise clusters exist nearby but no head is in range: stay plain.
}

void Simulator::consistency_checks(Node& n) {
    if (!n.alive || n.id == sink_id()) return;
    if (n.cont.active && n.cont.role == ContentionRole::Clusterhead) {
        const NeighborRecord* best = nullptr;
        NodeId best_id = kNoNode;
        for (const auto& [id, rec] : n.table) {
            if (!believed_alive(rec) || rec.state != ClusterState::Clusterhead) continue;
            if (!best || rec.dist < best->dist || (rec.dist == best->dist && id < best_id)) {
                best = &rec;
                best_id = id;
            }
        }
        if (best) {
            resolve_loss(n, best->cluster ? best->cluster : std::optional<NodeId>(best_id));
        }
    }
    if (n.cont.active && n.cont.role == ContentionRole::Gateway &&
        known_gateways(n, n.cluster) >= 2) {
        resolve_loss(n, std::nullopt);
    }
    if (n.state == ClusterState::Clusterhead) {
        // Two heads in range heal deterministically: the lower id stands.
        for (const auto& [id, rec] : n.table) {
            if (id >= n.id) break;
            if (!believed_alive(rec) || rec.state != ClusterState::Clusterhead) continue;
            n.state = ClusterState::Ordinary;
            n.cluster = rec.cluster ? rec.cluster : std::optional<NodeId>(id);
            break;
        }
    }
    if (n.state == ClusterState::Ordinary && n.cluster) {
        // A member whose head is gone starts over.
        const auto it = n.table.find(*n.cluster);
        const bool anchored = it != n.table.end() && believed_alive(it->second) &&
                              it->second.state == ClusterState::Clusterhead;
        if (!anchored) {
            n.state = ClusterState::Initial;
            n.cluster.reset();
        }
    }
}

void Simulator::handle_deadline(NodeId id, std::uint64_t gen) {
    Node& n = nodes_[id];
    if (!n.alive || gen != n.cont.gen) return;
    if (n.cont.active) {
        if (!n.pending.empty()) {
            commit_claim(n);
            flush_pending(n, /*via_timer=*/true);
        } else if (n.cont.role == ContentionRole::Gateway) {
            // Nothing to say, but the cluster still gains its gateway.
            commit_claim(n);
        } else {
            // A silent head claim would be invisible to its neighbors; it
            // rides the next transmission instead.
            n.cont.claim_ready = true;
        }
        return;
    }
    flush_pending(n, /*via_timer=*/true);
}

void Simulator::flush_pending(Node& n, bool via_timer) {
    if (n.pending.empty()) return;
    auto items = std::move(n.pending);
    n.pending.clear();
    for (auto& item : items) {
        if (!n.alive) {
            if (item.pkt->kind == PacketKind::Report) {
                ++totals_.drops_dead;
                trace_status(*item.pkt, RouteTrace::Status::SenderDied);
            }
            continue;
        }
        if (item.pkt->kind == PacketKind::Query) {
            if (n.query_forwarded) continue;
            if (!via_timer && !is_backbone(n.state)) {
                // A losing candidate rebroadcasts at the filler pace instead
                // of piling onto the winner's declaration.
                n.pending.push_back(item);
                const double delay = cfg_.flood_filler_slots * cfg_.t_slot +
                                     sim_rng_.uniform01() * cfg_.t_slot;
                queue_.push({.time = now_ + delay,
                             .kind = EventKind::ContentionDeadline,
                             .node = n.id,
                             .contention_gen = n.cont.gen});
                continue;
            }
            do_query_broadcast(n);
        } else {
            force_external(n);
            if (item.own) {
                send_report(n, *item.pkt);
            } else {
                forward_report(n, *item.pkt, item.from);
            }
        }
    }
}

// -------------------------------------------------------------- traffic ----

void Simulator::handle_report_due(NodeId id) {
    if (id == sink_id()) {
        inject_query();
        return;
    }
    originate_report(nodes_[id]);
}

void Simulator::inject_query() {
    if (query_injected_) return;
    query_injected_ = true;
    Node& sink = nodes_[sink_id()];
    if (!sink.alive) return;
    sink.got_query = true;
    sink.query_forwarded = true;
    sink.sink_pos = sink.pos;
    sink.n_req = cfg_.n_req;
    if (cfg_.strategy != Strategy::Gpsr) {
        sink.state = ClusterState::Clusterhead;
        sink.cluster = sink.id;
    }
    Packet q;
    q.kind = PacketKind::Query;
    q.origin = sink.id;
    q.origin_seq = 0;
    q.dst = kNoNode;
    q.bits = cfg_.query_bits;
    q.ttl = static_cast<int>(cfg_.node_count);
    q.n_req = cfg_.n_req;
    q.sink_pos = sink.pos;
    sink.seen_flows.insert(q.flow_key());
    piggyback_state(q, sink.id, sink.state, sink.cluster);
    broadcast_packet(sink, q);
}

void Simulator::do_query_broadcast(Node& n) {
    // Any external state may carry the flood; plain nodes fill coverage
    // holes the backbone leaves.
    Packet q;
    q.kind = PacketKind::Query;
    q.origin = sink_id();
    q.origin_seq = 0;
    q.dst = kNoNode;
    q.bits = cfg_.query_bits;
    q.ttl = static_cast<int>(cfg_.node_count);
    q.n_req = n.n_req > 0.0 ? n.n_req : cfg_.n_req;
    q.sink_pos = n.sink_pos;
    piggyback_state(q, n.id, n.state, n.cluster);
    n.query_forwarded = true;
    broadcast_packet(n, q);
}

void Simulator::originate_report(Node& n) {
    if (!n.alive || !n.is_source) return;
    if (now_ > traffic_stop_ + 1e-12) return;
    Packet pkt;
    pkt.kind = PacketKind::Report;
    pkt.origin = n.id;
    pkt.origin_seq = n.next_report_seq++;
    pkt.bits = cfg_.radio.msg_bits;
    pkt.ttl = static_cast<int>(cfg_.node_count);
    pkt.dst_pos = n.sink_pos;
    if (cfg_.log_routes) {
        routes_[pkt.flow_key()] = {pkt.origin, pkt.origin_seq, {n.id},
                                   RouteTrace::Status::InFlight};
    }
    if (is_internal(n.state) && !n.cont.claim_ready) {
        n.pending.push_back({std::make_shared<const Packet>(pkt), true});
    } else {
        force_external(n);
        send_report(n, pkt);
    }
    queue_.push({.time = now_ + 1.0 / n.n_req, .kind = EventKind::ReportDue, .node = n.id});
}

void Simulator::send_report(Node& n, const Packet& pkt) {
    ++totals_.reports_sent;
    n.relayed_flows.insert(pkt.flow_key());
    Packet out = pkt;
    route_and_send(n, out, kNoNode, /*revisit=*/false);
}

void Simulator::forward_report(Node& n, const Packet& pkt, NodeId from) {
    Packet out = pkt;
    out.ttl -= 1;
    if (out.ttl <= 0) {
        ++totals_.drops_ttl;
        trace_status(pkt, RouteTrace::Status::TtlExpired);
        return;
    }
    // A packet coming back marks the previous choice as a dead end; it is
    // rerouted rather than dropped, with the hop budget bounding any cycle.
    const bool revisit = !n.relayed_flows.insert(out.flow_key()).second;
    route_and_send(n, out, from, revisit);
}

void Simulator::route_and_send(Node& n, Packet& pkt, NodeId avoid, bool revisit) {
    const auto give_up = [&](RouteTrace::Status st) {
        switch (st) {
            case RouteTrace::Status::VoidRegion: ++totals_.drops_void; break;
            case RouteTrace::Status::NoRoute: ++totals_.drops_no_route; break;
            case RouteTrace::Status::RetryFail: ++totals_.drops_retry; break;
            case RouteTrace::Status::LoopDropped: ++totals_.drops_loop; break;
            case RouteTrace::Status::SenderDied: ++totals_.drops_dead; break;
            default: break;
        }
        trace_status(pkt, st);
    };
    std::vector<NodeId> exclude;
    if (avoid != kNoNode) exclude.push_back(avoid);
    const auto next = pick_next_hop(n, pkt, exclude);
    if (!next) {
        give_up(revisit                            ? RouteTrace::Status::LoopDropped
                : cfg_.strategy == Strategy::Gpsr ? RouteTrace::Status::VoidRegion
                                                   : RouteTrace::Status::NoRoute);
        return;
    }
    piggyback_state(pkt, n.id, n.state, n.cluster);
    pkt.dst = *next;
    if (unicast_packet(n, pkt, *next)) {
        if (cfg_.strategy != Strategy::Gpsr) n.parent = *next;
        return;
    }
    if (!n.alive) {
        give_up(RouteTrace::Status::SenderDied);
        return;
    }
    if (n.parent == *next) n.parent.reset();
    if (cfg_.strategy == Strategy::Gpsr) {
        give_up(RouteTrace::Status::RetryFail);
        return;
    }
    // One detour attempt past the failed hop, then give up.
    exclude.push_back(*next);
    const auto alt = pick_next_hop(n, pkt, exclude);
    if (!alt) {
        give_up(RouteTrace::Status::RetryFail);
        return;
    }
    pkt.dst = *alt;
    if (unicast_packet(n, pkt, *alt)) {
        n.parent = *alt;
        return;
    }
    give_up(n.alive ? RouteTrace::Status::RetryFail : RouteTrace::Status::SenderDied);
}

std::optional<NodeId> Simulator::pick_next_hop(Node& n, const Packet& pkt,
                                               const std::vector<NodeId>& exclude) {
    // Relays forward on the coordinates carried in the packet, so a report
    // can cross nodes the query flood has not reached yet.
    const std::optional<Position> goal = pkt.dst_pos ? pkt.dst_pos : n.sink_pos;
    if (!goal) return std::nullopt;
    const auto excluded = [&](NodeId id) {
        return std::find(exclude.begin(), exclude.end(), id) != exclude.end();
    };
    if (cfg_.strategy == Strategy::Gpsr) {
        std::vector<std::pair<NodeId, Position>> alive;
        alive.reserve(n.table.size());
        for (const auto& [id, rec] : n.table) {
            if (excluded(id)) continue;
            if (believed_alive(rec)) alive.emplace_back(id, rec.pos);
        }
        return gpsr_greedy_next_hop(n.pos, alive, *goal);
    }
    const auto sink_it = n.table.find(sink_id());
    if (!excluded(sink_id()) && sink_it != n.table.end() && believed_alive(sink_it->second)) {
        return sink_id();
    }
    if (n.parent && !excluded(*n.parent)) {
        const auto it = n.table.find(*n.parent);
        if (it != n.table.end() && believed_alive(it->second)) return n.parent;
    }
    // Tree repair: prefer backbone neighbors that make progress, then anyone.
    const double own = distance(n.pos, *goal);
    std::optional<NodeId> best;
    double best_d = own;
    for (int backbone_only = 1; backbone_only >= 0; --backbone_only) {
        for (const auto& [id, rec] : n.table) {
            if (excluded(id)) continue;
            if (!believed_alive(rec)) continue;
            if (backbone_only && !is_backbone(rec.state)) continue;
            const double d = distance(rec.pos, *goal);
            if (d < best_d) {
                best = id;
                best_d = d;
            }
        }
        if (best) break;
    }
    return best;
}

// -------------------------------------------------------------- metrics ----

RouteTrace* Simulator::trace_of(const Packet& pkt) {
    if (!cfg_.log_routes) return nullptr;
    auto it = routes_.find(pkt.flow_key());
    return it == routes_.end() ? nullptr : &it->second;
}

void Simulator::trace_status(const Packet& pkt, RouteTrace::Status st) {
    if (auto* tr = trace_of(pkt)) {
        if (tr->status == RouteTrace::Status::InFlight) tr->status = st;
    }
}

std::uint32_t Simulator::alive_count() const {
    std::uint32_t c = 0;
    for (const auto& n : nodes_) c += n.alive ? 1 : 0;
    return c;
}

MetricsRow Simulator::make_row() const {
    MetricsRow r;
    r.time_s = now_;
    r.total_energy_j = totals_.tx_energy_j + totals_.rx_energy_j;
    r.active_nodes = alive_count();
    r.reports_sent = totals_.reports_sent;
    r.reports_delivered = totals_.reports_delivered;
    r.delivery_ratio = r.reports_sent > 0 ? static_cast<double>(r.reports_delivered) /
                                                static_cast<double>(r.reports_sent)
                                          : 0.0;
    for (const auto& n : nodes_) {
        if (!n.alive) continue;
        if (n.state == ClusterState::Clusterhead) ++r.ch_count;
        else if (n.state == ClusterState::Gateway) ++r.gw_count;
        else if (n.state == ClusterState::DistGateway) ++r.dgw_count;
    }
    return r;
}

void Simulator::append_row() {
    series_.push_back(make_row());
}

void Simulator::handle_sample() {
    append_row();
    const std::size_t k = series_.size();
    if (k >= 2) {
        const auto& cur = series_[k - 1];
        const auto& prev = series_[k - 2];
        const bool starved = cur.reports_sent > prev.reports_sent &&
                             cur.reports_delivered == prev.reports_delivered;
        zero_delivery_windows_ = starved ? zero_delivery_windows_ + 1 : 0;
        if (zero_delivery_windows_ >= 10) {
            ended_early_ = true;
            warnings_.push_back("run ended early: no deliveries for 10 sampling windows");
            return;
        }
    }
    const double next = static_cast<double>(k) * cfg_.sampling_interval;
    if (next <= cfg_.duration + 1e-9) {
        queue_.push({.time = next, .kind = EventKind::MetricsSample, .node = kNoNode});
    }
}

}  // namespace ptxsim
