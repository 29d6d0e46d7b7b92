#ifndef PTXSIM_SIM_ENGINE_HPP
#define PTXSIM_SIM_ENGINE_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ptxsim/cluster_state.hpp"
#include "ptxsim/clustering.hpp"
#include "ptxsim/event_queue.hpp"
#include "ptxsim/link_metrics.hpp"
#include "ptxsim/metrics.hpp"
#include "ptxsim/network_graph.hpp"
#include "ptxsim/packet.hpp"
#include "ptxsim/rng.hpp"
#include "ptxsim/scenario.hpp"

namespace ptxsim {

// Per-report trace, collected when ScenarioConfig::log_routes is set.
struct RouteTrace {
    enum class Status {
        InFlight,
        Delivered,
        VoidRegion,   // greedy forwarding found no closer neighbor
        NoRoute,      // no usable next hop on the cluster backbone
        RetryFail,    // per-hop attempts exhausted, no fallback
        TtlExpired,
        LoopDropped,  // revisited a relay
        SenderDied,
    };
    NodeId origin = kNoNode;
    std::uint32_t origin_seq = 0;
    std::vector<NodeId> hops;  // origin first, sink last when delivered
    Status status = Status::InFlight;
};

inline const char* to_string(RouteTrace::Status st) {
    switch (st) {
        case RouteTrace::Status::InFlight: return "in_flight";
        case RouteTrace::Status::Delivered: return "delivered";
        case RouteTrace::Status::VoidRegion: return "void_region";
        case RouteTrace::Status::NoRoute: return "no_route";
        case RouteTrace::Status::RetryFail: return "retry_fail";
        case RouteTrace::Status::TtlExpired: return "ttl_expired";
        case RouteTrace::Status::LoopDropped: return "loop_dropped";
        case RouteTrace::Status::SenderDied: return "sender_died";
    }
    return "unknown";
}

struct NodeSnapshot {
    NodeId id = kNoNode;
    Position pos;
    double e_res = 0.0;
    bool alive = true;
    ClusterState state = ClusterState::Initial;
    std::optional<NodeId> cluster;
    std::optional<NodeId> dgw_peer;
    std::optional<NodeId> parent;
    bool got_query = false;
    bool is_source = false;
};

struct RunTotals {
    double tx_energy_j = 0.0;
    double rx_energy_j = 0.0;
    std::uint64_t probes_sent = 0;
    std::uint64_t query_tx = 0;
    std::uint64_t reports_sent = 0;
    std::uint64_t report_tx = 0;        // per-hop transmissions (first attempts)
    std::uint64_t report_attempts = 0;  // including retries
    std::uint64_t reports_delivered = 0;
    std::uint64_t drops_void = 0;
    std::uint64_t drops_no_route = 0;
    std::uint64_t drops_retry = 0;
    std::uint64_t drops_ttl = 0;
    std::uint64_t drops_loop = 0;
    std::uint64_t drops_dead = 0;
    std::uint64_t control_packets = 0;  // anything that is not probe/query/report
};

struct RunResult {
    MetricsSeries series;
    RunTotals totals;
    std::vector<NodeSnapshot> final_nodes;
    std::vector<PlacedNode> placement;
    std::vector<std::string> warnings;

    double end_time_s = 0.0;
    bool ended_early = false;
    std::optional<double> first_death_s;
    double network_lifetime_s = 0.0;  // first death, or run end when none
    std::optional<double> time_to_ratio_below_090_s;
    double final_delivery_ratio = 0.0;
    std::optional<double> energy_per_delivered_j;

    // |sum of per-node consumption - (tx + rx ledger)|, relative to total.
    double conservation_residual_rel = 0.0;

    std::vector<RouteTrace> routes;
};

class Simulator {
  public:
    explicit Simulator(ScenarioConfig cfg);

    RunResult run();

    const NetworkGraph& graph() const { return graph_; }
    const std::vector<PlacedNode>& placement() const { return placement_; }
    static constexpr NodeId sink_id() { return 0; }

  private:
    struct NeighborRecord {
        Position pos;
        double dist = 0.0;
        ClusterState state = ClusterState::Initial;
        std::optional<NodeId> cluster;
        double last_heard = -1.0;
        LinkStatsWindow window;  // reverse direction: neighbor -> me
        double p_fwd = -1.0;     // me -> neighbor, as last reported by them

        explicit NeighborRecord(int window_size) : window(static_cast<std::size_t>(window_size)) {}
    };

    struct Contention {
        bool active = false;
        bool claim_ready = false;  // deadline passed, claim rides the next send
        ContentionRole role = ContentionRole::Gateway;
        double deadline = 0.0;
        std::uint64_t gen = 0;
    };

    struct PendingTx {
        std::shared_ptr<const Packet> pkt;
        bool own = false;       // originated here (vs relay/forward duty)
        NodeId from = kNoNode;  // previous hop, never routed back to
    };

    struct Node {
        NodeId id = kNoNode;
        Position pos;
        double e_consumed = 0.0;
        bool alive = true;
        ClusterState state = ClusterState::Initial;
        std::optional<NodeId> cluster;
        std::optional<NodeId> dgw_peer;
        std::map<NodeId, NeighborRecord> table;
        Contention cont;

        bool got_query = false;
        bool query_forwarded = false;
        bool query_forward_scheduled = false;
        std::optional<NodeId> parent;
        std::optional<Position> sink_pos;
        double n_req = 0.0;
        bool is_source = false;
        std::uint32_t next_report_seq = 0;
        std::set<std::uint64_t> seen_flows;     // query duplicate filter
        std::set<std::uint64_t> relayed_flows;  // report loop filter
        std::vector<PendingTx> pending;
    };

    // Setup.
    static std::vector<PlacedNode> make_placement(const ScenarioConfig& cfg);
    void draw_link_model();
    void check_reachability_warning();

    // Event handlers.
    void handle_probe(NodeId id);
    void handle_arrival(const Event& ev);
    void handle_deadline(NodeId id, std::uint64_t gen);
    void handle_report_due(NodeId id);
    void handle_sample();

    // Traffic.
    void inject_query();
    void originate_report(Node& n);
    void send_report(Node& n, const Packet& pkt);
    void forward_report(Node& n, const Packet& pkt, NodeId from);
    void route_and_send(Node& n, Packet& pkt, NodeId avoid, bool revisit);
    void do_query_broadcast(Node& n);
    void flush_pending(Node& n, bool via_timer);

    // Radio.
    bool charge_tx(Node& n, double bits, double dist);
    bool charge_rx(Node& n, double bits);
    void kill(Node& n);
    void broadcast_packet(Node& sender, const Packet& pkt);
    bool unicast_packet(Node& sender, Packet pkt, NodeId dst);

    // Probes.
    Packet build_probe(Node& n) const;
    void process_probe(Node& receiver, const Node& sender, const Packet& pkt);

    // Cluster protocol.
    void note_sender(Node& n, NodeId from, ClusterState st, std::optional<NodeId> cluster);
    void state_machine(Node& n, const Packet& pkt);
    void try_enter_contention(Node& n, const TransitionOutcome& out, const Packet& trigger);
    void resolve_loss(Node& n, std::optional<NodeId> adopt);
    void resolve_dist_gateway(Node& n, NodeId peer);
    void commit_claim(Node& n);
    void force_external(Node& n);
    void consistency_checks(Node& n);
    int known_gateways(const Node& n, std::optional<NodeId> cluster) const;
    bool believed_alive(const NeighborRecord& rec) const;
    double strategy_wait(Node& n, ContentionRole role);
    std::vector<NeighborPtx> usable_ptx_table(const Node& n) const;
    std::optional<NodeId> pick_next_hop(Node& n, const Packet& pkt,
                                        const std::vector<NodeId>& exclude);

    // Bookkeeping.
    double e_res(const Node& n) const { return cfg_.e_ini - n.e_consumed; }
    double p_true(NodeId from, NodeId to) const;
    RouteTrace* trace_of(const Packet& pkt);
    void trace_status(const Packet& pkt, RouteTrace::Status st);
    void append_row();
    MetricsRow make_row() const;
    std::uint32_t alive_count() const;

    ScenarioConfig cfg_;
    std::vector<PlacedNode> placement_;  // built before the graph over it
    NetworkGraph graph_;
    std::vector<Node> nodes_;
    std::vector<double> link_p_;  // row-major node_count x node_count
    EventQueue queue_;
    Rng sim_rng_;
    double now_ = 0.0;
    double traffic_stop_ = 0.0;
    bool query_injected_ = false;
    RunTotals totals_;
    MetricsSeries series_;
    std::vector<std::string> warnings_;
    std::optional<double> first_death_;
    std::set<std::uint64_t> delivered_flows_;
    std::map<std::uint64_t, RouteTrace> routes_;
    int zero_delivery_windows_ = 0;
    bool ended_early_ = false;
};

}  // namespace ptxsim

#endif
