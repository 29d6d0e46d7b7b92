#ifndef PTXSIM_SCENARIO_HPP
#define PTXSIM_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "ptxsim/geometry.hpp"
#include "ptxsim/radio.hpp"

namespace ptxsim {

enum class Placement { UniformRandom, Grid };
enum class Strategy { LinkPtx, RandomPc, Lic, Hcc, Heed, Gpsr };

const char* to_string(Placement p);
const char* to_string(Strategy s);
Placement placement_from_string(const std::string& s);
Strategy strategy_from_string(const std::string& s);

// Per-link true delivery probability: a fixed value (min == max) or drawn
// uniformly per directed link.
struct LinkProbSpec {
    double min = 1.0;
    double max = 1.0;
};

struct ScenarioConfig {
    // Topology.
    std::uint32_t node_count = 0;
    double field_width = 200.0;
    double field_height = 200.0;
    double comm_range = 30.0;
    Placement placement = Placement::UniformRandom;
    bool sink_at_center = true;  // node 0 is the sink

    // Run identity.
    std::uint64_t seed = 0;
    Strategy strategy = Strategy::LinkPtx;
    double duration = 60.0;

    // Energy and radio.
    double e_ini = 2.0;
    RadioParams radio;  // resolved (d0 filled) by validate()

    // Traffic and protocol timing.
    double n_req = 1.0;       // required reports/s, also the PTX threshold
    double t_slot = 1.0;      // contention slot
    double sigma = 1.0;       // backoff scale: wait = t_slot*floor(sigma/rho)+jitter
    double query_time = 2.5;  // when the sink floods its query
    std::optional<RegionRect> region;  // region of interest; whole field if unset
    double source_settle = 2.0;        // delay between query arrival and first report
    double traffic_tail = 2.0;         // sources stop this long before the end

    // Links and channel.
    LinkProbSpec link_p_true;
    double prop_delay = 1e-3;
    int max_tx_attempts = 5;  // per unicast hop

    // Measurement plane.
    double probe_period = 1.0;
    int etx_window = 10;
    double probe_bits = 128.0;
    double query_bits = 256.0;
    int stale_after_periods = 5;  // unheard-of neighbor treated as gone

    // Baseline knobs.
    double heed_c_prob = 0.05;
    int heed_rounds = 5;
    int flood_filler_slots = 2;  // non-member query rebroadcast delay, in slots

    // Output.
    double sampling_interval = 1.0;
    bool log_routes = false;

    // Resolves derived fields and rejects out-of-range values. Error
    // messages name the offending key.
    void validate();
};

}  // namespace ptxsim

#endif
