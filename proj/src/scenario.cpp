#include "ptxsim/scenario.hpp"

namespace ptxsim {

const char* to_string(Placement p) {
    switch (p) {
        case Placement::UniformRandom: return "uniform-random";
        case Placement::Grid: return "grid";
    }
    throw std::logic_error("to_string: bad Placement");
}

const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::LinkPtx: return "link-ptx";
        case Strategy::RandomPc: return "random-pc";
        case Strategy::Lic: return "lic";
        case Strategy::Hcc: return "hcc";
        case Strategy::Heed: return "heed";
        case Strategy::Gpsr: return "gpsr";
    }
    throw std::logic_error("to_string: bad Strategy");
}

Placement placement_from_string(const std::string& s) {
    if (s == "uniform-random") return Placement::UniformRandom;
    if (s == "grid") return Placement::Grid;
    throw std::invalid_argument("placement: unknown value '" + s +
                                "' (expected uniform-random or grid)");
}

Strategy strategy_from_string(const std::string& s) {
    if (s == "link-ptx") return Strategy::LinkPtx;
    if (s == "random-pc") return Strategy::RandomPc;
    if (s == "lic") return Strategy::Lic;
    if (s == "hcc") return Strategy::Hcc;
    if (s == "heed") return Strategy::Heed;
    if (s == "gpsr") return Strategy::Gpsr;
    throw std::invalid_argument("strategy: unknown value '" + s + "'");
}

void ScenarioConfig::validate() {
    if (node_count == 0) throw std::invalid_argument("node_count: must be >= 1");
    if (field_width <= 0.0) throw std::invalid_argument("field_width: must be > 0");
    if (field_height <= 0.0) throw std::invalid_argument("field_height: must be > 0");
    if (comm_range <= 0.0) throw std::invalid_argument("comm_range: must be > 0");
    if (e_ini <= 0.0) throw std::invalid_argument("e_ini: must be > 0");
    if (n_req <= 0.0) throw std::invalid_argument("n_req: must be > 0");
    if (t_slot <= 0.0) throw std::invalid_argument("t_slot: must be > 0");
    if (sigma <= 0.0) throw std::invalid_argument("sigma: must be > 0");
    if (duration <= 0.0) throw std::invalid_argument("duration: must be > 0");
    if (query_time < 0.0) throw std::invalid_argument("query_time: must be >= 0");
    if (query_time >= duration) throw std::invalid_argument("query_time: must be < duration");
    if (source_settle < 0.0) throw std::invalid_argument("source_settle: must be >= 0");
    if (traffic_tail < 0.0) throw std::invalid_argument("traffic_tail: must be >= 0");
    if (link_p_true.min <= 0.0 || link_p_true.min > 1.0) {
        throw std::invalid_argument("link_p_true.min: must be in (0, 1]");
    }
    if (link_p_true.max < link_p_true.min || link_p_true.max > 1.0) {
        throw std::invalid_argument("link_p_true.max: must be in [min, 1]");
    }
    if (prop_delay < 0.0) throw std::invalid_argument("prop_delay: must be >= 0");
    if (max_tx_attempts < 1) throw std::invalid_argument("max_tx_attempts: must be >= 1");
    if (probe_period <= 0.0) throw std::invalid_argument("probe_period: must be > 0");
    if (etx_window < 1) throw std::invalid_argument("etx_window: must be >= 1");
    if (probe_bits <= 0.0) throw std::invalid_argument("probe_bits: must be > 0");
    if (query_bits <= 0.0) throw std::invalid_argument("query_bits: must be > 0");
    if (stale_after_periods < 1) throw std::invalid_argument("stale_after_periods: must be >= 1");
    if (heed_c_prob <= 0.0 || heed_c_prob > 1.0) {
        throw std::invalid_argument("heed_c_prob: must be in (0, 1]");
    }
    if (heed_rounds < 1) throw std::invalid_argument("heed_rounds: must be >= 1");
    if (flood_filler_slots < 0) throw std::invalid_argument("flood_filler_slots: must be >= 0");
    if (sampling_interval <= 0.0) throw std::invalid_argument("sampling_interval: must be > 0");
    if (region) {
        if (region->x1 < region->x0) throw std::invalid_argument("region.x1: must be >= region.x0");
        if (region->y1 < region->y0) throw std::invalid_argument("region.y1: must be >= region.y0");
    }
    radio = resolve_radio(radio);
}

}  // namespace ptxsim
