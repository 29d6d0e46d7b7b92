#include "ptxsim/harness.hpp"

#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "ptxsim/metrics.hpp"

namespace ptxsim {

namespace {

using nlohmann::json;

double as_double(const json& v, const std::string& key) {
    if (!v.is_number()) throw std::invalid_argument("config: " + key + " must be a number");
    return v.get<double>();
}

std::int64_t as_int(const json& v, const std::string& key) {
    if (!v.is_number_integer()) throw std::invalid_argument("config: " + key + " must be an integer");
    return v.get<std::int64_t>();
}

bool as_bool(const json& v, const std::string& key) {
    if (!v.is_boolean()) throw std::invalid_argument("config: " + key + " must be a boolean");
    return v.get<bool>();
}

std::string as_str(const json& v, const std::string& key) {
    if (!v.is_string()) throw std::invalid_argument("config: " + key + " must be a string");
    return v.get<std::string>();
}

RadioParams radio_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("config: radio must be an object");
    RadioParams rp;
    for (const auto& [key, val] : j.items()) {
        if (key == "e_elec") rp.e_elec = as_double(val, "radio.e_elec");
        else if (key == "eps_fs") rp.eps_fs = as_double(val, "radio.eps_fs");
        else if (key == "eps_mp") rp.eps_mp = as_double(val, "radio.eps_mp");
        else if (key == "d0") rp.d0 = as_double(val, "radio.d0");
        else if (key == "msg_bits") rp.msg_bits = as_double(val, "radio.msg_bits");
        else throw std::invalid_argument("config: unknown key \"radio." + key + "\"");
    }
    return rp;
}

RegionRect region_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("config: region must be an object");
    RegionRect r;
    for (const auto& [key, val] : j.items()) {
        if (key == "x0") r.x0 = as_double(val, "region.x0");
        else if (key == "y0") r.y0 = as_double(val, "region.y0");
        else if (key == "x1") r.x1 = as_double(val, "region.x1");
        else if (key == "y1") r.y1 = as_double(val, "region.y1");
        else throw std::invalid_argument("config: unknown key \"region." + key + "\"");
    }
    return r;
}

LinkProbSpec link_p_from_json(const json& j) {
    LinkProbSpec lp;
    if (j.is_number()) {
        lp.min = lp.max = j.get<double>();
        return lp;
    }
    if (!j.is_object()) {
        throw std::invalid_argument("config: link_p_true must be a number or {min,max} object");
    }
    for (const auto& [key, val] : j.items()) {
        if (key == "min") lp.min = as_double(val, "link_p_true.min");
        else if (key == "max") lp.max = as_double(val, "link_p_true.max");
        else throw std::invalid_argument("config: unknown key \"link_p_true." + key + "\"");
    }
    return lp;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_commas(const std::string& spec) {
    std::vector<std::string> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

json optional_json(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

std::string csv_cell(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

}  // namespace

ScenarioConfig config_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("config: root must be an object");
    ScenarioConfig cfg;
    for (const auto& [key, val] : j.items()) {
        if (key == "node_count") {
            const auto v = as_int(val, key);
            if (v < 0) throw std::invalid_argument("config: node_count must be >= 0");
            cfg.node_count = static_cast<std::uint32_t>(v);
        } else if (key == "field_width") cfg.field_width = as_double(val, key);
        else if (key == "field_height") cfg.field_height = as_double(val, key);
        else if (key == "comm_range") cfg.comm_range = as_double(val, key);
        else if (key == "placement") cfg.placement = placement_from_string(as_str(val, key));
        else if (key == "sink_at_center") cfg.sink_at_center = as_bool(val, key);
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(as_int(val, key));
        else if (key == "strategy") cfg.strategy = strategy_from_string(as_str(val, key));
        else if (key == "duration") cfg.duration = as_double(val, key);
        else if (key == "e_ini") cfg.e_ini = as_double(val, key);
        else if (key == "radio") cfg.radio = radio_from_json(val);
        else if (key == "n_req") cfg.n_req = as_double(val, key);
        else if (key == "t_slot") cfg.t_slot = as_double(val, key);
        else if (key == "sigma") cfg.sigma = as_double(val, key);
        else if (key == "query_time") cfg.query_time = as_double(val, key);
        else if (key == "region") {
            if (val.is_null()) cfg.region.reset();
            else cfg.region = region_from_json(val);
        } else if (key == "source_settle") cfg.source_settle = as_double(val, key);
        else if (key == "traffic_tail") cfg.traffic_tail = as_double(val, key);
        else if (key == "link_p_true") cfg.link_p_true = link_p_from_json(val);
        else if (key == "prop_delay") cfg.prop_delay = as_double(val, key);
        else if (key == "max_tx_attempts") cfg.max_tx_attempts = static_cast<int>(as_int(val, key));
        else if (key == "probe_period") cfg.probe_period = as_double(val, key);
        else if (key == "etx_window") cfg.etx_window = static_cast<int>(as_int(val, key));
        else if (key == "probe_bits") cfg.probe_bits = as_double(val, key);
        else if (key == "query_bits") cfg.query_bits = as_double(val, key);
        else if (key == "stale_after_periods") cfg.stale_after_periods = static_cast<int>(as_int(val, key));
        else if (key == "heed_c_prob") cfg.heed_c_prob = as_double(val, key);
        else if (key == "heed_rounds") cfg.heed_rounds = static_cast<int>(as_int(val, key));
        else if (key == "flood_filler_slots") cfg.flood_filler_slots = static_cast<int>(as_int(val, key));
        else if (key == "sampling_interval") cfg.sampling_interval = as_double(val, key);
        else if (key == "log_routes") cfg.log_routes = as_bool(val, key);
        else throw std::invalid_argument("config: unknown key \"" + key + "\"");
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config: " + path + ": " + e.what());
    }
    return config_from_json(j);
}

json config_to_json(const ScenarioConfig& cfg) {
    json j;
    j["node_count"] = cfg.node_count;
    j["field_width"] = cfg.field_width;
    j["field_height"] = cfg.field_height;
    j["comm_range"] = cfg.comm_range;
    j["placement"] = to_string(cfg.placement);
    j["sink_at_center"] = cfg.sink_at_center;
    j["seed"] = cfg.seed;
    j["strategy"] = to_string(cfg.strategy);
    j["duration"] = cfg.duration;
    j["e_ini"] = cfg.e_ini;
    j["radio"] = {{"e_elec", cfg.radio.e_elec},
                  {"eps_fs", cfg.radio.eps_fs},
                  {"eps_mp", cfg.radio.eps_mp},
                  {"d0", cfg.radio.d0},
                  {"msg_bits", cfg.radio.msg_bits}};
    j["n_req"] = cfg.n_req;
    j["t_slot"] = cfg.t_slot;
    j["sigma"] = cfg.sigma;
    j["query_time"] = cfg.query_time;
    if (cfg.region) {
        j["region"] = {{"x0", cfg.region->x0},
                       {"y0", cfg.region->y0},
                       {"x1", cfg.region->x1},
                       {"y1", cfg.region->y1}};
    } else {
        j["region"] = nullptr;
    }
    j["source_settle"] = cfg.source_settle;
    j["traffic_tail"] = cfg.traffic_tail;
    j["link_p_true"] = {{"min", cfg.link_p_true.min}, {"max", cfg.link_p_true.max}};
    j["prop_delay"] = cfg.prop_delay;
    j["max_tx_attempts"] = cfg.max_tx_attempts;
    j["probe_period"] = cfg.probe_period;
    j["etx_window"] = cfg.etx_window;
    j["probe_bits"] = cfg.probe_bits;
    j["query_bits"] = cfg.query_bits;
    j["stale_after_periods"] = cfg.stale_after_periods;
    j["heed_c_prob"] = cfg.heed_c_prob;
    j["heed_rounds"] = cfg.heed_rounds;
    j["flood_filler_slots"] = cfg.flood_filler_slots;
    j["sampling_interval"] = cfg.sampling_interval;
    j["log_routes"] = cfg.log_routes;
    return j;
}

json summary_json(const ScenarioConfig& cfg, const RunResult& res) {
    json j;
    j["config"] = config_to_json(cfg);
    json totals;
    if (!res.series.empty()) {
        const MetricsRow& row = res.series.back();
        totals = {{"time_s", row.time_s},
                  {"total_energy_j", row.total_energy_j},
                  {"active_nodes", row.active_nodes},
                  {"reports_sent", row.reports_sent},
                  {"reports_delivered", row.reports_delivered},
                  {"delivery_ratio", row.delivery_ratio},
                  {"ch_count", row.ch_count},
                  {"gw_count", row.gw_count},
                  {"dgw_count", row.dgw_count}};
    }
    j["totals"] = totals;
    j["counters"] = {{"probes_sent", res.totals.probes_sent},
                     {"query_tx", res.totals.query_tx},
                     {"report_tx", res.totals.report_tx},
                     {"report_attempts", res.totals.report_attempts},
                     {"control_packets", res.totals.control_packets},
                     {"drops",
                      {{"void", res.totals.drops_void},
                       {"no_route", res.totals.drops_no_route},
                       {"retry", res.totals.drops_retry},
                       {"ttl", res.totals.drops_ttl},
                       {"loop", res.totals.drops_loop},
                       {"dead", res.totals.drops_dead}}}};
    j["tx_energy_j"] = res.totals.tx_energy_j;
    j["rx_energy_j"] = res.totals.rx_energy_j;
    j["end_time_s"] = res.end_time_s;
    j["ended_early"] = res.ended_early;
    j["first_death_s"] = optional_json(res.first_death_s);
    j["network_lifetime_s"] = res.network_lifetime_s;
    j["time_to_ratio_below_090_s"] = optional_json(res.time_to_ratio_below_090_s);
    j["final_delivery_ratio"] = res.final_delivery_ratio;
    j["energy_per_delivered_j"] = optional_json(res.energy_per_delivered_j);
    j["conservation_residual_rel"] = res.conservation_residual_rel;
    j["warnings"] = res.warnings;
    if (cfg.log_routes) {
        json routes = json::array();
        for (const auto& tr : res.routes) {
            routes.push_back({{"origin", tr.origin},
                              {"seq", tr.origin_seq},
                              {"status", to_string(tr.status)},
                              {"hops", tr.hops}});
        }
        j["routes"] = routes;
    }
    return j;
}

RunArtifacts run_scenario(ScenarioConfig cfg) {
    cfg.validate();
    Simulator sim(cfg);
    RunArtifacts art;
    art.cfg = cfg;
    art.result = sim.run();
    art.metrics_csv = to_csv(art.result.series);
    art.summary = summary_json(cfg, art.result);
    art.config_echo = config_to_json(cfg);
    return art;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& spec) {
    const auto dots = spec.find("..");
    std::vector<std::uint64_t> out;
    try {
        if (dots != std::string::npos) {
            const std::uint64_t lo = std::stoull(trim(spec.substr(0, dots)));
            const std::uint64_t hi = std::stoull(trim(spec.substr(dots + 2)));
            if (hi < lo) throw std::invalid_argument("seeds: empty range \"" + spec + "\"");
            for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
            return out;
        }
        for (const auto& item : split_commas(spec)) out.push_back(std::stoull(item));
    } catch (const std::logic_error&) {
        throw std::invalid_argument("seeds: cannot parse \"" + spec + "\"");
    }
    if (out.empty()) throw std::invalid_argument("seeds: empty list \"" + spec + "\"");
    return out;
}

std::vector<Strategy> parse_strategy_list(const std::string& spec) {
    std::vector<Strategy> out;
    for (const auto& item : split_commas(spec)) out.push_back(strategy_from_string(item));
    if (out.empty()) throw std::invalid_argument("strategies: empty list \"" + spec + "\"");
    return out;
}

std::vector<double> parse_value_list(const std::string& spec) {
    std::vector<double> out;
    try {
        for (const auto& item : split_commas(spec)) out.push_back(std::stod(item));
    } catch (const std::logic_error&) {
        throw std::invalid_argument("values: cannot parse \"" + spec + "\"");
    }
    if (out.empty()) throw std::invalid_argument("values: empty list \"" + spec + "\"");
    return out;
}

void apply_param(ScenarioConfig& cfg, const std::string& name, double value) {
    const auto as_int_param = [&](const char* key) {
        const auto v = static_cast<int>(value);
        if (static_cast<double>(v) != value) {
            throw std::invalid_argument(std::string("sweep: ") + key + " must be an integer");
        }
        return v;
    };
    if (name == "node_count") cfg.node_count = static_cast<std::uint32_t>(as_int_param("node_count"));
    else if (name == "field_width") cfg.field_width = value;
    else if (name == "field_height") cfg.field_height = value;
    else if (name == "comm_range") cfg.comm_range = value;
    else if (name == "duration") cfg.duration = value;
    else if (name == "e_ini") cfg.e_ini = value;
    else if (name == "n_req") cfg.n_req = value;
    else if (name == "t_slot") cfg.t_slot = value;
    else if (name == "sigma") cfg.sigma = value;
    else if (name == "query_time") cfg.query_time = value;
    else if (name == "source_settle") cfg.source_settle = value;
    else if (name == "traffic_tail") cfg.traffic_tail = value;
    else if (name == "link_p_true") cfg.link_p_true = {value, value};
    else if (name == "link_p_min") cfg.link_p_true.min = value;
    else if (name == "link_p_max") cfg.link_p_true.max = value;
    else if (name == "prop_delay") cfg.prop_delay = value;
    else if (name == "max_tx_attempts") cfg.max_tx_attempts = as_int_param("max_tx_attempts");
    else if (name == "probe_period") cfg.probe_period = value;
    else if (name == "etx_window") cfg.etx_window = as_int_param("etx_window");
    else if (name == "probe_bits") cfg.probe_bits = value;
    else if (name == "query_bits") cfg.query_bits = value;
    else if (name == "stale_after_periods") cfg.stale_after_periods = as_int_param("stale_after_periods");
    else if (name == "heed_c_prob") cfg.heed_c_prob = value;
    else if (name == "heed_rounds") cfg.heed_rounds = as_int_param("heed_rounds");
    else if (name == "flood_filler_slots") cfg.flood_filler_slots = as_int_param("flood_filler_slots");
    else if (name == "sampling_interval") cfg.sampling_interval = value;
    else throw std::invalid_argument("sweep: unknown parameter \"" + name + "\"");
}

namespace {

MultiRunRow row_from_result(const RunResult& res) {
    MultiRunRow row;
    row.network_lifetime_s = res.network_lifetime_s;
    row.first_death_s = res.first_death_s;
    row.total_energy_j = res.totals.tx_energy_j + res.totals.rx_energy_j;
    row.reports_sent = res.totals.reports_sent;
    row.reports_delivered = res.totals.reports_delivered;
    row.delivery_ratio = res.final_delivery_ratio;
    row.energy_per_delivered_j = res.energy_per_delivered_j;
    row.ended_early = res.ended_early;
    return row;
}

// Runs one configured scenario per row slot, optionally across threads.
void run_batch(std::vector<ScenarioConfig> cfgs, std::vector<MultiRunRow>& rows, int jobs) {
    if (jobs < 1) jobs = 1;
    std::atomic<std::size_t> cursor{0};
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex error_mu;
    const auto worker = [&] {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= cfgs.size() || failed.load()) return;
            try {
                Simulator sim(cfgs[i]);
                const RunResult res = sim.run();
                const MultiRunRow partial = row_from_result(res);
                rows[i].network_lifetime_s = partial.network_lifetime_s;
                rows[i].first_death_s = partial.first_death_s;
                rows[i].total_energy_j = partial.total_energy_j;
                rows[i].reports_sent = partial.reports_sent;
                rows[i].reports_delivered = partial.reports_delivered;
                rows[i].delivery_ratio = partial.delivery_ratio;
                rows[i].energy_per_delivered_j = partial.energy_per_delivered_j;
                rows[i].ended_early = partial.ended_early;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (first_error.empty()) first_error = e.what();
                failed.store(true);
                return;
            }
        }
    };
    if (jobs == 1 || cfgs.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const int count = std::min<std::size_t>(jobs, cfgs.size());
        pool.reserve(count);
        for (int t = 0; t < count; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failed.load()) throw std::runtime_error(first_error);
}

json row_json(const MultiRunRow& row) {
    return {{"strategy", to_string(row.strategy)},
            {"seed", row.seed},
            {"network_lifetime_s", row.network_lifetime_s},
            {"first_death_s", optional_json(row.first_death_s)},
            {"total_energy_j", row.total_energy_j},
            {"reports_sent", row.reports_sent},
            {"reports_delivered", row.reports_delivered},
            {"delivery_ratio", row.delivery_ratio},
            {"energy_per_delivered_j", optional_json(row.energy_per_delivered_j)},
            {"ended_early", row.ended_early}};
}

json mean_block(const std::vector<const MultiRunRow*>& rows) {
    double lifetime = 0.0, energy = 0.0, ratio = 0.0;
    double epd = 0.0;
    std::size_t epd_n = 0;
    for (const auto* r : rows) {
        lifetime += r->network_lifetime_s;
        energy += r->total_energy_j;
        ratio += r->delivery_ratio;
        if (r->energy_per_delivered_j) {
            epd += *r->energy_per_delivered_j;
            ++epd_n;
        }
    }
    const double n = static_cast<double>(rows.size());
    json out = {{"runs", rows.size()},
                {"network_lifetime_s", lifetime / n},
                {"total_energy_j", energy / n},
                {"delivery_ratio", ratio / n}};
    out["energy_per_delivered_j"] = epd_n > 0 ? json(epd / static_cast<double>(epd_n)) : json(nullptr);
    return out;
}

}  // namespace

BatchResult run_comparison(const ScenarioConfig& base, const std::vector<Strategy>& strategies,
                           const std::vector<std::uint64_t>& seeds, int jobs) {
    if (strategies.empty()) throw std::invalid_argument("compare: no strategies given");
    if (seeds.empty()) throw std::invalid_argument("compare: no seeds given");
    BatchResult out;
    std::vector<ScenarioConfig> cfgs;
    for (const Strategy st : strategies) {
        for (const std::uint64_t seed : seeds) {
            ScenarioConfig cfg = base;
            cfg.strategy = st;
            cfg.seed = seed;
            cfg.validate();
            MultiRunRow row;
            row.strategy = st;
            row.seed = seed;
            out.rows.push_back(row);
            cfgs.push_back(std::move(cfg));
        }
    }
    run_batch(std::move(cfgs), out.rows, jobs);

    json runs = json::array();
    for (const auto& row : out.rows) runs.push_back(row_json(row));
    json means;
    for (const Strategy st : strategies) {
        std::vector<const MultiRunRow*> mine;
        for (const auto& row : out.rows) {
            if (row.strategy == st) mine.push_back(&row);
        }
        means[to_string(st)] = mean_block(mine);
    }
    json strat_names = json::array();
    for (const Strategy st : strategies) strat_names.push_back(to_string(st));
    out.json = {{"base_config", config_to_json(base)},
                {"strategies", strat_names},
                {"seeds", seeds},
                {"runs", runs},
                {"means", means}};

    std::ostringstream csv;
    csv << "strategy,seed,network_lifetime_s,first_death_s,total_energy_j,reports_sent,"
           "reports_delivered,delivery_ratio,energy_per_delivered_j,ended_early\n";
    for (const auto& row : out.rows) {
        csv << to_string(row.strategy) << ',' << row.seed << ','
            << format_double(row.network_lifetime_s) << ',' << csv_cell(row.first_death_s) << ','
            << format_double(row.total_energy_j) << ',' << row.reports_sent << ','
            << row.reports_delivered << ',' << format_double(row.delivery_ratio) << ','
            << csv_cell(row.energy_per_delivered_j) << ',' << (row.ended_early ? 1 : 0) << '\n';
    }
    out.csv = csv.str();
    return out;
}

BatchResult run_sweep(const ScenarioConfig& base, const std::string& param,
                      const std::vector<double>& values, const std::vector<std::uint64_t>& seeds,
                      int jobs) {
    if (values.empty()) throw std::invalid_argument("sweep: no values given");
    if (seeds.empty()) throw std::invalid_argument("sweep: no seeds given");
    BatchResult out;
    std::vector<ScenarioConfig> cfgs;
    for (const double v : values) {
        for (const std::uint64_t seed : seeds) {
            ScenarioConfig cfg = base;
            apply_param(cfg, param, v);
            cfg.seed = seed;
            cfg.validate();
            MultiRunRow row;
            row.strategy = cfg.strategy;
            row.seed = seed;
            row.param_value = v;
            out.rows.push_back(row);
            cfgs.push_back(std::move(cfg));
        }
    }
    run_batch(std::move(cfgs), out.rows, jobs);

    json runs = json::array();
    for (const auto& row : out.rows) {
        json r = row_json(row);
        r["value"] = row.param_value;
        runs.push_back(r);
    }
    json means;
    for (const double v : values) {
        std::vector<const MultiRunRow*> mine;
        for (const auto& row : out.rows) {
            if (row.param_value == v) mine.push_back(&row);
        }
        means[format_double(v)] = mean_block(mine);
    }
    out.json = {{"base_config", config_to_json(base)},
                {"param", param},
                {"values", values},
                {"seeds", seeds},
                {"runs", runs},
                {"means", means}};

    std::ostringstream csv;
    csv << "param,value,seed,network_lifetime_s,first_death_s,total_energy_j,reports_sent,"
           "reports_delivered,delivery_ratio,energy_per_delivered_j,ended_early\n";
    for (const auto& row : out.rows) {
        csv << param << ',' << format_double(row.param_value) << ',' << row.seed << ','
            << format_double(row.network_lifetime_s) << ',' << csv_cell(row.first_death_s) << ','
            << format_double(row.total_energy_j) << ',' << row.reports_sent << ','
            << row.reports_delivered << ',' << format_double(row.delivery_ratio) << ','
            << csv_cell(row.energy_per_delivered_j) << ',' << (row.ended_early ? 1 : 0) << '\n';
    }
    out.csv = csv.str();
    return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("short write to " + path.string());
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"passive clustering simulator for wireless sensor fields"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string format = "both";
    std::string strategies_spec;
    std::string seeds_spec;
    std::string param;
    std::string values_spec;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::string> strategy_override;
    int jobs = 1;
    bool quiet = false;

    auto* run_cmd = app.add_subcommand("run", "simulate one scenario");
    run_cmd->add_option("--config", config_path, "scenario file (JSON)")->required();
    run_cmd->add_option("--out", out_dir, "output directory for artifacts");
    run_cmd->add_option("--format", format, "csv, json or both")
        ->check(CLI::IsMember({"csv", "json", "both"}));
    run_cmd->add_option("--seed", seed_override, "override the scenario seed");
    run_cmd->add_option("--strategy", strategy_override, "override the scenario strategy");
    run_cmd->add_flag("--quiet", quiet, "suppress the artifact listing");

    auto* cmp_cmd = app.add_subcommand("compare", "run several strategies on paired seeds");
    cmp_cmd->add_option("--config", config_path, "scenario file (JSON)")->required();
    cmp_cmd->add_option("--strategies", strategies_spec, "comma list, e.g. link-ptx,random-pc")
        ->required();
    cmp_cmd->add_option("--seeds", seeds_spec, "list 1,2,3 or range 1..20")->required();
    cmp_cmd->add_option("--out", out_dir, "output directory for artifacts");
    cmp_cmd->add_option("--jobs", jobs, "parallel runs")->check(CLI::PositiveNumber);
    cmp_cmd->add_flag("--quiet", quiet, "suppress the artifact listing");

    auto* sweep_cmd = app.add_subcommand("sweep", "vary one scenario parameter");
    sweep_cmd->add_option("--config", config_path, "scenario file (JSON)")->required();
    sweep_cmd->add_option("--param", param, "config key to vary")->required();
    sweep_cmd->add_option("--values", values_spec, "comma list of values")->required();
    sweep_cmd->add_option("--seeds", seeds_spec, "list 1,2,3 or range 1..20")->required();
    sweep_cmd->add_option("--out", out_dir, "output directory for artifacts");
    sweep_cmd->add_option("--jobs", jobs, "parallel runs")->check(CLI::PositiveNumber);
    sweep_cmd->add_flag("--quiet", quiet, "suppress the artifact listing");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    ScenarioConfig cfg;
    std::vector<Strategy> strategies;
    std::vector<std::uint64_t> seeds;
    std::vector<double> values;
    try {
        cfg = load_config(config_path);
        if (run_cmd->parsed()) {
            if (seed_override) cfg.seed = *seed_override;
            if (strategy_override) cfg.strategy = strategy_from_string(*strategy_override);
            cfg.validate();
        } else if (cmp_cmd->parsed()) {
            strategies = parse_strategy_list(strategies_spec);
            seeds = parse_seed_list(seeds_spec);
        } else if (sweep_cmd->parsed()) {
            values = parse_value_list(values_spec);
            seeds = parse_seed_list(seeds_spec);
            ScenarioConfig probe = cfg;
            apply_param(probe, param, values.front());  // reject bad names up front
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        namespace fs = std::filesystem;
        const bool to_dir = !out_dir.empty();
        if (to_dir) fs::create_directories(out_dir);

        if (run_cmd->parsed()) {
            RunArtifacts art = run_scenario(cfg);
            print_warnings(art.result.warnings);
            if (to_dir) {
                const fs::path dir(out_dir);
                std::vector<std::string> written;
                if (format != "json") {
                    write_file(dir / "metrics.csv", art.metrics_csv);
                    written.push_back("metrics.csv");
                }
                if (format != "csv") {
                    write_file(dir / "summary.json", art.summary.dump(2) + "\n");
                    written.push_back("summary.json");
                }
                write_file(dir / "config.json", art.config_echo.dump(2) + "\n");
                written.push_back("config.json");
                if (!quiet) {
                    for (const auto& name : written) {
                        std::cout << (dir / name).string() << "\n";
                    }
                }
            } else if (format == "csv") {
                std::cout << art.metrics_csv;
            } else {
                std::cout << art.summary.dump(2) << "\n";
            }
            return 0;
        }

        const bool is_compare = cmp_cmd->parsed();
        BatchResult batch = is_compare ? run_comparison(cfg, strategies, seeds, jobs)
                                       : run_sweep(cfg, param, values, seeds, jobs);
        if (to_dir) {
            const fs::path dir(out_dir);
            const char* stem = is_compare ? "comparison" : "sweep";
            write_file(dir / (std::string(stem) + ".json"), batch.json.dump(2) + "\n");
            write_file(dir / (std::string(stem) + ".csv"), batch.csv);
            if (!quiet) {
                std::cout << (dir / (std::string(stem) + ".json")).string() << "\n";
                std::cout << (dir / (std::string(stem) + ".csv")).string() << "\n";
            }
        } else {
            std::cout << batch.json.dump(2) << "\n";
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace ptxsim
