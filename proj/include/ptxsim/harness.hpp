#ifndef PTXSIM_HARNESS_HPP
#define PTXSIM_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ptxsim/scenario.hpp"
#include "ptxsim/sim_engine.hpp"

namespace ptxsim {

// Config file <-> ScenarioConfig. Unknown or ill-typed keys are rejected
// with the offending key named; the emitted form echoes resolved values.
ScenarioConfig config_from_json(const nlohmann::json& j);
ScenarioConfig load_config(const std::string& path);
nlohmann::json config_to_json(const ScenarioConfig& cfg);

// Per-run summary. Its "totals" block repeats the final metrics row, so the
// JSON and CSV artifacts of one run always agree.
nlohmann::json summary_json(const ScenarioConfig& cfg, const RunResult& res);

struct RunArtifacts {
    ScenarioConfig cfg;
    RunResult result;
    std::string metrics_csv;
    nlohmann::json summary;
    nlohmann::json config_echo;
};

RunArtifacts run_scenario(ScenarioConfig cfg);

// "3..12" (inclusive) or "1,4,9".
std::vector<std::uint64_t> parse_seed_list(const std::string& spec);
std::vector<Strategy> parse_strategy_list(const std::string& spec);
std::vector<double> parse_value_list(const std::string& spec);

// Numeric scenario knob by config-file name, for sweeps.
void apply_param(ScenarioConfig& cfg, const std::string& name, double value);

struct MultiRunRow {
    Strategy strategy = Strategy::LinkPtx;
    std::uint64_t seed = 0;
    double param_value = 0.0;  // sweeps only
    double network_lifetime_s = 0.0;
    std::optional<double> first_death_s;
    double total_energy_j = 0.0;
    std::uint64_t reports_sent = 0;
    std::uint64_t reports_delivered = 0;
    double delivery_ratio = 0.0;
    std::optional<double> energy_per_delivered_j;
    bool ended_early = false;
};

struct BatchResult {
    std::vector<MultiRunRow> rows;
    nlohmann::json json;
    std::string csv;
};

// Every strategy runs the same seeds, hence identical topologies and true
// link draws, so per-seed differences are attributable to the strategy.
BatchResult run_comparison(const ScenarioConfig& base, const std::vector<Strategy>& strategies,
                           const std::vector<std::uint64_t>& seeds, int jobs = 1);

BatchResult run_sweep(const ScenarioConfig& base, const std::string& param,
                      const std::vector<double>& values, const std::vector<std::uint64_t>& seeds,
                      int jobs = 1);

// Exit codes: 0 success, 1 usage/validation error, 2 run or output failure.
int cli_main(int argc, const char* const* argv);

}  // namespace ptxsim

#endif
