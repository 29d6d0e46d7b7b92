#ifndef PTXSIM_METRICS_HPP
#define PTXSIM_METRICS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace ptxsim {

struct MetricsRow {
    double time_s = 0.0;
    double total_energy_j = 0.0;
    std::uint32_t active_nodes = 0;
    std::uint64_t reports_sent = 0;
    std::uint64_t reports_delivered = 0;
    double delivery_ratio = 0.0;
    std::uint32_t ch_count = 0;
    std::uint32_t gw_count = 0;
    std::uint32_t dgw_count = 0;
};

using MetricsSeries = std::vector<MetricsRow>;

// Shortest round-trip decimal form of a double ("1.5", "0.0001", ...).
std::string format_double(double v);

extern const char* const kMetricsCsvHeader;

// LF line endings, header row first. Byte-identical for identical series.
std::string to_csv(const MetricsSeries& series);

// Whether each sampling window (between consecutive rows) delivered reports
// at a rate of at least n_req per second. Size is rows - 1.
std::vector<bool> report_quality_check(const MetricsSeries& series, double n_req);

}  // namespace ptxsim

#endif
