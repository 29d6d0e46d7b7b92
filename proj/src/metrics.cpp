#include "ptxsim/metrics.hpp"

#include <charconv>
#include <stdexcept>
#include <system_error>

namespace ptxsim {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

const char* const kMetricsCsvHeader =
    "time_s,total_energy_j,active_nodes,reports_sent,reports_delivered,"
    "delivery_ratio,ch_count,gw_count,dgw_count";

std::string to_csv(const MetricsSeries& series) {
    std::string out = kMetricsCsvHeader;
    out += '\n';
    for (const auto& r : series) {
        out += format_double(r.time_s);
        out += ',';
        out += format_double(r.total_energy_j);
        out += ',';
        out += std::to_string(r.active_nodes);
        out += ',';
        out += std::to_string(r.reports_sent);
        out += ',';
        out += std::to_string(r.reports_delivered);
        out += ',';
        out += format_double(r.delivery_ratio);
        out += ',';
        out += std::to_string(r.ch_count);
        out += ',';
        out += std::to_string(r.gw_count);
        out += ',';
        out += std::to_string(r.dgw_count);
        out += '\n';
    }
    return out;
}

std::vector<bool> report_quality_check(const MetricsSeries& series, double n_req) {
    if (n_req <= 0.0) throw std::domain_error("report_quality_check: n_req must be > 0");
    std::vector<bool> out;
    for (std::size_t i = 1; i < series.size(); ++i) {
        const double dt = series[i].time_s - series[i - 1].time_s;
        const auto delivered = series[i].reports_delivered - series[i - 1].reports_delivered;
        out.push_back(dt > 0.0 && static_cast<double>(delivered) / dt >= n_req);
    }
    return out;
}

}  // namespace ptxsim
