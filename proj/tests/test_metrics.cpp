#include <stdexcept>

#include "doctest.h"
#include "ptxsim/metrics.hpp"

using namespace ptxsim;

namespace {

MetricsRow row(double t, std::uint64_t delivered) {
    MetricsRow r;
    r.time_s = t;
    r.reports_delivered = delivered;
    return r;
}

}  // namespace

TEST_CASE("format: shortest round-trip decimals") {
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(1.5) == "1.5");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1e-9) == "1e-09");
    CHECK(format_double(87.70580193070292) == "87.70580193070292");
}

TEST_CASE("csv: header and row layout are fixed") {
    CHECK(std::string(kMetricsCsvHeader) ==
          "time_s,total_energy_j,active_nodes,reports_sent,reports_delivered,"
          "delivery_ratio,ch_count,gw_count,dgw_count");

    MetricsRow r;
    r.time_s = 2.0;
    r.total_energy_j = 0.125;
    r.active_nodes = 40;
    r.reports_sent = 10;
    r.reports_delivered = 9;
    r.delivery_ratio = 0.9;
    r.ch_count = 5;
    r.gw_count = 6;
    r.dgw_count = 1;
    const std::string expect = std::string(kMetricsCsvHeader) + "\n2,0.125,40,10,9,0.9,5,6,1\n";
    CHECK(to_csv({r}) == expect);
    CHECK(to_csv({}) == std::string(kMetricsCsvHeader) + "\n");
}

TEST_CASE("quality check: inclusive per-window rate threshold") {
    const MetricsSeries series = {row(0.0, 0), row(1.0, 2), row(2.0, 3), row(3.0, 3),
                                  row(5.0, 7)};
    const auto ok = report_quality_check(series, 2.0);
    REQUIRE(ok.size() == 4);
    CHECK(ok[0]);        // 2 delivered in 1 s, exactly the demand
    CHECK_FALSE(ok[1]);  // half the demand
    CHECK_FALSE(ok[2]);  // nothing delivered
    CHECK(ok[3]);        // 4 in 2 s

    CHECK(report_quality_check({row(0.0, 0)}, 2.0).empty());
    CHECK_THROWS_AS(report_quality_check(series, 0.0), std::domain_error);
}
