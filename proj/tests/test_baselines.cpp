#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "ptxsim/baselines.hpp"
#include "ptxsim/rng.hpp"

using namespace ptxsim;

TEST_CASE("lic: lowest id wins") {
    CHECK(lic_elect({5, 9, 12}) == 5);
    CHECK(lic_elect({42}) == 42);
    CHECK(lic_elect({3}) == 3);
    CHECK_THROWS_AS(lic_elect({}), std::domain_error);
}

TEST_CASE("hcc: highest degree wins, ties to the lower id") {
    CHECK(hcc_elect({{1, 3}, {2, 5}, {3, 2}}) == 2);
    CHECK(hcc_elect({{1, 4}, {2, 4}}) == 1);
    CHECK(hcc_elect({{7, 0}}) == 7);
    CHECK_THROWS_AS(hcc_elect({}), std::domain_error);
    CHECK_THROWS_AS(hcc_elect({{1, -1}}), std::domain_error);
}

TEST_CASE("heed: probability proportional to residual energy") {
    const HeedParams params{0.05, 2.0};
    CHECK(heed_ch_prob(params, 2.0) == 0.05);
    CHECK(heed_ch_prob(params, 1.0) == doctest::Approx(0.025).epsilon(1e-12));
    CHECK(heed_ch_prob(params, 0.0) == 0.0);
    // monotone in e_res
    double prev = -1.0;
    for (double e = 0.0; e <= 2.0; e += 0.25) {
        const double p = heed_ch_prob(params, e);
        CHECK(p >= prev);
        prev = p;
    }
}

TEST_CASE("heed: parameter domain") {
    CHECK_THROWS_AS(heed_ch_prob({0.0, 2.0}, 1.0), std::domain_error);
    CHECK_THROWS_AS(heed_ch_prob({1.5, 2.0}, 1.0), std::domain_error);
    CHECK_THROWS_AS(heed_ch_prob({0.05, 0.0}, 0.0), std::domain_error);
    CHECK_THROWS_AS(heed_ch_prob({0.05, 2.0}, 2.5), std::domain_error);
}

TEST_CASE("random pick: deterministic replay and rough uniformity") {
    const std::set<NodeId> singleton = {7};
    Rng r1(11);
    CHECK(random_pc_select(singleton, r1) == 7);

    Rng a(123);
    Rng b(123);
    const std::set<NodeId> pool = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    for (int i = 0; i < 50; ++i) CHECK(random_pc_select(pool, a) == random_pc_select(pool, b));

    Rng c(9);
    const std::set<NodeId> pair = {1, 2};
    int ones = 0;
    for (int i = 0; i < 10000; ++i) ones += random_pc_select(pair, c) == 1 ? 1 : 0;
    CHECK(std::abs(ones / 10000.0 - 0.5) < 0.05);

    Rng d(1);
    CHECK_THROWS_AS(random_pc_select({}, d), std::domain_error);
}

TEST_CASE("greedy next hop: picks the neighbor closest to the destination") {
    const Position dest{100.0, 0.0};
    const std::vector<std::pair<NodeId, Position>> nbrs = {{1, {10.0, 0.0}}, {2, {5.0, 5.0}}};
    const auto pick = gpsr_greedy_next_hop({0.0, 0.0}, nbrs, dest);
    REQUIRE(pick.has_value());
    CHECK(*pick == 1);
}

TEST_CASE("greedy next hop: destination in range is chosen directly") {
    const Position dest{10.0, 0.0};
    const std::vector<std::pair<NodeId, Position>> nbrs = {{4, {10.0, 0.0}}, {5, {8.0, 0.0}}};
    const auto pick = gpsr_greedy_next_hop({0.0, 0.0}, nbrs, dest);
    REQUIRE(pick.has_value());
    CHECK(*pick == 4);
}

TEST_CASE("greedy next hop: progress must be strict") {
    const Position dest{100.0, 0.0};
    SUBCASE("all neighbors farther: void region") {
        const std::vector<std::pair<NodeId, Position>> nbrs = {{1, {-10.0, 0.0}}, {2, {0.0, 20.0}}};
        CHECK_FALSE(gpsr_greedy_next_hop({0.0, 0.0}, nbrs, dest).has_value());
    }
    SUBCASE("neighbor at exactly the same distance does not count") {
        const std::vector<std::pair<NodeId, Position>> nbrs = {{1, {0.0, 0.0}}};
        CHECK_FALSE(gpsr_greedy_next_hop({0.0, 0.0}, nbrs, dest).has_value());
    }
    SUBCASE("no neighbors at all") {
        CHECK_FALSE(gpsr_greedy_next_hop({0.0, 0.0}, {}, dest).has_value());
    }
}

TEST_CASE("greedy next hop: distance ties resolve to the lower id") {
    const Position dest{0.0, 0.0};
    const std::vector<std::pair<NodeId, Position>> nbrs = {{8, {3.0, 0.0}}, {2, {0.0, 3.0}},
                                                           {5, {-3.0, 0.0}}};
    const auto pick = gpsr_greedy_next_hop({10.0, 0.0}, nbrs, dest);
    REQUIRE(pick.has_value());
    CHECK(*pick == 2);
}

TEST_CASE("greedy walk: strictly decreasing distance implies termination") {
    Rng rng(31);
    const Position dest{0.0, 0.0};
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::pair<NodeId, Position>> all;
        for (NodeId i = 0; i < 30; ++i) {
            all.push_back({i, {rng.uniform(-50.0, 50.0), rng.uniform(-50.0, 50.0)}});
        }
        Position cur{rng.uniform(30.0, 50.0), rng.uniform(30.0, 50.0)};
        double last = distance(cur, dest);
        for (std::size_t hops = 0; hops <= all.size(); ++hops) {
            std::vector<std::pair<NodeId, Position>> in_range;
            for (const auto& [id, pos] : all) {
                if (distance(cur, pos) <= 20.0) in_range.push_back({id, pos});
            }
            const auto pick = gpsr_greedy_next_hop(cur, in_range, dest);
            if (!pick.has_value()) break;
            Position next;
            for (const auto& [id, pos] : in_range) {
                if (id == *pick) next = pos;
            }
            const double d = distance(next, dest);
            CHECK(d < last);
            last = d;
            cur = next;
        }
    }
}
