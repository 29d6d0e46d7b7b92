#include <algorithm>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "ptxsim/network_graph.hpp"
#include "ptxsim/rng.hpp"

using namespace ptxsim;

namespace {

std::vector<PlacedNode> random_nodes(std::uint32_t n, double w, double h, Rng& rng) {
    std::vector<PlacedNode> out;
    out.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        out.push_back({i, {rng.uniform(0.0, w), rng.uniform(0.0, h)}});
    }
    return out;
}

}  // namespace

TEST_CASE("graph: edge within range, boundary inclusive") {
    const std::vector<PlacedNode> two = {{0, {0.0, 0.0}}, {1, {10.0, 0.0}}};
    CHECK(build_graph(two, 30.0).adjacent(0, 1));

    const std::vector<PlacedNode> exact = {{0, {0.0, 0.0}}, {1, {30.0, 0.0}}};
    CHECK(build_graph(exact, 30.0).adjacent(0, 1));

    const std::vector<PlacedNode> beyond = {{0, {0.0, 0.0}}, {1, {30.000001, 0.0}}};
    CHECK_FALSE(build_graph(beyond, 30.0).adjacent(0, 1));
}

TEST_CASE("graph: single node has no edges") {
    const NetworkGraph g = build_graph({{4, {1.0, 1.0}}}, 30.0);
    CHECK(g.neighbors(4).empty());
    CHECK(g.connected());
}

TEST_CASE("graph: duplicate ids rejected") {
    const std::vector<PlacedNode> dup = {{3, {0.0, 0.0}}, {3, {5.0, 5.0}}};
    CHECK_THROWS_WITH_AS(build_graph(dup, 30.0), "build_graph: duplicate node id 3",
                         std::invalid_argument);
}

TEST_CASE("graph: non-positive range rejected") {
    CHECK_THROWS_AS(build_graph({{0, {0.0, 0.0}}}, 0.0), std::invalid_argument);
}

TEST_CASE("graph: unknown ids throw") {
    const NetworkGraph g = build_graph({{0, {0.0, 0.0}}}, 30.0);
    CHECK_THROWS_AS(g.neighbors(7), std::out_of_range);
    CHECK_THROWS_AS(g.position(7), std::out_of_range);
}

TEST_CASE("graph: adjacency matches brute-force pairwise distances") {
    Rng rng(41);
    const auto nodes = random_nodes(60, 120.0, 120.0, rng);
    const double range = 25.0;
    const NetworkGraph g = build_graph(nodes, range);

    for (const auto& a : nodes) {
        for (const auto& b : nodes) {
            if (a.id == b.id) continue;
            const bool expect = distance(a.pos, b.pos) <= range;
            CHECK(g.adjacent(a.id, b.id) == expect);
            CHECK(g.adjacent(a.id, b.id) == g.adjacent(b.id, a.id));
        }
    }
}

TEST_CASE("graph: neighbor lists are sorted by id and distances agree") {
    Rng rng(42);
    const auto nodes = random_nodes(40, 100.0, 100.0, rng);
    const NetworkGraph g = build_graph(nodes, 30.0);
    for (const auto& n : nodes) {
        const auto& nbrs = g.neighbors(n.id);
        CHECK(std::is_sorted(nbrs.begin(), nbrs.end()));
        for (NodeId m : nbrs) {
            CHECK(g.dist(n.id, m) == distance(g.position(n.id), g.position(m)));
        }
    }
}

TEST_CASE("graph: reachability and connectivity on two separated blobs") {
    std::vector<PlacedNode> nodes;
    for (std::uint32_t i = 0; i < 4; ++i) nodes.push_back({i, {static_cast<double>(i) * 5.0, 0.0}});
    for (std::uint32_t i = 4; i < 8; ++i)
        nodes.push_back({i, {500.0 + static_cast<double>(i) * 5.0, 0.0}});
    const NetworkGraph g = build_graph(nodes, 10.0);

    CHECK_FALSE(g.connected());
    const auto reach = g.reachable_from(0);
    CHECK(reach.size() == 4);
    CHECK(std::count(reach.begin(), reach.end(), 3) == 1);
    CHECK(std::count(reach.begin(), reach.end(), 4) == 0);
    CHECK(g.reachable_from(4).size() == 4);
}

TEST_CASE("graph: connected chain") {
    std::vector<PlacedNode> nodes;
    for (std::uint32_t i = 0; i < 10; ++i) nodes.push_back({i, {static_cast<double>(i) * 8.0, 0.0}});
    const NetworkGraph g = build_graph(nodes, 10.0);
    CHECK(g.connected());
    CHECK(g.reachable_from(9).size() == 10);
    CHECK(g.neighbors(5).size() == 2);
}
