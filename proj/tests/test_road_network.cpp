#include <doctest.h>

#include <set>

#include "catsim/errors.hpp"
#include "catsim/road_network.hpp"

using namespace catsim;

TEST_CASE("single-block grid") {
    auto [net, buildings] = build_manhattan_grid({1, 1, 100.0, 10.0}, 10.0);
    CHECK(net.nodes.size() == 4);
    CHECK(net.edges.size() == 8);
    REQUIRE(buildings.size() == 1);
    CHECK(buildings[0].lo == Vec2{10.0, 10.0});
    CHECK(buildings[0].hi == Vec2{90.0, 90.0});
}

TEST_CASE("4x4 grid covers the 1000 m playground") {
    auto [net, buildings] = build_manhattan_grid({4, 4, 250.0, 15.0}, 13.89);
    CHECK(net.nodes.size() == 25);
    CHECK(net.edges.size() == 80);
    CHECK(buildings.size() == 16);
    double max_x = 0.0, max_y = 0.0;
    for (const Vec2& n : net.nodes) {
        max_x = std::max(max_x, n.x);
        max_y = std::max(max_y, n.y);
    }
    CHECK(max_x == 1000.0);
    CHECK(max_y == 1000.0);
    CHECK(net.strongly_connected());
}

TEST_CASE("grid rejects invalid dimensions") {
    CHECK_THROWS_AS(build_manhattan_grid({0, 1, 100.0, 10.0}, 10.0), ConfigError);
    CHECK_THROWS_AS(build_manhattan_grid({1, 1, 100.0, 50.0}, 10.0), ConfigError);
    CHECK_THROWS_AS(build_manhattan_grid({1, 1, 100.0, 10.0}, 0.0), ConfigError);
}

TEST_CASE("grid edge invariants") {
    auto [net, buildings] = build_manhattan_grid({3, 2, 200.0, 20.0}, 12.0);
    net.validate();
    for (EdgeId e = 0; e < static_cast<EdgeId>(net.edges.size()); ++e) {
        const RoadEdge& re = net.edge(e);
        CHECK(re.length_m == doctest::Approx(distance(net.node(re.from), net.node(re.to))));
        CHECK(net.edge(re.reverse).reverse == e);
        CHECK(re.v_max_mps == 12.0);
    }
    // no building touches any road segment
    for (const Building& b : buildings) {
        for (const RoadEdge& re : net.edges) {
            CHECK(wall_cuts(net.node(re.from), net.node(re.to), b) == 0);
        }
    }
}

TEST_CASE("route advance along a straight east route") {
    auto [net, buildings] = build_manhattan_grid({2, 1, 100.0, 10.0}, 10.0);
    // find the two eastbound edges on the y=0 row
    std::vector<EdgeId> east;
    for (EdgeId e = 0; e < static_cast<EdgeId>(net.edges.size()); ++e) {
        const RoadEdge& re = net.edge(e);
        if (net.node(re.from).y == 0.0 && net.node(re.to).y == 0.0 &&
            net.node(re.to).x > net.node(re.from).x) {
            east.push_back(e);
        }
    }
    REQUIRE(east.size() == 2);
    if (net.node(net.edge(east[0]).from).x > net.node(net.edge(east[1]).from).x) {
        std::swap(east[0], east[1]);
    }
    const Route route{east, 0.0};
    CHECK(route_advance(net, route, 100.0) == Vec2{100.0, 0.0});
    CHECK(route_advance(net, route, 150.0) == Vec2{150.0, 0.0});
    CHECK(route_advance(net, route, 500.0) == Vec2{200.0, 0.0});  // clamps at the route end
}

TEST_CASE("route advance turns onto the next edge") {
    auto [net, buildings] = build_manhattan_grid({1, 1, 100.0, 10.0}, 10.0);
    EdgeId east = -1, north = -1;
    for (EdgeId e = 0; e < static_cast<EdgeId>(net.edges.size()); ++e) {
        const RoadEdge& re = net.edge(e);
        if (net.node(re.from) == Vec2{0, 0} && net.node(re.to) == Vec2{100, 0}) east = e;
        if (net.node(re.from) == Vec2{100, 0} && net.node(re.to) == Vec2{100, 100}) north = e;
    }
    REQUIRE(east >= 0);
    REQUIRE(north >= 0);
    const Route route{{east, north}, 50.0};  // start at (50, 0)
    CHECK(route_advance(net, route, 80.0) == Vec2{100.0, 30.0});
    CHECK(route_advance(net, route, 0.0) == Vec2{50.0, 0.0});
}

TEST_CASE("route advance rejects an empty route") {
    auto [net, buildings] = build_manhattan_grid({1, 1, 100.0, 10.0}, 10.0);
    CHECK_THROWS_AS(route_advance(net, Route{}, 10.0), ConfigError);
}

TEST_CASE("every node reaches every other node") {
    auto [net, buildings] = build_manhattan_grid({5, 3, 150.0, 15.0}, 10.0);
    CHECK(net.strongly_connected());
    // out-degree matches the grid position: 2 at corners, 3 on rims, 4 inside
    std::multiset<size_t> degrees;
    for (const auto& out : net.out_edges) degrees.insert(out.size());
    CHECK(degrees.count(2) == 4);
    CHECK(degrees.count(3) == 2 * (5 - 1) + 2 * (3 - 1));
    CHECK(degrees.count(4) == (5 - 1) * (3 - 1));
}
