#pragma once

#include <span>
#include <utility>
#include <vector>

#include "catsim/geometry.hpp"

namespace catsim {

using NodeId = int;
using EdgeId = int;

// Directed road segment between two intersections.
struct RoadEdge {
    NodeId from = -1;
    NodeId to = -1;
    double length_m = 0.0;
    double v_max_mps = 0.0;
    EdgeId reverse = -1;  // the opposite-direction edge
};

struct RoadNetwork {
    std::vector<Vec2> nodes;
    std::vector<RoadEdge> edges;
    std::vector<std::vector<EdgeId>> out_edges;  // per-node outgoing edges

    const RoadEdge& edge(EdgeId e) const { return edges[static_cast<size_t>(e)]; }
    const Vec2& node(NodeId n) const { return nodes[static_cast<size_t>(n)]; }

    Vec2 edge_direction(EdgeId e) const;
    bool edge_is_horizontal(EdgeId e) const;
    Vec2 position_on(EdgeId e, double offset_m) const;

    bool strongly_connected() const;
    void validate() const;  // throws ConfigError on broken invariants
};

// Ordered edge walk plus the arc-length offset into the first edge.
struct Route {
    std::vector<EdgeId> edges;
    double start_offset_m = 0.0;
};

struct GridSpec {
    int blocks_x = 4;
    int blocks_y = 4;
    double block_size_m = 250.0;
    double building_margin_m = 15.0;
};

/// Builds the Manhattan grid: roads on grid lines, (bx+1)*(by+1) nodes,
/// 2*(bx*(by+1) + by*(bx+1)) directed edges, one building per block inset
/// by the margin on all sides. Throws ConfigError on invalid dimensions.
std::pair<RoadNetwork, std::vector<Building>> build_manhattan_grid(const GridSpec& spec,
                                                                   double v_max_mps);

/// Position at arc length `distance_m` along the route polyline, measured
/// from the start offset. Clamps to the route's final point when the
/// distance exceeds the remaining length. Throws ConfigError on an empty route.
Vec2 route_advance(const RoadNetwork& net, const Route& route, double distance_m);

/// Same walk over an explicit edge list (used by the mobility predictors,
/// whose upcoming edges live in a deque-backed buffer).
Vec2 route_advance(const RoadNetwork& net, std::span<const EdgeId> edges, double start_offset_m,
                   double distance_m);

}  // namespace catsim
