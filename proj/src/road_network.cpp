#include "catsim/road_network.hpp"

#include <cmath>
#include <map>
#include <queue>

#include "catsim/errors.hpp"

namespace catsim {

Vec2 RoadNetwork::edge_direction(EdgeId e) const {
    const RoadEdge& re = edge(e);
    const Vec2 d = node(re.to) - node(re.from);
    return d * (1.0 / re.length_m);
}

bool RoadNetwork::edge_is_horizontal(EdgeId e) const {
    const RoadEdge& re = edge(e);
    const Vec2 d = node(re.to) - node(re.from);
    return std::abs(d.x) > std::abs(d.y);
}

Vec2 RoadNetwork::position_on(EdgeId e, double offset_m) const {
    const RoadEdge& re = edge(e);
    return node(re.from) + edge_direction(e) * offset_m;
}

bool RoadNetwork::strongly_connected() const {
    if (nodes.empty()) return false;
    auto reachable_count = [&](bool reversed) {
        std::vector<char> seen(nodes.size(), 0);
        std::queue<NodeId> q;
        q.push(0);
        seen[0] = 1;
        size_t count = 1;
        while (!q.empty()) {
            const NodeId n = q.front();
            q.pop();
            if (!reversed) {
                for (EdgeId e : out_edges[static_cast<size_t>(n)]) {
                    const NodeId m = edge(e).to;
                    if (!seen[static_cast<size_t>(m)]) {
                        seen[static_cast<size_t>(m)] = 1;
                        ++count;
                        q.push(m);
                    }
                }
            } else {
                for (const RoadEdge& re : edges) {
                    if (re.to == n && !seen[static_cast<size_t>(re.from)]) {
                        seen[static_cast<size_t>(re.from)] = 1;
                        ++count;
                        q.push(re.from);
                    }
                }
            }
        }
        return count;
    };
    return reachable_count(false) == nodes.size() && reachable_count(true) == nodes.size();
}

void RoadNetwork::validate() const {
    if (nodes.empty() || edges.empty()) {
        throw ConfigError("road network has no nodes or edges");
    }
    if (out_edges.size() != nodes.size()) {
        throw ConfigError("adjacency size does not match node count");
    }
    for (size_t i = 0; i < edges.size(); ++i) {
        const RoadEdge& re = edges[i];
        if (re.from < 0 || re.to < 0 || static_cast<size_t>(re.from) >= nodes.size() ||
            static_cast<size_t>(re.to) >= nodes.size()) {
            throw ConfigError("edge references unknown node");
        }
        if (re.v_max_mps <= 0.0) {
            throw ConfigError("edge v_max must be positive");
        }
        const double geo_len = distance(node(re.from), node(re.to));
        if (std::abs(geo_len - re.length_m) > 1e-6) {
            throw ConfigError("edge length does not match node distance");
        }
        if (re.reverse < 0 || static_cast<size_t>(re.reverse) >= edges.size() ||
            edges[static_cast<size_t>(re.reverse)].from != re.to ||
            edges[static_cast<size_t>(re.reverse)].to != re.from) {
            throw ConfigError("edge is missing its reverse edge");
        }
    }
}

std::pair<RoadNetwork, std::vector<Building>> build_manhattan_grid(const GridSpec& spec,
                                                                   double v_max_mps) {
    if (spec.blocks_x < 1 || spec.blocks_y < 1) {
        throw ConfigError("grid needs at least one block per axis");
    }
    if (!(spec.building_margin_m > 0.0) || spec.block_size_m <= 2.0 * spec.building_margin_m) {
        throw ConfigError("block size must exceed twice the building margin");
    }
    if (v_max_mps <= 0.0) {
        throw ConfigError("v_max must be positive");
    }

    RoadNetwork net;
    const int nx = spec.blocks_x + 1;
    const int ny = spec.blocks_y + 1;
    net.nodes.reserve(static_cast<size_t>(nx) * static_cast<size_t>(ny));
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            net.nodes.push_back({i * spec.block_size_m, j * spec.block_size_m});
        }
    }
    net.out_edges.resize(net.nodes.size());

    auto node_at = [nx](int i, int j) { return static_cast<NodeId>(j * nx + i); };
    auto add_edge_pair = [&](NodeId a, NodeId b) {
        const double len = distance(net.nodes[static_cast<size_t>(a)],
                                    net.nodes[static_cast<size_t>(b)]);
        const EdgeId fwd = static_cast<EdgeId>(net.edges.size());
        const EdgeId rev = fwd + 1;
        net.edges.push_back({a, b, len, v_max_mps, rev});
        net.edges.push_back({b, a, len, v_max_mps, fwd});
        net.out_edges[static_cast<size_t>(a)].push_back(fwd);
        net.out_edges[static_cast<size_t>(b)].push_back(rev);
    };

    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < spec.blocks_x; ++i) {
            add_edge_pair(node_at(i, j), node_at(i + 1, j));
        }
    }
    for (int j = 0; j < spec.blocks_y; ++j) {
        for (int i = 0; i < nx; ++i) {
            add_edge_pair(node_at(i, j), node_at(i, j + 1));
        }
    }

    std::vector<Building> buildings;
    buildings.reserve(static_cast<size_t>(spec.blocks_x) * static_cast<size_t>(spec.blocks_y));
    for (int j = 0; j < spec.blocks_y; ++j) {
        for (int i = 0; i < spec.blocks_x; ++i) {
            const double x0 = i * spec.block_size_m + spec.building_margin_m;
            const double y0 = j * spec.block_size_m + spec.building_margin_m;
            const double x1 = (i + 1) * spec.block_size_m - spec.building_margin_m;
            const double y1 = (j + 1) * spec.block_size_m - spec.building_margin_m;
            buildings.push_back({{x0, y0}, {x1, y1}});
        }
    }

    net.validate();
    return {std::move(net), std::move(buildings)};
}

Vec2 route_advance(const RoadNetwork& net, std::span<const EdgeId> edges, double start_offset_m,
                   double distance_m) {
    if (edges.empty()) {
        throw ConfigError("route_advance on empty route");
    }
    double pos = start_offset_m + distance_m;
    for (size_t i = 0; i < edges.size(); ++i) {
        const double len = net.edge(edges[i]).length_m;
        if (pos <= len || i + 1 == edges.size()) {
            return net.position_on(edges[i], std::min(pos, len));
        }
        pos -= len;
    }
    return net.position_on(edges.back(), net.edge(edges.back()).length_m);
}

Vec2 route_advance(const RoadNetwork& net, const Route& route, double distance_m) {
    return route_advance(net, std::span<const EdgeId>(route.edges), route.start_offset_m,
                         distance_m);
}

}  // namespace catsim
