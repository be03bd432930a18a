#include "catsim/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "catsim/errors.hpp"

namespace catsim {

TrafficLightSchedule::TrafficLightSchedule(const std::vector<TrafficLight>& lights,
                                           size_t node_count)
    : by_node_(node_count) {
    for (const TrafficLight& l : lights) {
        if (l.green_s <= 0.0 || l.red_s <= 0.0) {
            throw ConfigError("traffic light durations must be positive");
        }
        if (l.node < 0 || static_cast<size_t>(l.node) >= node_count) {
            throw ConfigError("traffic light references unknown node");
        }
        by_node_[static_cast<size_t>(l.node)] = l;
    }
}

bool TrafficLightSchedule::has_light(NodeId node) const {
    return node >= 0 && static_cast<size_t>(node) < by_node_.size() &&
           by_node_[static_cast<size_t>(node)].has_value();
}

bool TrafficLightSchedule::is_green(NodeId node, bool horizontal_approach, double t) const {
    if (!has_light(node)) return true;
    const TrafficLight& l = *by_node_[static_cast<size_t>(node)];
    const double cycle = l.green_s + l.red_s;
    const double u = std::fmod(t + l.phase_s, cycle);
    const bool east_west_green = u < l.green_s;
    return horizontal_approach ? east_west_green : !east_west_green;
}

void ensure_route_ahead(VehicleState& state, const RoadNetwork& net, double distance_m) {
    double remaining = net.edge(state.edge).length_m - state.offset_m;
    for (EdgeId e : state.route_ahead) {
        remaining += net.edge(e).length_m;
    }
    EdgeId last = state.route_ahead.empty() ? state.edge : state.route_ahead.back();
    while (remaining < distance_m) {
        const RoadEdge& re = net.edge(last);
        const auto& outgoing = net.out_edges[static_cast<size_t>(re.to)];
        // uniform over outgoing edges minus the U-turn; U-turn only at dead ends
        EdgeId chosen = -1;
        size_t options = 0;
        for (EdgeId e : outgoing) {
            if (e != re.reverse) ++options;
        }
        if (options == 0) {
            chosen = re.reverse;
        } else {
            size_t idx = state.route_rng.pick_index(options);
            for (EdgeId e : outgoing) {
                if (e == re.reverse) continue;
                if (idx == 0) {
                    chosen = e;
                    break;
                }
                --idx;
            }
        }
        state.route_ahead.push_back(chosen);
        remaining += net.edge(chosen).length_m;
        last = chosen;
    }
}

namespace {

struct TickMotion {
    double distance = 0.0;
    double speed_after = 0.0;
};

// Exact integration of one tick with constant acceleration, clamped to
// [0, v_max]; splits the tick at the clamp instant.
TickMotion integrate(double v, double a, double v_max, double dt) {
    if (a > 0.0) {
        const double t_hit = (v_max - v) / a;
        if (t_hit >= dt) {
            return {v * dt + 0.5 * a * dt * dt, v + a * dt};
        }
        return {v * t_hit + 0.5 * a * t_hit * t_hit + v_max * (dt - t_hit), v_max};
    }
    if (a < 0.0) {
        const double t_stop = v / -a;
        if (t_stop >= dt) {
            return {v * dt + 0.5 * a * dt * dt, v + a * dt};
        }
        return {0.5 * v * t_stop, 0.0};
    }
    return {v * dt, v};
}

}  // namespace

void step_vehicle(VehicleState& state, const RoadNetwork& net, const TrafficLightSchedule& lights,
                  const KinematicParams& params, double dt, double now_s) {
    const RoadEdge& re = net.edge(state.edge);
    ensure_route_ahead(state, net, re.length_m - state.offset_m + 1.0);

    const bool horizontal = net.edge_is_horizontal(state.edge);
    const bool red_ahead = !lights.is_green(re.to, horizontal, now_s);

    double a;
    bool braking = false;
    if (red_ahead) {
        const double d_rem = re.length_m - state.offset_m;
        const double d_brake =
            state.speed_mps * state.speed_mps / (2.0 * -params.decel_mps2);
        if (d_rem <= d_brake + state.speed_mps * dt) {
            braking = true;
        }
    }
    if (braking) {
        a = state.speed_mps > 0.0 ? params.decel_mps2 : 0.0;
    } else {
        a = state.speed_mps < re.v_max_mps ? params.accel_mps2 : 0.0;
    }

    const TickMotion m = integrate(state.speed_mps, a, re.v_max_mps, dt);
    double new_offset = state.offset_m + m.distance;
    state.speed_mps = m.speed_after;
    state.accel_mps2 = a;
    if (state.speed_mps <= 0.0 || state.speed_mps >= re.v_max_mps) {
        state.accel_mps2 = 0.0;  // clamped; a(t) is no longer acting
    }

    if (red_ahead && new_offset >= re.length_m) {
        // never cross on red; hold at the stop line
        state.offset_m = re.length_m;
        state.speed_mps = 0.0;
        state.accel_mps2 = 0.0;
        return;
    }

    while (new_offset >= net.edge(state.edge).length_m && !state.route_ahead.empty()) {
        new_offset -= net.edge(state.edge).length_m;
        state.edge = state.route_ahead.front();
        state.route_ahead.pop_front();
        state.speed_mps = std::min(state.speed_mps, net.edge(state.edge).v_max_mps);
        if (state.route_ahead.empty()) {
            ensure_route_ahead(state, net, net.edge(state.edge).length_m - new_offset + 1.0);
        }
    }
    state.offset_m = std::min(new_offset, net.edge(state.edge).length_m);
}

double s_max_extrapolation(double v_mps, double tau_s) { return v_mps * tau_s; }

double s_max_accel(double v_mps, double a_mps2, double v_max_mps, double tau_s) {
    if (v_mps > v_max_mps) {
        throw std::invalid_argument("s_max_accel: speed exceeds v_max");
    }
    if (a_mps2 <= 0.0) {
        return v_mps * tau_s;
    }
    const double t_accel = std::min((v_max_mps - v_mps) / a_mps2, tau_s);
    return v_mps * t_accel + 0.5 * a_mps2 * t_accel * t_accel +
           v_max_mps * std::max(tau_s - t_accel, 0.0);
}

namespace {

// Walk the polyline formed by the current edge and the upcoming route.
Vec2 advance_on_route(const VehicleState& state, const RoadNetwork& net, double s) {
    double pos = state.offset_m + s;
    EdgeId e = state.edge;
    for (auto it = state.route_ahead.begin();; ++it) {
        const double len = net.edge(e).length_m;
        if (pos <= len || it == state.route_ahead.end()) {
            return net.position_on(e, std::min(pos, len));
        }
        pos -= len;
        e = *it;
    }
}

}  // namespace

Vec2 predict_position(VehicleState& state, const RoadNetwork& net, PredictorKind kind,
                      double tau_s) {
    switch (kind) {
        case PredictorKind::Extrapolation:
            return state.position(net) +
                   state.heading(net) * s_max_extrapolation(state.speed_mps, tau_s);
        case PredictorKind::TrajectoryVel: {
            const double s = s_max_extrapolation(state.speed_mps, tau_s);
            ensure_route_ahead(state, net, s + 1.0);
            return advance_on_route(state, net, s);
        }
        case PredictorKind::TrajectoryAcc: {
            const double s = s_max_accel(state.speed_mps, state.accel_mps2,
                                         net.edge(state.edge).v_max_mps, tau_s);
            ensure_route_ahead(state, net, s + 1.0);
            return advance_on_route(state, net, s);
        }
    }
    return state.position(net);
}

}  // namespace catsim
