#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "catsim/rng.hpp"
#include "catsim/road_network.hpp"

namespace catsim {

// The three mobility prediction methods: straight-line dead reckoning,
// route-following at constant speed, and route-following with the current
// acceleration applied until v_max.
enum class PredictorKind { Extrapolation, TrajectoryVel, TrajectoryAcc };

struct TrafficLight {
    NodeId node = -1;
    double green_s = 30.0;
    double red_s = 30.0;
    double phase_s = 0.0;  // cycle offset, fixed per node
};

// Per-node lookup; alternates the green axis over the cycle.
class TrafficLightSchedule {
public:
    TrafficLightSchedule() = default;
    TrafficLightSchedule(const std::vector<TrafficLight>& lights, size_t node_count);

    // Green for the approach axis (horizontal = east-west). Nodes without a
    // light are always green.
    bool is_green(NodeId node, bool horizontal_approach, double t) const;
    bool has_light(NodeId node) const;

private:
    std::vector<std::optional<TrafficLight>> by_node_;
};

struct KinematicParams {
    double accel_mps2 = 2.0;   // toward v_max on a free road
    double decel_mps2 = -3.0;  // braking for a red light
};

struct VehicleState {
    int id = 0;
    bool equipped = false;
    EdgeId edge = -1;
    double offset_m = 0.0;
    double speed_mps = 0.0;
    double accel_mps2 = 0.0;
    std::deque<EdgeId> route_ahead;  // upcoming edges after the current one
    RandomStream route_rng;          // feeds only route extension draws

    Vec2 position(const RoadNetwork& net) const { return net.position_on(edge, offset_m); }
    Vec2 heading(const RoadNetwork& net) const { return net.edge_direction(edge); }
};

/// Extends the vehicle's known route until at least `distance_m` of road
/// remains ahead of the current offset. Next edges are drawn uniformly from
/// the outgoing edges excluding the U-turn (U-turn only at dead ends). The
/// draw sequence depends only on the vehicle's route stream, so predictors
/// may look arbitrarily far ahead without perturbing the walk.
void ensure_route_ahead(VehicleState& state, const RoadNetwork& net, double distance_m);

/// Advances one vehicle by dt: accelerates toward the edge's v_max, brakes
/// for red lights at the upcoming node, and crosses intersections onto the
/// next route edge. Speed stays within [0, v_max] at every tick.
void step_vehicle(VehicleState& state, const RoadNetwork& net, const TrafficLightSchedule& lights,
                  const KinematicParams& params, double dt, double now_s);

/// Traveled distance for the extrapolation predictor: v * tau.
double s_max_extrapolation(double v_mps, double tau_s);

/// Traveled distance with the current acceleration applied until v_max is
/// reached, then cruising. Non-positive acceleration falls back to v * tau.
/// Throws if v exceeds v_max.
double s_max_accel(double v_mps, double a_mps2, double v_max_mps, double tau_s);

/// Future position after the horizon tau under the chosen predictor. The
/// trajectory-based kinds follow the route polyline (extending the route
/// lazily); extrapolation leaves the road grid on turns by construction.
Vec2 predict_position(VehicleState& state, const RoadNetwork& net, PredictorKind kind,
                      double tau_s);

inline double position_error(const Vec2& predicted, const Vec2& actual) {
    return distance(predicted, actual);
}

}  // namespace catsim
