#pragma once

#include <string>
#include <vector>

#include "catsim/channel.hpp"
#include "catsim/mobility.hpp"
#include "catsim/road_network.hpp"

namespace catsim {

// A fully materialized simulation world. Generated once, written to JSON,
// and replayed bit-identically.
struct Scenario {
    GridSpec grid;
    double v_max_mps = 13.89;  // 50 km/h on every edge
    RoadNetwork network;
    std::vector<Building> buildings;
    std::vector<TrafficLight> traffic_lights;
    RadioEnvironment radio;

    void validate() const;
};

struct ScenarioGenOptions {
    GridSpec grid;
    double v_max_mps = 13.89;
    int enodeb_count = 3;
    int rsu_count = 8;
    double enodeb_tx_dbm = 33.0;
    double rsu_tx_dbm = 20.0;
    double enodeb_antenna_gain_db = 14.0;  // mast-mounted high-gain omni
    double rsu_antenna_gain_db = 0.0;      // roadside omni
    double lte_frequency_hz = 1.8e9;
    double wifi_frequency_hz = 5.89e9;
    double wall_attenuation_db = 2.0;
    double light_green_s = 30.0;
    double light_red_s = 30.0;
};

/// Builds the default world: the Manhattan grid with one building per block,
/// traffic lights at every real intersection, eNodeBs and RSUs at fixed
/// generator-chosen street positions, and the default link models.
Scenario make_default_scenario(const ScenarioGenOptions& opts);

std::string scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const std::string& text);

void save_scenario(const Scenario& s, const std::string& path);
Scenario load_scenario(const std::string& path);

}  // namespace catsim
