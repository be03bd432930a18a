#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <limits>

#include "catsim/errors.hpp"
#include "catsim/scenario.hpp"

using namespace catsim;

namespace {

size_t count_kind(const Scenario& s, SiteKind k) {
    return static_cast<size_t>(std::count_if(s.radio.sites.begin(), s.radio.sites.end(),
                                             [&](const RadioSite& r) { return r.kind == k; }));
}

}  // namespace

TEST_CASE("default scenario materializes the expected world") {
    const Scenario s = make_default_scenario({});
    CHECK(count_kind(s, SiteKind::ENodeB) == 3);
    CHECK(count_kind(s, SiteKind::RSU) == 8);
    CHECK(s.buildings.size() == 16);
    CHECK(s.network.nodes.size() == 25);
    CHECK(s.network.edges.size() == 80);
    CHECK(s.v_max_mps == 13.89);
    CHECK(s.radio.wall_attenuation_db == 2.0);
    CHECK(s.radio.lte.metric_offset_db == 27.78);
    CHECK(s.radio.lte.metric_range.phi_min_dbm == -140.0);
    CHECK(s.radio.lte.metric_range.phi_max_dbm == -50.0);
    CHECK(s.radio.wifi.metric_range.phi_min_dbm == -89.0);
    CHECK(s.radio.wifi.sensitivity_dbm == -89.0);
    for (const RadioSite& site : s.radio.sites) {
        if (site.kind == SiteKind::ENodeB) {
            CHECK(site.tx_power_dbm == 33.0);
            CHECK(site.antenna_gain_db == 14.0);
            CHECK(site.frequency_hz == 1.8e9);
        } else {
            CHECK(site.tx_power_dbm == 20.0);
            CHECK(site.antenna_gain_db == 0.0);
            CHECK(site.frequency_hz == 5.89e9);
        }
    }
    // lights at every real intersection (out-degree >= 3)
    size_t lit = 0;
    for (const auto& out : s.network.out_edges) {
        if (out.size() >= 3) ++lit;
    }
    CHECK(s.traffic_lights.size() == lit);
}

TEST_CASE("generator honors the requested counts") {
    ScenarioGenOptions opts;
    opts.grid = {4, 4, 250.0, 15.0};
    opts.enodeb_count = 5;
    opts.rsu_count = 12;
    const Scenario s = make_default_scenario(opts);
    CHECK(count_kind(s, SiteKind::ENodeB) == 5);
    CHECK(count_kind(s, SiteKind::RSU) == 12);
    CHECK(s.buildings.size() == 16);
}

TEST_CASE("an RSU-free world is valid and floors the wifi metric") {
    ScenarioGenOptions opts;
    opts.rsu_count = 0;
    const Scenario s = make_default_scenario(opts);
    CHECK(count_kind(s, SiteKind::RSU) == 0);
    const MetricSample w = measure_metric(s.radio, {500, 500}, InterfaceKind::WIFI, 0.0);
    CHECK_FALSE(w.serving_site.has_value());
    CHECK(w.phi_dbm == s.radio.wifi.metric_range.phi_min_dbm);
}

TEST_CASE("scenario JSON round-trips byte-identically") {
    const Scenario s = make_default_scenario({});
    const std::string text = scenario_to_json(s);
    const Scenario loaded = scenario_from_json(text);
    CHECK(scenario_to_json(loaded) == text);
    CHECK(loaded.radio.sites.size() == s.radio.sites.size());
    CHECK(loaded.radio.sites[0].antenna_gain_db == s.radio.sites[0].antenna_gain_db);
    CHECK(loaded.network.edges.size() == s.network.edges.size());
    CHECK(loaded.traffic_lights.size() == s.traffic_lights.size());
    CHECK(loaded.radio.buildings.size() == s.buildings.size());
}

TEST_CASE("scenario JSON rejects malformed input") {
    CHECK_THROWS_AS(scenario_from_json("not json"), IoError);
    // syntactically valid JSON that is not a scenario is a content error
    CHECK_THROWS_AS(scenario_from_json("{\"format\":\"something-else\"}"), ConfigError);
    CHECK_THROWS_AS(scenario_from_json("{\"format\":\"catsim-scenario\"}"), IoError);
}

TEST_CASE("scenario validation catches broken worlds") {
    Scenario s = make_default_scenario({});
    s.validate();

    Scenario bad = s;
    bad.buildings.push_back({{100, 100}, {90, 110}});  // inverted corners
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = s;
    bad.buildings.push_back({{-10, -10}, {600, 600}});  // swallows road nodes
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = s;
    bad.radio.sites[0].tx_power_dbm = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = s;
    bad.radio.sites[0].frequency_hz = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = s;
    bad.v_max_mps = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = s;
    bad.radio.lte.rate_table.clear();
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("save and load through files") {
    const Scenario s = make_default_scenario({});
    const std::string path = "test_scenario_roundtrip.json";
    save_scenario(s, path);
    const Scenario loaded = load_scenario(path);
    CHECK(scenario_to_json(loaded) == scenario_to_json(s));
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_scenario("does_not_exist_anywhere.json"), IoError);
}
