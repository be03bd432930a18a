#include "catsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "catsim/errors.hpp"

namespace catsim {

using nlohmann::json;

void Scenario::validate() const {
    network.validate();
    if (v_max_mps <= 0.0) {
        throw ConfigError("v_max must be positive");
    }
    for (const Building& b : buildings) {
        if (!(b.lo.x < b.hi.x && b.lo.y < b.hi.y)) {
            throw ConfigError("building corners must satisfy min < max");
        }
        for (const Vec2& n : network.nodes) {
            if (b.contains(n)) {
                throw ConfigError("building overlaps a road node");
            }
        }
        for (const RoadEdge& e : network.edges) {
            if (wall_cuts(network.node(e.from), network.node(e.to), b) != 0) {
                throw ConfigError("building overlaps a road segment");
            }
        }
    }
    for (const RadioSite& s : radio.sites) {
        if (!std::isfinite(s.tx_power_dbm) || !std::isfinite(s.antenna_gain_db) ||
            !(s.frequency_hz > 0.0)) {
            throw ConfigError("radio site needs finite tx power, finite gain, positive frequency");
        }
    }
    radio.lte.validate();
    radio.wifi.validate();
    // schedule construction re-checks the light invariants
    TrafficLightSchedule schedule(traffic_lights, network.nodes.size());
}

namespace {

// Curated layouts for the default world. The eNodeBs sit on inner
// intersections so the macro layer keeps deeply shadowed pockets along the
// playground rim; the RSUs sit mid-block on those rim corridors, away from
// the signalised intersections, as small coverage infill cells. Positions
// are recorded in the scenario file and replayed from there.
std::vector<Vec2> enodeb_layout(int count, double w, double h) {
    const std::vector<Vec2> base = {
        {0.25 * w, 0.25 * h}, {0.75 * w, 0.50 * h}, {0.25 * w, 0.75 * h},
        {0.75 * w, 0.75 * h}, {0.50 * w, 0.25 * h}, {0.50 * w, 0.75 * h},
    };
    std::vector<Vec2> out;
    for (int i = 0; i < count; ++i) {
        if (static_cast<size_t>(i) < base.size()) {
            out.push_back(base[static_cast<size_t>(i)]);
        } else {
            // low-discrepancy fallback past the curated list
            const double g = 0.6180339887498949;
            out.push_back({std::fmod(0.5 + g * (i + 1), 1.0) * w,
                           std::fmod(0.25 + g * g * (i + 1), 1.0) * h});
        }
    }
    return out;
}

std::vector<Vec2> rsu_layout(int count, double w, double h) {
    const std::vector<Vec2> base = {
        {0.375 * w, 1.00 * h}, {0.625 * w, 1.00 * h}, {0.875 * w, 1.00 * h},
        {1.00 * w, 0.625 * h}, {1.00 * w, 0.375 * h}, {0.625 * w, 0.00 * h},
        {0.125 * w, 0.00 * h}, {0.00 * w, 0.625 * h}, {0.25 * w, 0.00 * h},
        {0.00 * w, 0.25 * h}, {0.50 * w, 1.00 * h}, {1.00 * w, 0.50 * h},
    };
    std::vector<Vec2> out;
    for (int i = 0; i < count; ++i) {
        if (static_cast<size_t>(i) < base.size()) {
            out.push_back(base[static_cast<size_t>(i)]);
        } else {
            const double g = 0.7548776662466927;
            out.push_back({std::fmod(0.1 + g * (i + 1), 1.0) * w,
                           std::fmod(0.7 + g * g * (i + 1), 1.0) * h});
        }
    }
    return out;
}

LinkModel default_lte_model() {
    LinkModel m;
    m.metric_range = {-140.0, -50.0};
    m.sensitivity_dbm = -120.0;
    m.rate_table = {{-120.0, 1e6}, {-100.0, 5e6}, {-80.0, 15e6}, {-50.0, 30e6}};
    m.max_retries = 2;
    m.retry_interval_s = 0.1;
    m.path_loss_exponent = 4.0;  // dense urban macro: steep falloff leaves shadowed pockets
    m.metric_offset_db = 27.78;  // total power to per-resource-element RSRP
    return m;
}

LinkModel default_wifi_model() {
    LinkModel m;
    m.metric_range = {-89.0, -50.0};
    m.sensitivity_dbm = -89.0;
    m.rate_table = {{-89.0, 3e6}, {-70.0, 6e6}, {-50.0, 12e6}};
    m.max_retries = 2;
    m.retry_interval_s = 0.1;
    m.path_loss_exponent = 3.5;  // street-level small cells: short useful range
    m.metric_offset_db = 0.0;
    return m;
}

}  // namespace

Scenario make_default_scenario(const ScenarioGenOptions& opts) {
    Scenario s;
    s.grid = opts.grid;
    s.v_max_mps = opts.v_max_mps;
    auto [net, buildings] = build_manhattan_grid(opts.grid, opts.v_max_mps);
    s.network = std::move(net);
    s.buildings = buildings;
    s.radio.buildings = std::move(buildings);
    s.radio.wall_attenuation_db = opts.wall_attenuation_db;
    s.radio.lte = default_lte_model();
    s.radio.wifi = default_wifi_model();

    const double w = opts.grid.blocks_x * opts.grid.block_size_m;
    const double h = opts.grid.blocks_y * opts.grid.block_size_m;
    for (const Vec2& p : enodeb_layout(opts.enodeb_count, w, h)) {
        s.radio.sites.push_back({SiteKind::ENodeB, p, opts.enodeb_tx_dbm,
                                 opts.enodeb_antenna_gain_db, opts.lte_frequency_hz});
    }
    for (const Vec2& p : rsu_layout(opts.rsu_count, w, h)) {
        s.radio.sites.push_back({SiteKind::RSU, p, opts.rsu_tx_dbm, opts.rsu_antenna_gain_db,
                                 opts.wifi_frequency_hz});
    }

    const double cycle = opts.light_green_s + opts.light_red_s;
    for (size_t n = 0; n < s.network.nodes.size(); ++n) {
        if (s.network.out_edges[n].size() >= 3) {
            const double phase = std::fmod(static_cast<double>(n) * 17.0, cycle);
            s.traffic_lights.push_back(
                {static_cast<NodeId>(n), opts.light_green_s, opts.light_red_s, phase});
        }
    }

    s.validate();
    return s;
}

namespace {

json link_model_to_json(const LinkModel& m) {
    json rates = json::array();
    for (const RatePoint& rp : m.rate_table) {
        rates.push_back({rp.metric_dbm, rp.rate_bps});
    }
    return {{"phi_min_dbm", m.metric_range.phi_min_dbm},
            {"phi_max_dbm", m.metric_range.phi_max_dbm},
            {"sensitivity_dbm", m.sensitivity_dbm},
            {"rate_table", rates},
            {"max_retries", m.max_retries},
            {"retry_interval_s", m.retry_interval_s},
            {"path_loss_exponent", m.path_loss_exponent},
            {"metric_offset_db", m.metric_offset_db}};
}

LinkModel link_model_from_json(const json& j) {
    LinkModel m;
    m.metric_range = {j.at("phi_min_dbm").get<double>(), j.at("phi_max_dbm").get<double>()};
    m.sensitivity_dbm = j.at("sensitivity_dbm").get<double>();
    for (const auto& rp : j.at("rate_table")) {
        m.rate_table.push_back({rp.at(0).get<double>(), rp.at(1).get<double>()});
    }
    m.max_retries = j.at("max_retries").get<int>();
    m.retry_interval_s = j.at("retry_interval_s").get<double>();
    m.path_loss_exponent = j.at("path_loss_exponent").get<double>();
    m.metric_offset_db = j.at("metric_offset_db").get<double>();
    return m;
}

}  // namespace

std::string scenario_to_json(const Scenario& s) {
    json j;
    j["format"] = "catsim-scenario";
    j["version"] = 1;
    j["grid"] = {{"blocks_x", s.grid.blocks_x},
                 {"blocks_y", s.grid.blocks_y},
                 {"block_size_m", s.grid.block_size_m},
                 {"building_margin_m", s.grid.building_margin_m}};
    j["v_max_mps"] = s.v_max_mps;

    json nodes = json::array();
    for (const Vec2& n : s.network.nodes) nodes.push_back({n.x, n.y});
    j["nodes"] = nodes;

    json edges = json::array();
    for (const RoadEdge& e : s.network.edges) {
        edges.push_back({e.from, e.to, e.length_m, e.v_max_mps, e.reverse});
    }
    j["edges"] = edges;

    json buildings = json::array();
    for (const Building& b : s.buildings) {
        buildings.push_back({b.lo.x, b.lo.y, b.hi.x, b.hi.y});
    }
    j["buildings"] = buildings;

    json lights = json::array();
    for (const TrafficLight& l : s.traffic_lights) {
        lights.push_back({l.node, l.green_s, l.red_s, l.phase_s});
    }
    j["traffic_lights"] = lights;

    json sites = json::array();
    for (const RadioSite& site : s.radio.sites) {
        sites.push_back({{"kind", site.kind == SiteKind::ENodeB ? "enodeb" : "rsu"},
                         {"x", site.position.x},
                         {"y", site.position.y},
                         {"tx_power_dbm", site.tx_power_dbm},
                         {"antenna_gain_db", site.antenna_gain_db},
                         {"frequency_hz", site.frequency_hz}});
    }
    j["radio"] = {{"wall_attenuation_db", s.radio.wall_attenuation_db},
                  {"sites", sites},
                  {"lte", link_model_to_json(s.radio.lte)},
                  {"wifi", link_model_to_json(s.radio.wifi)}};
    return j.dump(2) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("scenario JSON parse error: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != "catsim-scenario") {
            throw ConfigError("not a scenario file");
        }
        Scenario s;
        const json& g = j.at("grid");
        s.grid = {g.at("blocks_x").get<int>(), g.at("blocks_y").get<int>(),
                  g.at("block_size_m").get<double>(), g.at("building_margin_m").get<double>()};
        s.v_max_mps = j.at("v_max_mps").get<double>();

        for (const auto& n : j.at("nodes")) {
            s.network.nodes.push_back({n.at(0).get<double>(), n.at(1).get<double>()});
        }
        s.network.out_edges.resize(s.network.nodes.size());
        for (const auto& e : j.at("edges")) {
            RoadEdge re{e.at(0).get<NodeId>(), e.at(1).get<NodeId>(), e.at(2).get<double>(),
                        e.at(3).get<double>(), e.at(4).get<EdgeId>()};
            const EdgeId id = static_cast<EdgeId>(s.network.edges.size());
            s.network.edges.push_back(re);
            s.network.out_edges.at(static_cast<size_t>(re.from)).push_back(id);
        }
        for (const auto& b : j.at("buildings")) {
            s.buildings.push_back({{b.at(0).get<double>(), b.at(1).get<double>()},
                                   {b.at(2).get<double>(), b.at(3).get<double>()}});
        }
        for (const auto& l : j.at("traffic_lights")) {
            s.traffic_lights.push_back({l.at(0).get<NodeId>(), l.at(1).get<double>(),
                                        l.at(2).get<double>(), l.at(3).get<double>()});
        }
        const json& r = j.at("radio");
        s.radio.wall_attenuation_db = r.at("wall_attenuation_db").get<double>();
        for (const auto& site : r.at("sites")) {
            RadioSite rs;
            rs.kind = site.at("kind").get<std::string>() == "enodeb" ? SiteKind::ENodeB
                                                                     : SiteKind::RSU;
            rs.position = {site.at("x").get<double>(), site.at("y").get<double>()};
            rs.tx_power_dbm = site.at("tx_power_dbm").get<double>();
            rs.antenna_gain_db = site.at("antenna_gain_db").get<double>();
            rs.frequency_hz = site.at("frequency_hz").get<double>();
            s.radio.sites.push_back(rs);
        }
        s.radio.lte = link_model_from_json(r.at("lte"));
        s.radio.wifi = link_model_from_json(r.at("wifi"));
        s.radio.buildings = s.buildings;

        s.validate();
        return s;
    } catch (const json::exception& e) {
        throw IoError(std::string("scenario JSON schema error: ") + e.what());
    }
}

void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open scenario file for writing: " + path);
    }
    out << scenario_to_json(s);
    if (!out) {
        throw IoError("failed writing scenario file: " + path);
    }
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open scenario file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(buf.str());
}

}  // namespace catsim
