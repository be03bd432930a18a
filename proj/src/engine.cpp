#include "catsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <optional>
#include <string>

#include <json.hpp>

#include "catsim/errors.hpp"

namespace catsim {

using nlohmann::json;

void SimConfig::validate() const {
    if (vehicle_count < 0) {
        throw ConfigError("vehicle count must be non-negative");
    }
    if (penetration < 0.0 || penetration > 1.0) {
        throw ConfigError("penetration must be in [0, 1]");
    }
    if (!(duration_s > 0.0)) {
        throw ConfigError("duration must be positive");
    }
    if (!(mobility_tick_s > 0.0) || !(decision_tick_s > 0.0)) {
        throw ConfigError("ticks must be positive");
    }
    const double ratio = decision_tick_s / mobility_tick_s;
    if (std::abs(ratio - std::round(ratio)) > 1e-9) {
        throw ConfigError("decision tick must be a multiple of the mobility tick");
    }
    if (sensor_payload_bytes == 0) {
        throw ConfigError("sensor payload must be positive");
    }
    params.validate();
    if (!(duration_s > warmup_s())) {
        throw ConfigError("duration must exceed the warm-up window (t_max)");
    }
    if (!(kinematics.accel_mps2 > 0.0) || !(kinematics.decel_mps2 < 0.0)) {
        throw ConfigError("kinematics need positive acceleration and negative braking");
    }
    if (evaluate_predictions) {
        if (eval_taus.empty()) {
            throw ConfigError("prediction evaluation needs at least one horizon");
        }
        for (double tau : eval_taus) {
            const double k = tau / decision_tick_s;
            if (!(tau > 0.0) || std::abs(k - std::round(k)) > 1e-9) {
                throw ConfigError("evaluation horizons must be positive multiples of the decision tick");
            }
        }
    }
}

std::vector<int> select_equipped(int vehicle_count, double penetration, std::uint64_t seed) {
    if (vehicle_count < 0 || penetration < 0.0 || penetration > 1.0) {
        throw ConfigError("invalid equipped-vehicle selection inputs");
    }
    const int k = static_cast<int>(std::lround(penetration * vehicle_count));
    std::vector<int> ids(static_cast<size_t>(vehicle_count));
    std::iota(ids.begin(), ids.end(), 0);
    RandomStream rng = make_stream(seed, StreamTag::EquipSelection);
    for (int i = 0; i < k; ++i) {
        const size_t j = static_cast<size_t>(i) + rng.pick_index(ids.size() - static_cast<size_t>(i));
        std::swap(ids[static_cast<size_t>(i)], ids[j]);
    }
    ids.resize(static_cast<size_t>(k));
    std::sort(ids.begin(), ids.end());
    return ids;
}

const char* scheme_name(SchemeKind k) {
    switch (k) {
        case SchemeKind::Periodic: return "periodic";
        case SchemeKind::Cat: return "cat";
        case SchemeKind::Pcat: return "pcat";
    }
    return "?";
}

const char* mode_name(InterfaceMode m) {
    switch (m) {
        case InterfaceMode::LteOnly: return "lte";
        case InterfaceMode::WifiOnly: return "wifi";
        case InterfaceMode::Multi: return "multi";
    }
    return "?";
}

const char* predictor_name(PredictorKind k) {
    switch (k) {
        case PredictorKind::Extrapolation: return "extrapolation";
        case PredictorKind::TrajectoryVel: return "trajectory_vel";
        case PredictorKind::TrajectoryAcc: return "trajectory_acc";
    }
    return "?";
}

SchemeKind parse_scheme(const std::string& s) {
    if (s == "periodic") return SchemeKind::Periodic;
    if (s == "cat") return SchemeKind::Cat;
    if (s == "pcat") return SchemeKind::Pcat;
    throw ConfigError("unknown scheme: " + s);
}

InterfaceMode parse_mode(const std::string& s) {
    if (s == "lte") return InterfaceMode::LteOnly;
    if (s == "wifi") return InterfaceMode::WifiOnly;
    if (s == "multi") return InterfaceMode::Multi;
    throw ConfigError("unknown interface mode: " + s);
}

PredictorKind parse_predictor(const std::string& s) {
    if (s == "extrapolation") return PredictorKind::Extrapolation;
    if (s == "trajectory_vel") return PredictorKind::TrajectoryVel;
    if (s == "trajectory_acc") return PredictorKind::TrajectoryAcc;
    throw ConfigError("unknown predictor: " + s);
}

namespace {

constexpr double kTimeEps = 1e-9;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct CsvFile {
    std::ofstream out;

    explicit operator bool() const { return out.is_open(); }
    void open(const std::string& path, const char* header) {
        out.open(path, std::ios::binary);
        if (!out) {
            throw IoError("cannot open output file: " + path);
        }
        out << header << '\n';
    }
    void row(const std::string& line) { out << line << '\n'; }
};

void add_counts(PacketCounts& into, const PacketCounts& from) {
    into.generated += from.generated;
    into.delivered += from.delivered;
    into.dropped += from.dropped;
    into.buffered_end += from.buffered_end;
}

struct EquippedSlot {
    int vehicle = -1;
    TransmitBuffer buffer;
    std::optional<ChunkTransfer> tx;
    RandomStream decision_rng;
    PacketCounts all;
    PacketCounts counted;
    std::uint64_t delivered_bytes = 0;
    std::vector<double> ages;
};

struct PendingPrediction {
    int slot = -1;
    PredictorKind predictor = PredictorKind::Extrapolation;
    double tau_s = 0.0;
    int t0_tick = 0;
    Vec2 predicted_pos;
    std::optional<double> phi_bar_lte;  // engaged when the interface had a serving site at t0
    std::optional<double> phi_bar_wifi;
    int site_lte = -1;
    int site_wifi = -1;
};

}  // namespace

RunStatistics run_simulation(const Scenario& scenario, const SimConfig& config,
                             const RunOutputs& outputs) {
    config.validate();
    scenario.validate();

    const RoadNetwork& net = scenario.network;
    const RadioEnvironment& radio = scenario.radio;
    const TrafficLightSchedule lights(scenario.traffic_lights, net.nodes.size());
    const SchemeParams& params = config.params;
    const double warmup = config.warmup_s();

    const bool uses_lte = config.mode != InterfaceMode::WifiOnly;
    const bool uses_wifi = config.mode != InterfaceMode::LteOnly;
    const bool has_enodeb =
        std::any_of(radio.sites.begin(), radio.sites.end(),
                    [](const RadioSite& s) { return s.kind == SiteKind::ENodeB; });
    if (uses_lte && !has_enodeb) {
        throw ConfigError("the selected interface mode needs at least one eNodeB");
    }

    CsvFile events, transmissions, trajectory, prediction;
    if (!outputs.events_csv.empty()) {
        events.open(outputs.events_csv,
                    "t_s,vehicle,elapsed_s,theta_lte,delta_phi_lte,theta_wifi,delta_phi_wifi,"
                    "p,iface,draw,transmit");
    }
    if (!outputs.transmissions_csv.empty()) {
        transmissions.open(outputs.transmissions_csv,
                           "vehicle,iface,start_s,payload_bytes,chunks_attempted,"
                           "chunks_succeeded,chunks_dropped,completion_s,finished");
    }
    if (!outputs.trajectory_csv.empty()) {
        trajectory.open(outputs.trajectory_csv, "t_s,vehicle,equipped,x_m,y_m,speed_mps");
    }
    if (!outputs.prediction_csv.empty()) {
        prediction.open(outputs.prediction_csv,
                        "t0_s,vehicle,predictor,tau_s,predicted_x_m,predicted_y_m,actual_x_m,"
                        "actual_y_m,position_error_m,lte_error_db,wifi_error_db");
    }

    const std::vector<int> equipped_ids =
        select_equipped(config.vehicle_count, config.penetration, config.seed);
    std::vector<bool> is_equipped(static_cast<size_t>(config.vehicle_count), false);
    for (int id : equipped_ids) is_equipped[static_cast<size_t>(id)] = true;

    RandomStream placement = make_stream(config.seed, StreamTag::Placement);
    std::vector<VehicleState> vehicles(static_cast<size_t>(config.vehicle_count));
    for (int i = 0; i < config.vehicle_count; ++i) {
        VehicleState& v = vehicles[static_cast<size_t>(i)];
        v.id = i;
        v.equipped = is_equipped[static_cast<size_t>(i)];
        v.edge = static_cast<EdgeId>(placement.pick_index(net.edges.size()));
        v.offset_m = placement.u01() * net.edge(v.edge).length_m;
        v.speed_mps = net.edge(v.edge).v_max_mps;
        v.route_rng = make_stream(config.seed, StreamTag::VehicleRoute, static_cast<uint64_t>(i));
    }

    std::vector<EquippedSlot> slots(equipped_ids.size());
    for (size_t s = 0; s < slots.size(); ++s) {
        slots[s].vehicle = equipped_ids[s];
        slots[s].decision_rng = make_stream(config.seed, StreamTag::VehicleDecision,
                                            static_cast<uint64_t>(equipped_ids[s]));
    }

    const long n_steps = std::lround(config.duration_s / config.mobility_tick_s);
    const long dec_every = std::lround(config.decision_tick_s / config.mobility_tick_s);
    const int n_dec = static_cast<int>((n_steps + dec_every - 1) / dec_every);

    std::vector<std::vector<Vec2>> pos_history(slots.size());
    for (auto& h : pos_history) h.resize(static_cast<size_t>(n_dec));
    std::vector<std::vector<PendingPrediction>> pending_by_tick(static_cast<size_t>(n_dec));

    std::vector<double> eval_taus = config.eval_taus;
    std::sort(eval_taus.begin(), eval_taus.end());
    eval_taus.erase(std::unique(eval_taus.begin(), eval_taus.end()), eval_taus.end());
    const std::vector<PredictorKind> all_predictors = {
        PredictorKind::Extrapolation, PredictorKind::TrajectoryVel, PredictorKind::TrajectoryAcc};
    struct ErrorAccum {
        std::vector<double> position, lte, wifi;
    };
    std::vector<ErrorAccum> accum(all_predictors.size() * eval_taus.size());
    auto accum_index = [&](PredictorKind p, size_t tau_idx) {
        return static_cast<size_t>(p) * eval_taus.size() + tau_idx;
    };

    std::vector<double> all_ages;
    std::vector<double> theta_tx;
    std::uint64_t bytes_lte = 0;
    std::uint64_t bytes_wifi = 0;
    std::uint64_t tx_count = 0;
    std::int64_t next_packet_id = 0;

    auto write_tx_row = [&](const TransmissionRecord& r) {
        if (!transmissions) return;
        transmissions.row(std::to_string(r.vehicle) + "," +
                          (r.iface == InterfaceKind::LTE ? "lte" : "wifi") + "," +
                          num(r.start_s) + "," + std::to_string(r.payload_bytes) + "," +
                          std::to_string(r.chunks_attempted) + "," +
                          std::to_string(r.chunks_succeeded) + "," +
                          std::to_string(r.chunks_dropped) + "," +
                          (r.finished ? num(r.completion_s) : std::string()) + "," +
                          (r.finished ? "1" : "0"));
    };

    // Drains every chunk event due by `now`. With phi_fixed the caller already
    // measured the channel for this instant; otherwise it is measured lazily
    // at the vehicle's current position. Unattached WIFI cannot deliver.
    auto pump_transfer = [&](EquippedSlot& slot, double now, std::optional<double> phi_fixed) {
        if (!slot.tx) return;
        const InterfaceKind iface = slot.tx->iface();
        const LinkModel& link = radio.link(iface);
        VehicleState& veh = vehicles[static_cast<size_t>(slot.vehicle)];
        auto phi_at = [&](double) {
            if (!phi_fixed) {
                const MetricSample m = measure_metric(radio, veh.position(net), iface, now);
                phi_fixed = m.serving_site ? m.phi_dbm : -std::numeric_limits<double>::infinity();
            }
            return *phi_fixed;
        };
        slot.tx->pump(
            now, link, phi_at,
            [&](const SensorPacket& p, double completion) {
                ++slot.all.delivered;
                if (p.counted) {
                    ++slot.counted.delivered;
                    slot.delivered_bytes += static_cast<std::uint64_t>(p.size_bytes);
                    (iface == InterfaceKind::LTE ? bytes_lte : bytes_wifi) +=
                        static_cast<std::uint64_t>(p.size_bytes);
                    const double age = completion - p.generated_s;
                    slot.ages.push_back(age);
                    all_ages.push_back(age);
                }
            },
            [&](const SensorPacket& p) {
                ++slot.all.dropped;
                if (p.counted) ++slot.counted.dropped;
            });
        if (slot.tx->done()) {
            write_tx_row(slot.tx->record());
            slot.tx.reset();
        }
    };

    for (long step = 0; step <= n_steps; ++step) {
        const double t = static_cast<double>(step) * config.mobility_tick_s;
        if (step > 0) {
            for (VehicleState& v : vehicles) {
                step_vehicle(v, net, lights, config.kinematics, config.mobility_tick_s, t);
            }
        }
        for (EquippedSlot& slot : slots) {
            pump_transfer(slot, t, std::nullopt);
        }
        if (step % dec_every != 0 || step >= n_steps) continue;

        const int dtick = static_cast<int>(step / dec_every);
        const bool in_window = t >= warmup - kTimeEps;

        if (trajectory) {
            for (const VehicleState& v : vehicles) {
                const Vec2 p = v.position(net);
                trajectory.row(num(t) + "," + std::to_string(v.id) + "," +
                               (v.equipped ? "1" : "0") + "," + num(p.x) + "," + num(p.y) + "," +
                               num(v.speed_mps));
            }
        }

        for (size_t si = 0; si < slots.size(); ++si) {
            pos_history[si][static_cast<size_t>(dtick)] =
                vehicles[static_cast<size_t>(slots[si].vehicle)].position(net);
        }

        for (const PendingPrediction& p : pending_by_tick[static_cast<size_t>(dtick)]) {
            const auto& hist = pos_history[static_cast<size_t>(p.slot)];
            const Vec2 actual = hist[static_cast<size_t>(dtick)];
            const double pos_err = position_error(p.predicted_pos, actual);
            const size_t tau_idx = static_cast<size_t>(
                std::lower_bound(eval_taus.begin(), eval_taus.end(), p.tau_s - kTimeEps) -
                eval_taus.begin());
            ErrorAccum& acc = accum[accum_index(p.predictor, tau_idx)];
            acc.position.push_back(pos_err);
            const int n_samples = dtick - p.t0_tick;
            std::optional<double> lte_err, wifi_err;
            if (p.phi_bar_lte) {
                double sum = 0.0;
                for (int i = 1; i <= n_samples; ++i) {
                    sum += metric_at_position(radio, p.site_lte,
                                              hist[static_cast<size_t>(p.t0_tick + i)],
                                              InterfaceKind::LTE);
                }
                lte_err = std::abs(*p.phi_bar_lte - sum / n_samples);
                acc.lte.push_back(*lte_err);
            }
            if (p.phi_bar_wifi) {
                double sum = 0.0;
                for (int i = 1; i <= n_samples; ++i) {
                    sum += metric_at_position(radio, p.site_wifi,
                                              hist[static_cast<size_t>(p.t0_tick + i)],
                                              InterfaceKind::WIFI);
                }
                wifi_err = std::abs(*p.phi_bar_wifi - sum / n_samples);
                acc.wifi.push_back(*wifi_err);
            }
            if (prediction) {
                prediction.row(num(p.t0_tick * config.decision_tick_s) + "," +
                               std::to_string(slots[static_cast<size_t>(p.slot)].vehicle) + "," +
                               predictor_name(p.predictor) + "," + num(p.tau_s) + "," +
                               num(p.predicted_pos.x) + "," + num(p.predicted_pos.y) + "," +
                               num(actual.x) + "," + num(actual.y) + "," + num(pos_err) + "," +
                               (lte_err ? num(*lte_err) : std::string()) + "," +
                               (wifi_err ? num(*wifi_err) : std::string()));
            }
        }
        pending_by_tick[static_cast<size_t>(dtick)].clear();
        pending_by_tick[static_cast<size_t>(dtick)].shrink_to_fit();

        for (size_t si = 0; si < slots.size(); ++si) {
            EquippedSlot& slot = slots[si];
            VehicleState& veh = vehicles[static_cast<size_t>(slot.vehicle)];
            const Vec2 pos = pos_history[si][static_cast<size_t>(dtick)];

            SensorPacket pkt;
            pkt.id = next_packet_id++;
            pkt.generated_s = t;
            pkt.size_bytes = static_cast<int>(config.sensor_payload_bytes);
            pkt.counted = in_window;
            slot.buffer.push(pkt);
            ++slot.all.generated;
            if (pkt.counted) ++slot.counted.generated;

            std::optional<MetricSample> m_lte, m_wifi;
            if (uses_lte || (config.evaluate_predictions && has_enodeb)) {
                m_lte = measure_metric(radio, pos, InterfaceKind::LTE, t);
            }
            if (uses_wifi || config.evaluate_predictions) {
                m_wifi = measure_metric(radio, pos, InterfaceKind::WIFI, t);
            }

            if (config.evaluate_predictions && in_window) {
                for (PredictorKind pred : all_predictors) {
                    for (double tau : eval_taus) {
                        const int k = static_cast<int>(std::lround(tau / config.decision_tick_s));
                        if (dtick + k >= n_dec) continue;
                        PendingPrediction pp;
                        pp.slot = static_cast<int>(si);
                        pp.predictor = pred;
                        pp.tau_s = tau;
                        pp.t0_tick = dtick;
                        pp.predicted_pos = predict_position(veh, net, pred, tau);
                        if (m_lte && m_lte->serving_site) {
                            pp.site_lte = *m_lte->serving_site;
                            pp.phi_bar_lte = predict_metric_mean(radio, *m_lte, veh, net, pred,
                                                                 tau, config.decision_tick_s);
                        }
                        if (m_wifi && m_wifi->serving_site) {
                            pp.site_wifi = *m_wifi->serving_site;
                            pp.phi_bar_wifi = predict_metric_mean(radio, *m_wifi, veh, net, pred,
                                                                  tau, config.decision_tick_s);
                        }
                        pending_by_tick[static_cast<size_t>(dtick + k)].push_back(pp);
                    }
                }
            }

            if (slot.tx) continue;  // one transfer at a time

            DecisionContext ctx;
            ctx.elapsed_s = t - slot.buffer.last_tx_s;
            std::optional<double> th_lte, th_wifi;
            double dphi_lte = 0.0;
            double dphi_wifi = 0.0;
            // An interface is a transmission candidate only while in service:
            // LTE needs RSRP at or above the receiver sensitivity, WIFI an
            // associated RSU. Out-of-service attempts would only burn retries.
            if (uses_lte && chunk_success(m_lte->phi_dbm, radio.lte)) {
                th_lte = normalize_metric(m_lte->phi_dbm, radio.lte.metric_range);
                if (config.scheme == SchemeKind::Pcat) {
                    dphi_lte = delta_phi(*m_lte,
                                         predict_metric_mean(radio, *m_lte, veh, net,
                                                             config.predictor, params.tau_s,
                                                             params.prediction_step_s));
                }
                ctx.interfaces.push_back({InterfaceKind::LTE, *th_lte, dphi_lte});
            }
            if (uses_wifi && m_wifi->serving_site) {  // only an associated RSU can carry data
                th_wifi = normalize_metric(m_wifi->phi_dbm, radio.wifi.metric_range);
                if (config.scheme == SchemeKind::Pcat) {
                    dphi_wifi = delta_phi(*m_wifi,
                                          predict_metric_mean(radio, *m_wifi, veh, net,
                                                              config.predictor, params.tau_s,
                                                              params.prediction_step_s));
                }
                ctx.interfaces.push_back({InterfaceKind::WIFI, *th_wifi, dphi_wifi});
            }
            if (ctx.interfaces.empty()) {
                // Out of coverage entirely. The buffering bound still applies:
                // data that could not be sent within t_max is stale, discard it.
                auto& pkts = slot.buffer.packets;
                const auto is_stale = [&](const SensorPacket& p) {
                    return t - p.generated_s >= params.t_max_s - kTimeEps;
                };
                for (const SensorPacket& p : pkts) {
                    if (!is_stale(p)) continue;
                    ++slot.all.dropped;
                    if (p.counted) ++slot.counted.dropped;
                }
                std::erase_if(pkts, is_stale);
                continue;
            }

            const double draw = slot.decision_rng.u01();
            const Decision d = decide(ctx, config.scheme, params, draw);
            if (events) {
                events.row(num(t) + "," + std::to_string(slot.vehicle) + "," +
                           num(ctx.elapsed_s) + "," +
                           (th_lte ? num(*th_lte) : std::string()) + "," +
                           (th_lte ? num(dphi_lte) : std::string()) + "," +
                           (th_wifi ? num(*th_wifi) : std::string()) + "," +
                           (th_wifi ? num(dphi_wifi) : std::string()) + "," +
                           num(d.p_combined) + "," +
                           (d.iface == InterfaceKind::LTE ? "lte" : "wifi") + "," + num(draw) +
                           "," + (d.transmit ? "1" : "0"));
            }
            if (!d.transmit) continue;

            if (in_window) {
                theta_tx.push_back(d.iface == InterfaceKind::LTE ? *th_lte : *th_wifi);
            }
            ++tx_count;
            std::vector<SensorPacket> flushed = slot.buffer.flush(t);
            slot.tx.emplace(slot.vehicle, d.iface, t, std::move(flushed));
            const double phi_now =
                d.iface == InterfaceKind::LTE ? m_lte->phi_dbm : m_wifi->phi_dbm;
            pump_transfer(slot, t, phi_now);
        }
    }

    RunStatistics st;
    std::vector<double> goodputs, pdrs;
    const double window = config.duration_s - warmup;
    for (EquippedSlot& slot : slots) {
        for (const SensorPacket& p : slot.buffer.packets) {
            ++slot.all.buffered_end;
            if (p.counted) ++slot.counted.buffered_end;
        }
        if (slot.tx) {
            write_tx_row(slot.tx->record());
            for (const SensorPacket& p : slot.tx->unresolved()) {
                ++slot.all.buffered_end;
                if (p.counted) ++slot.counted.buffered_end;
            }
        }

        VehicleStats vs;
        vs.vehicle = slot.vehicle;
        vs.all = slot.all;
        vs.counted = slot.counted;
        vs.delivered_bytes = slot.delivered_bytes;
        vs.goodput_bps = static_cast<double>(slot.delivered_bytes) * 8.0 / window;
        const std::uint64_t denom = slot.counted.generated - slot.counted.buffered_end;
        vs.pdr = denom > 0 ? static_cast<double>(slot.counted.delivered) /
                                 static_cast<double>(denom)
                           : 0.0;
        vs.mean_age_s =
            slot.ages.empty()
                ? 0.0
                : std::accumulate(slot.ages.begin(), slot.ages.end(), 0.0) /
                      static_cast<double>(slot.ages.size());
        st.per_vehicle.push_back(vs);
        add_counts(st.all, slot.all);
        add_counts(st.counted, slot.counted);
        goodputs.push_back(vs.goodput_bps);
        pdrs.push_back(vs.pdr);
    }

    st.goodput_mean_bps =
        goodputs.empty() ? 0.0
                         : std::accumulate(goodputs.begin(), goodputs.end(), 0.0) /
                               static_cast<double>(goodputs.size());
    st.goodput_per_vehicle_bps = DistSummary::of(goodputs);
    st.data_age_s = DistSummary::of(std::move(all_ages));
    const std::uint64_t agg_denom = st.counted.generated - st.counted.buffered_end;
    st.pdr = agg_denom > 0
                 ? static_cast<double>(st.counted.delivered) / static_cast<double>(agg_denom)
                 : 0.0;
    st.pdr_per_vehicle = DistSummary::of(std::move(pdrs));
    st.delivered_bytes_lte = bytes_lte;
    st.delivered_bytes_wifi = bytes_wifi;
    const std::uint64_t total_bytes = bytes_lte + bytes_wifi;
    st.lte_share = total_bytes > 0 ? static_cast<double>(bytes_lte) / total_bytes : 0.0;
    st.wifi_share = total_bytes > 0 ? static_cast<double>(bytes_wifi) / total_bytes : 0.0;
    st.theta_at_tx = DistSummary::of(std::move(theta_tx));
    st.transmissions = tx_count;

    if (config.evaluate_predictions) {
        for (PredictorKind pred : all_predictors) {
            for (size_t ti = 0; ti < eval_taus.size(); ++ti) {
                ErrorAccum& acc = accum[accum_index(pred, ti)];
                PredictionErrorStats pes;
                pes.predictor = pred;
                pes.tau_s = eval_taus[ti];
                pes.position_error_m = DistSummary::of(std::move(acc.position));
                pes.lte_metric_error_db = DistSummary::of(std::move(acc.lte));
                pes.wifi_metric_error_db = DistSummary::of(std::move(acc.wifi));
                st.prediction_errors.push_back(std::move(pes));
            }
        }
    }
    return st;
}

namespace {

json config_json(const SimConfig& c) {
    return {{"vehicle_count", c.vehicle_count},
            {"penetration", c.penetration},
            {"duration_s", c.duration_s},
            {"mobility_tick_s", c.mobility_tick_s},
            {"decision_tick_s", c.decision_tick_s},
            {"sensor_payload_bytes", c.sensor_payload_bytes},
            {"scheme", scheme_name(c.scheme)},
            {"mode", mode_name(c.mode)},
            {"predictor", predictor_name(c.predictor)},
            {"seed", c.seed},
            {"evaluate_predictions", c.evaluate_predictions},
            {"eval_taus", c.eval_taus},
            {"warmup_s", c.warmup_s()},
            {"params",
             {{"alpha", c.params.alpha},
              {"gamma1", c.params.gamma1},
              {"gamma2", c.params.gamma2},
              {"t_min_s", c.params.t_min_s},
              {"t_max_s", c.params.t_max_s},
              {"delta_t_s", c.params.delta_t_s},
              {"tau_s", c.params.tau_s},
              {"prediction_step_s", c.params.prediction_step_s}}},
            {"kinematics",
             {{"accel_mps2", c.kinematics.accel_mps2},
              {"decel_mps2", c.kinematics.decel_mps2}}}};
}

json dist_json(const DistSummary& d) {
    return {{"count", d.count}, {"mean", d.mean}, {"min", d.min}, {"max", d.max},
            {"p5", d.p5},       {"p25", d.p25},   {"p50", d.p50}, {"p75", d.p75},
            {"p95", d.p95}};
}

json counts_json(const PacketCounts& c) {
    return {{"generated", c.generated},
            {"delivered", c.delivered},
            {"dropped", c.dropped},
            {"buffered_end", c.buffered_end}};
}

void apply_params_json(SchemeParams& p, const json& j) {
    for (const auto& [key, value] : j.items()) {
        if (key == "alpha") p.alpha = value.get<double>();
        else if (key == "gamma1") p.gamma1 = value.get<double>();
        else if (key == "gamma2") p.gamma2 = value.get<double>();
        else if (key == "t_min_s") p.t_min_s = value.get<double>();
        else if (key == "t_max_s") p.t_max_s = value.get<double>();
        else if (key == "delta_t_s") p.delta_t_s = value.get<double>();
        else if (key == "tau_s") p.tau_s = value.get<double>();
        else if (key == "prediction_step_s") p.prediction_step_s = value.get<double>();
        else throw ConfigError("unknown scheme parameter: " + key);
    }
}

}  // namespace

std::string config_to_json(const SimConfig& config) { return config_json(config).dump(2) + "\n"; }

void apply_config_json(SimConfig& config, const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("run config parse error: ") + e.what());
    }
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "vehicle_count") config.vehicle_count = value.get<int>();
            else if (key == "penetration") config.penetration = value.get<double>();
            else if (key == "duration_s") config.duration_s = value.get<double>();
            else if (key == "mobility_tick_s") config.mobility_tick_s = value.get<double>();
            else if (key == "decision_tick_s") config.decision_tick_s = value.get<double>();
            else if (key == "sensor_payload_bytes") config.sensor_payload_bytes = value.get<std::uint64_t>();
            else if (key == "scheme") config.scheme = parse_scheme(value.get<std::string>());
            else if (key == "mode") config.mode = parse_mode(value.get<std::string>());
            else if (key == "predictor") config.predictor = parse_predictor(value.get<std::string>());
            else if (key == "seed") config.seed = value.get<std::uint64_t>();
            else if (key == "evaluate_predictions") config.evaluate_predictions = value.get<bool>();
            else if (key == "eval_taus") config.eval_taus = value.get<std::vector<double>>();
            else if (key == "warmup_s") throw ConfigError("warmup is derived from t_max, not configurable");
            else if (key == "params") apply_params_json(config.params, value);
            else if (key == "kinematics") {
                for (const auto& [k2, v2] : value.items()) {
                    if (k2 == "accel_mps2") config.kinematics.accel_mps2 = v2.get<double>();
                    else if (k2 == "decel_mps2") config.kinematics.decel_mps2 = v2.get<double>();
                    else throw ConfigError("unknown kinematics parameter: " + k2);
                }
            } else throw ConfigError("unknown run config key: " + key);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("run config schema error: ") + e.what());
    }
}

std::string summary_to_json(const SimConfig& config, const RunStatistics& stats) {
    json per_vehicle = json::array();
    for (const VehicleStats& vs : stats.per_vehicle) {
        per_vehicle.push_back({{"vehicle", vs.vehicle},
                               {"all", counts_json(vs.all)},
                               {"counted", counts_json(vs.counted)},
                               {"delivered_bytes", vs.delivered_bytes},
                               {"goodput_bps", vs.goodput_bps},
                               {"pdr", vs.pdr},
                               {"mean_age_s", vs.mean_age_s}});
    }
    json prediction = json::array();
    for (const PredictionErrorStats& pe : stats.prediction_errors) {
        prediction.push_back({{"predictor", predictor_name(pe.predictor)},
                              {"tau_s", pe.tau_s},
                              {"position_error_m", dist_json(pe.position_error_m)},
                              {"lte_metric_error_db", dist_json(pe.lte_metric_error_db)},
                              {"wifi_metric_error_db", dist_json(pe.wifi_metric_error_db)}});
    }
    json j = {{"format", "catsim-summary"},
              {"version", 1},
              {"config", config_json(config)},
              {"results",
               {{"packets_all", counts_json(stats.all)},
                {"packets_counted", counts_json(stats.counted)},
                {"goodput_mean_bps", stats.goodput_mean_bps},
                {"goodput_per_vehicle_bps", dist_json(stats.goodput_per_vehicle_bps)},
                {"data_age_s", dist_json(stats.data_age_s)},
                {"pdr", stats.pdr},
                {"pdr_per_vehicle", dist_json(stats.pdr_per_vehicle)},
                {"delivered_bytes_lte", stats.delivered_bytes_lte},
                {"delivered_bytes_wifi", stats.delivered_bytes_wifi},
                {"lte_share", stats.lte_share},
                {"wifi_share", stats.wifi_share},
                {"theta_at_tx", dist_json(stats.theta_at_tx)},
                {"transmissions", stats.transmissions},
                {"per_vehicle", per_vehicle},
                {"prediction_errors", prediction}}}};
    return j.dump(2) + "\n";
}

}  // namespace catsim
