#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "catsim/scenario.hpp"
#include "catsim/scheme.hpp"
#include "catsim/stats.hpp"

namespace catsim {

struct SimConfig {
    int vehicle_count = 150;
    double penetration = 0.10;
    double duration_s = 600.0;
    double mobility_tick_s = 0.1;
    double decision_tick_s = 1.0;  // sensor generation and scheme evaluation cadence
    std::uint64_t sensor_payload_bytes = 10000;
    SchemeKind scheme = SchemeKind::Pcat;
    InterfaceMode mode = InterfaceMode::Multi;
    PredictorKind predictor = PredictorKind::TrajectoryVel;
    SchemeParams params;
    KinematicParams kinematics;
    std::uint64_t seed = 1;
    bool evaluate_predictions = false;  // passive error evaluation, all predictors
    std::vector<double> eval_taus = {10.0, 30.0, 60.0};

    double warmup_s() const { return params.t_max_s; }
    void validate() const;  // throws ConfigError
};

// Optional per-run output files; empty path = not written.
struct RunOutputs {
    std::string events_csv;
    std::string transmissions_csv;
    std::string trajectory_csv;
    std::string prediction_csv;
};

struct TransmissionRecord {
    int vehicle = -1;
    InterfaceKind iface = InterfaceKind::LTE;
    double start_s = 0.0;
    std::uint64_t payload_bytes = 0;
    int chunks_attempted = 0;  // includes retries
    int chunks_succeeded = 0;
    int chunks_dropped = 0;
    double completion_s = 0.0;  // resolution time of the last chunk
    bool finished = false;
};

// Chunked buffer transfer: one chunk per sensor packet, channel looked up at
// every chunk start, failed chunks retried up to the link's max_retries and
// then dropped. The transfer owns the flushed packets until each resolves.
class ChunkTransfer {
public:
    ChunkTransfer(int vehicle, InterfaceKind iface, double start_s,
                  std::vector<SensorPacket> packets)
        : packets_(std::move(packets)), next_event_s_(start_s) {
        record_.vehicle = vehicle;
        record_.iface = iface;
        record_.start_s = start_s;
        for (const auto& p : packets_) record_.payload_bytes += static_cast<std::uint64_t>(p.size_bytes);
    }

    // Processes every chunk event scheduled at or before `now`. phi_at(t)
    // supplies the metric at a chunk-start instant; on_deliver(packet,
    // completion_s) and on_drop(packet) fire as chunks resolve.
    template <typename PhiFn, typename DeliverFn, typename DropFn>
    void pump(double now, const LinkModel& link, PhiFn&& phi_at, DeliverFn&& on_deliver,
              DropFn&& on_drop) {
        while (!done() && next_event_s_ <= now) {
            const double t = next_event_s_;
            const double phi = phi_at(t);
            const double rate = link_rate(phi, link);
            ++record_.chunks_attempted;
            if (chunk_success(phi, link) && rate > 0.0) {
                const SensorPacket& p = packets_[index_];
                const double airtime = static_cast<double>(p.size_bytes) * 8.0 / rate;
                const double completion = t + airtime;
                ++record_.chunks_succeeded;
                on_deliver(p, completion);
                advance(completion);
            } else if (++attempts_failed_ > link.max_retries) {
                ++record_.chunks_dropped;
                on_drop(packets_[index_]);
                advance(t + link.retry_interval_s);
            } else {
                next_event_s_ = t + link.retry_interval_s;
            }
        }
    }

    bool done() const { return index_ >= packets_.size(); }
    const TransmissionRecord& record() const { return record_; }
    InterfaceKind iface() const { return record_.iface; }

    // Packets not yet resolved (buffered-at-end accounting for truncated runs).
    std::vector<SensorPacket> unresolved() const {
        return {packets_.begin() + static_cast<std::ptrdiff_t>(index_), packets_.end()};
    }

private:
    void advance(double resolved_at) {
        ++index_;
        attempts_failed_ = 0;
        next_event_s_ = resolved_at;
        if (done()) {
            record_.completion_s = resolved_at;
            record_.finished = true;
        }
    }

    std::vector<SensorPacket> packets_;
    std::size_t index_ = 0;
    int attempts_failed_ = 0;
    double next_event_s_ = 0.0;
    TransmissionRecord record_;
};

// Runs a whole transfer against a scripted metric trace (no time cutoff).
template <typename PhiFn>
TransmissionRecord execute_transmission(int vehicle, InterfaceKind iface, double start_s,
                                        std::vector<SensorPacket> packets, const LinkModel& link,
                                        PhiFn&& phi_at,
                                        std::vector<std::pair<SensorPacket, double>>* delivered = nullptr,
                                        std::vector<SensorPacket>* dropped = nullptr) {
    ChunkTransfer tx(vehicle, iface, start_s, std::move(packets));
    tx.pump(
        std::numeric_limits<double>::infinity(), link, phi_at,
        [&](const SensorPacket& p, double completion) {
            if (delivered) delivered->emplace_back(p, completion);
        },
        [&](const SensorPacket& p) {
            if (dropped) dropped->push_back(p);
        });
    return tx.record();
}

/// Deterministic equipped-vehicle selection: round(penetration * count) ids,
/// drawn by partial shuffle from the selection stream, returned ascending.
std::vector<int> select_equipped(int vehicle_count, double penetration, std::uint64_t seed);

/// Executes one full simulation run. Bitwise deterministic for a fixed
/// scenario + config.
RunStatistics run_simulation(const Scenario& scenario, const SimConfig& config,
                             const RunOutputs& outputs = {});

const char* scheme_name(SchemeKind k);
const char* mode_name(InterfaceMode m);
const char* predictor_name(PredictorKind k);
SchemeKind parse_scheme(const std::string& s);        // throws ConfigError
InterfaceMode parse_mode(const std::string& s);       // throws ConfigError
PredictorKind parse_predictor(const std::string& s);  // throws ConfigError

/// Effective config as JSON (embedded in every summary for provenance).
std::string config_to_json(const SimConfig& config);

/// Applies a run-config JSON file on top of a config; unknown keys are errors.
void apply_config_json(SimConfig& config, const std::string& text);

/// Full run summary: effective config + statistics. Stable key order and
/// number formatting, byte-identical for identical runs.
std::string summary_to_json(const SimConfig& config, const RunStatistics& stats);

}  // namespace catsim
