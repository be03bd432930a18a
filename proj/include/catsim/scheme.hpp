#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "catsim/channel.hpp"

namespace catsim {

enum class SchemeKind { Periodic, Cat, Pcat };
enum class InterfaceMode { LteOnly, WifiOnly, Multi };

// Tuning parameters of the probabilistic transmission schemes. alpha shapes
// how strongly the probability favors high metric values; gamma1 scales the
// deferral when the channel is improving, gamma2 the advance when it
// degrades; [t_min, t_max] bounds the buffering duration; delta_t is the
// periodic baseline interval; tau the prediction horizon.
struct SchemeParams {
    double alpha = 8.0;
    double gamma1 = 3.0;
    double gamma2 = 0.5;
    double t_min_s = 10.0;
    double t_max_s = 60.0;
    double delta_t_s = 15.0;
    double tau_s = 60.0;
    double prediction_step_s = 1.0;

    void validate() const;  // throws ConfigError
};

struct SensorPacket {
    int64_t id = 0;
    double generated_s = 0.0;
    int size_bytes = 0;
    bool counted = true;  // generated inside the statistics window
};

// FIFO of pending sensor packets plus the last transmission time t'.
// A positive decision flushes the whole buffer.
struct TransmitBuffer {
    std::vector<SensorPacket> packets;
    double last_tx_s = 0.0;

    void push(SensorPacket p) { packets.push_back(std::move(p)); }
    std::vector<SensorPacket> flush(double now_s) {
        last_tx_s = now_s;
        return std::exchange(packets, {});
    }
    size_t total_bytes() const {
        size_t n = 0;
        for (const auto& p : packets) n += static_cast<size_t>(p.size_bytes);
        return n;
    }
};

// Everything a scheme evaluation needs for one interface.
struct InterfaceContext {
    InterfaceKind iface = InterfaceKind::LTE;
    double theta = 0.0;      // normalized metric, [0, 1]
    double delta_phi = 0.0;  // mean predicted minus current metric, dB
};

struct DecisionContext {
    std::vector<InterfaceContext> interfaces;
    double elapsed_s = 0.0;  // t - t'
};

struct Decision {
    bool transmit = false;
    InterfaceKind iface = InterfaceKind::LTE;
    double p_combined = 0.0;
};

/// Normalizes a metric to [0, 1] over its range; out-of-range inputs clamp.
double normalize_metric(double phi_dbm, const MetricRange& range);

/// Channel-aware transmission probability: 0 while elapsed <= t_min, 1 once
/// elapsed >= t_max, theta^alpha in between.
double cat_probability(double theta, double elapsed_s, const SchemeParams& params);

/// Predictive extension: the exponent is stretched by z1 when the channel is
/// expected to improve (defer) and divided by z2 when it is expected to
/// degrade (send earlier). Coincides with CAT when delta_phi is zero.
double pcat_probability(double theta, double delta_phi_db, double elapsed_s,
                        const SchemeParams& params);

/// Combined probability over the available interfaces: the maximum, with the
/// argmax as the selected interface. Ties resolve to WIFI (offload
/// preference). Throws ConfigError on an empty list.
std::pair<double, InterfaceKind> multi_interface_probability(
    std::span<const std::pair<InterfaceKind, double>> per_interface);

/// Naive periodic baseline: due once elapsed >= delta_t.
bool periodic_due(double elapsed_s, const SchemeParams& params);

/// Evaluates the chosen scheme over the context's interfaces and performs the
/// Bernoulli test on the combined probability with the supplied draw.
Decision decide(const DecisionContext& ctx, SchemeKind scheme, const SchemeParams& params,
                double rng_draw);

}  // namespace catsim
