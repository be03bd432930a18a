#pragma once

#include <optional>
#include <span>
#include <vector>

#include "catsim/geometry.hpp"
#include "catsim/mobility.hpp"

namespace catsim {

enum class InterfaceKind { LTE, WIFI };
enum class SiteKind { ENodeB, RSU };

constexpr InterfaceKind interface_of(SiteKind k) {
    return k == SiteKind::ENodeB ? InterfaceKind::LTE : InterfaceKind::WIFI;
}

struct RadioSite {
    SiteKind kind = SiteKind::ENodeB;
    Vec2 position;
    double tx_power_dbm = 33.0;
    double antenna_gain_db = 0.0;
    double frequency_hz = 1.8e9;
};

// Normalization range [phi_min, phi_max] for a channel metric, in dBm.
struct MetricRange {
    double phi_min_dbm = -140.0;
    double phi_max_dbm = -50.0;
};

struct MetricSample {
    InterfaceKind iface = InterfaceKind::LTE;
    double phi_dbm = 0.0;
    std::optional<int> serving_site;  // index into the site list
    double timestamp_s = 0.0;
};

struct RatePoint {
    double metric_dbm = 0.0;
    double rate_bps = 0.0;
};

// Per-interface link behavior: decision metric range, chunk-level delivery
// threshold, and the metric-to-rate mapping.
struct LinkModel {
    MetricRange metric_range;
    double sensitivity_dbm = -120.0;
    std::vector<RatePoint> rate_table;  // strictly increasing metric, non-decreasing rate
    int max_retries = 2;
    double retry_interval_s = 0.1;  // charged when the rate is zero at a failed attempt
    double path_loss_exponent = 2.75;
    double metric_offset_db = 0.0;  // subtracted from received power (RSRP per-RE offset)

    void validate() const;  // throws ConfigError
};

// Immutable radio world shared by every vehicle: sites, obstacles, and the
// per-interface link models.
struct RadioEnvironment {
    std::vector<RadioSite> sites;
    std::vector<Building> buildings;
    double wall_attenuation_db = 2.0;  // beta, per wall cut
    LinkModel lte;
    LinkModel wifi;

    const LinkModel& link(InterfaceKind iface) const {
        return iface == InterfaceKind::LTE ? lte : wifi;
    }
};

/// Log-distance path loss in dB: FSPL at 1 m plus 10*n*log10(d).
/// Distances below 0.1 m are clamped.
double path_loss(const Vec2& tx, const Vec2& rx, double frequency_hz, double exponent);

/// beta times the number of building wall cuts on the LOS segment.
double obstacle_attenuation(const Vec2& tx, const Vec2& rx, std::span<const Building> buildings,
                            double beta_db);

/// Received power from one site at a position, after path loss and obstacle
/// shadowing.
double received_power_dbm(const RadioEnvironment& env, int site_index, const Vec2& pos,
                          InterfaceKind iface);

/// Measures the channel metric at a position. LTE attaches to the strongest
/// eNodeB and reports RSRP (received power minus the per-RE offset); WIFI
/// attaches to the strongest RSU only if its RSSI reaches the sensitivity,
/// otherwise no serving site and phi = phi_min (an RSU-free world is legal).
/// The metric is clamped to its range. Throws ConfigError when no eNodeB
/// exists.
MetricSample measure_metric(const RadioEnvironment& env, const Vec2& pos, InterfaceKind iface,
                            double now_s);

/// Metric value at one position with the serving site pinned (handovers are
/// not part of the prediction process). Matches measure_metric when the
/// serving site would not change.
double metric_at_position(const RadioEnvironment& env, int serving_site, const Vec2& pos,
                          InterfaceKind iface);

/// Mean metric over explicit sample positions with the serving site pinned.
double predict_metric_mean(const RadioEnvironment& env, int serving_site,
                           std::span<const Vec2> positions, InterfaceKind iface);

/// Mean predicted metric over the horizon: the vehicle's position is predicted
/// at t+step, t+2*step, ..., t+tau and the metric evaluated there against the
/// current serving site. With no current WIFI serving site, returns phi_min.
double predict_metric_mean(const RadioEnvironment& env, const MetricSample& current,
                           VehicleState& vehicle, const RoadNetwork& net, PredictorKind kind,
                           double tau_s, double step_s);

/// Eq-style metric trend: mean predicted minus current, in raw dB.
inline double delta_phi(const MetricSample& current, double mean_predicted_dbm) {
    return mean_predicted_dbm - current.phi_dbm;
}

/// Piecewise-linear interpolation over the rate table, clamped at the ends;
/// zero below the sensitivity threshold.
double link_rate(double metric_dbm, const LinkModel& model);

/// Deterministic chunk delivery: success iff the metric reaches the
/// sensitivity threshold (inclusive) at the send instant.
inline bool chunk_success(double metric_dbm, const LinkModel& model) {
    return metric_dbm >= model.sensitivity_dbm;
}

}  // namespace catsim
