#include "catsim/channel.hpp"

#include <algorithm>
#include <cmath>

#include "catsim/errors.hpp"

namespace catsim {

void LinkModel::validate() const {
    if (!(metric_range.phi_min_dbm < metric_range.phi_max_dbm)) {
        throw ConfigError("metric range requires phi_min < phi_max");
    }
    if (rate_table.empty()) {
        throw ConfigError("rate table must not be empty");
    }
    for (size_t i = 0; i < rate_table.size(); ++i) {
        if (rate_table[i].rate_bps < 0.0) {
            throw ConfigError("rates must be non-negative");
        }
        if (i > 0) {
            if (rate_table[i].metric_dbm <= rate_table[i - 1].metric_dbm) {
                throw ConfigError("rate table metrics must be strictly increasing");
            }
            if (rate_table[i].rate_bps < rate_table[i - 1].rate_bps) {
                throw ConfigError("rate table rates must be non-decreasing");
            }
        }
    }
    if (max_retries < 0 || retry_interval_s <= 0.0) {
        throw ConfigError("invalid retry settings");
    }
    if (path_loss_exponent <= 0.0) {
        throw ConfigError("path loss exponent must be positive");
    }
}

double path_loss(const Vec2& tx, const Vec2& rx, double frequency_hz, double exponent) {
    const double d = std::max(distance(tx, rx), 0.1);
    // FSPL at the 1 m reference distance: 32.45 + 20 log10(f_MHz) - 60
    const double fspl_1m = 32.45 + 20.0 * std::log10(frequency_hz / 1.0e6) - 60.0;
    return fspl_1m + 10.0 * exponent * std::log10(d);
}

double obstacle_attenuation(const Vec2& tx, const Vec2& rx, std::span<const Building> buildings,
                            double beta_db) {
    return beta_db * count_wall_cuts(tx, rx, buildings);
}

double received_power_dbm(const RadioEnvironment& env, int site_index, const Vec2& pos,
                          InterfaceKind iface) {
    const RadioSite& site = env.sites[static_cast<size_t>(site_index)];
    const LinkModel& model = env.link(iface);
    return site.tx_power_dbm + site.antenna_gain_db -
           path_loss(site.position, pos, site.frequency_hz, model.path_loss_exponent) -
           obstacle_attenuation(site.position, pos, env.buildings, env.wall_attenuation_db);
}

namespace {

double clamp_to_range(double phi, const MetricRange& r) {
    return std::clamp(phi, r.phi_min_dbm, r.phi_max_dbm);
}

}  // namespace

MetricSample measure_metric(const RadioEnvironment& env, const Vec2& pos, InterfaceKind iface,
                            double now_s) {
    const SiteKind wanted = iface == InterfaceKind::LTE ? SiteKind::ENodeB : SiteKind::RSU;
    const LinkModel& model = env.link(iface);

    int best = -1;
    double best_rx = 0.0;
    for (size_t i = 0; i < env.sites.size(); ++i) {
        if (env.sites[i].kind != wanted) continue;
        const double rx = received_power_dbm(env, static_cast<int>(i), pos, iface);
        if (best < 0 || rx > best_rx) {
            best = static_cast<int>(i);
            best_rx = rx;
        }
    }
    MetricSample sample;
    sample.iface = iface;
    sample.timestamp_s = now_s;
    if (best < 0) {
        if (iface == InterfaceKind::LTE) {
            throw ConfigError("no eNodeB site in the scenario");
        }
        // A world without RSUs is legal: the WIFI metric floors out.
        sample.serving_site = std::nullopt;
        sample.phi_dbm = model.metric_range.phi_min_dbm;
        return sample;
    }
    if (iface == InterfaceKind::LTE) {
        sample.serving_site = best;
        sample.phi_dbm = clamp_to_range(best_rx - model.metric_offset_db, model.metric_range);
    } else {
        if (best_rx >= model.sensitivity_dbm) {
            sample.serving_site = best;
            sample.phi_dbm = clamp_to_range(best_rx, model.metric_range);
        } else {
            sample.serving_site = std::nullopt;
            sample.phi_dbm = model.metric_range.phi_min_dbm;
        }
    }
    return sample;
}

double metric_at_position(const RadioEnvironment& env, int serving_site, const Vec2& pos,
                          InterfaceKind iface) {
    const LinkModel& model = env.link(iface);
    const double rx = received_power_dbm(env, serving_site, pos, iface);
    if (iface == InterfaceKind::LTE) {
        return clamp_to_range(rx - model.metric_offset_db, model.metric_range);
    }
    if (rx < model.sensitivity_dbm) {
        return model.metric_range.phi_min_dbm;  // predicted coverage loss
    }
    return clamp_to_range(rx, model.metric_range);
}

double predict_metric_mean(const RadioEnvironment& env, int serving_site,
                           std::span<const Vec2> positions, InterfaceKind iface) {
    double sum = 0.0;
    for (const Vec2& p : positions) {
        sum += metric_at_position(env, serving_site, p, iface);
    }
    return positions.empty() ? env.link(iface).metric_range.phi_min_dbm
                             : sum / static_cast<double>(positions.size());
}

double predict_metric_mean(const RadioEnvironment& env, const MetricSample& current,
                           VehicleState& vehicle, const RoadNetwork& net, PredictorKind kind,
                           double tau_s, double step_s) {
    if (!current.serving_site.has_value()) {
        return env.link(current.iface).metric_range.phi_min_dbm;
    }
    const int n = std::max(1, static_cast<int>(std::floor(tau_s / step_s + 1e-9)));
    double sum = 0.0;
    for (int i = 1; i <= n; ++i) {
        const Vec2 p = predict_position(vehicle, net, kind, static_cast<double>(i) * step_s);
        sum += metric_at_position(env, *current.serving_site, p, current.iface);
    }
    return sum / static_cast<double>(n);
}

double link_rate(double metric_dbm, const LinkModel& model) {
    if (metric_dbm < model.sensitivity_dbm) {
        return 0.0;
    }
    const auto& table = model.rate_table;
    if (metric_dbm <= table.front().metric_dbm) {
        return table.front().rate_bps;
    }
    if (metric_dbm >= table.back().metric_dbm) {
        return table.back().rate_bps;
    }
    for (size_t i = 1; i < table.size(); ++i) {
        if (metric_dbm <= table[i].metric_dbm) {
            const double f = (metric_dbm - table[i - 1].metric_dbm) /
                             (table[i].metric_dbm - table[i - 1].metric_dbm);
            return table[i - 1].rate_bps + f * (table[i].rate_bps - table[i - 1].rate_bps);
        }
    }
    return table.back().rate_bps;
}

}  // namespace catsim
