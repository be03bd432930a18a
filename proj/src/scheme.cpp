#include "catsim/scheme.hpp"

#include <algorithm>
#include <cmath>

#include "catsim/errors.hpp"

namespace catsim {

void SchemeParams::validate() const {
    if (!(t_min_s > 0.0) || !(t_min_s < t_max_s)) {
        throw ConfigError("scheme requires 0 < t_min < t_max");
    }
    if (alpha <= 0.0 || gamma1 <= 0.0 || gamma2 <= 0.0) {
        throw ConfigError("alpha, gamma1, gamma2 must be positive");
    }
    if (delta_t_s <= 0.0) {
        throw ConfigError("periodic interval must be positive");
    }
    if (tau_s <= 0.0 || prediction_step_s <= 0.0 || prediction_step_s > tau_s) {
        throw ConfigError("prediction horizon requires 0 < step <= tau");
    }
}

double normalize_metric(double phi_dbm, const MetricRange& range) {
    const double theta =
        (phi_dbm - range.phi_min_dbm) / (range.phi_max_dbm - range.phi_min_dbm);
    return std::clamp(theta, 0.0, 1.0);
}

double cat_probability(double theta, double elapsed_s, const SchemeParams& params) {
    if (elapsed_s <= params.t_min_s) return 0.0;
    if (elapsed_s >= params.t_max_s) return 1.0;
    return std::pow(theta, params.alpha);
}

double pcat_probability(double theta, double delta_phi_db, double elapsed_s,
                        const SchemeParams& params) {
    if (elapsed_s <= params.t_min_s) return 0.0;
    if (elapsed_s >= params.t_max_s) return 1.0;
    if (delta_phi_db >= 0.0) {
        const double z1 = std::max(delta_phi_db * (1.0 - theta) * params.gamma1, 1.0);
        return std::pow(theta, params.alpha * z1);
    }
    const double z2 = std::max(std::abs(delta_phi_db * theta * params.gamma2), 1.0);
    return std::pow(theta, params.alpha / z2);
}

std::pair<double, InterfaceKind> multi_interface_probability(
    std::span<const std::pair<InterfaceKind, double>> per_interface) {
    if (per_interface.empty()) {
        throw ConfigError("multi_interface_probability on empty interface list");
    }
    double best_p = per_interface.front().second;
    InterfaceKind best_iface = per_interface.front().first;
    for (const auto& [iface, p] : per_interface.subspan(1)) {
        if (p > best_p || (p == best_p && iface == InterfaceKind::WIFI &&
                           best_iface != InterfaceKind::WIFI)) {
            best_p = p;
            best_iface = iface;
        }
    }
    return {best_p, best_iface};
}

bool periodic_due(double elapsed_s, const SchemeParams& params) {
    return elapsed_s >= params.delta_t_s;
}

Decision decide(const DecisionContext& ctx, SchemeKind scheme, const SchemeParams& params,
                double rng_draw) {
    std::vector<std::pair<InterfaceKind, double>> probabilities;
    probabilities.reserve(ctx.interfaces.size());
    for (const InterfaceContext& ic : ctx.interfaces) {
        double p = 0.0;
        switch (scheme) {
            case SchemeKind::Periodic:
                p = periodic_due(ctx.elapsed_s, params) ? 1.0 : 0.0;
                break;
            case SchemeKind::Cat:
                p = cat_probability(ic.theta, ctx.elapsed_s, params);
                break;
            case SchemeKind::Pcat:
                p = pcat_probability(ic.theta, ic.delta_phi, ctx.elapsed_s, params);
                break;
        }
        probabilities.emplace_back(ic.iface, p);
    }
    const auto [p_mi, iface] = multi_interface_probability(probabilities);
    return {rng_draw < p_mi, iface, p_mi};
}

}  // namespace catsim
