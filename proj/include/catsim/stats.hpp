#pragma once

#include <cstdint>
#include <vector>

#include "catsim/channel.hpp"
#include "catsim/mobility.hpp"

namespace catsim {

// Order statistics use the nearest-rank method on a sorted copy.
struct DistSummary {
    std::size_t count = 0;
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    double p5 = 0.0;
    double p25 = 0.0;
    double p50 = 0.0;
    double p75 = 0.0;
    double p95 = 0.0;

    static DistSummary of(std::vector<double> values);
};

double percentile_nearest_rank(const std::vector<double>& sorted, double pct);

struct PacketCounts {
    std::uint64_t generated = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    std::uint64_t buffered_end = 0;

    bool conserved() const { return generated == delivered + dropped + buffered_end; }
};

struct VehicleStats {
    int vehicle = -1;
    PacketCounts all;      // every packet the vehicle generated
    PacketCounts counted;  // packets generated after warm-up
    std::uint64_t delivered_bytes = 0;  // counted packets only
    double goodput_bps = 0.0;
    double pdr = 0.0;
    double mean_age_s = 0.0;  // 0 when nothing was delivered
};

struct PredictionErrorStats {
    PredictorKind predictor = PredictorKind::Extrapolation;
    double tau_s = 0.0;
    DistSummary position_error_m;
    DistSummary lte_metric_error_db;
    DistSummary wifi_metric_error_db;
};

struct RunStatistics {
    PacketCounts all;
    PacketCounts counted;
    double goodput_mean_bps = 0.0;
    DistSummary goodput_per_vehicle_bps;
    DistSummary data_age_s;
    double pdr = 0.0;
    DistSummary pdr_per_vehicle;
    std::uint64_t delivered_bytes_lte = 0;
    std::uint64_t delivered_bytes_wifi = 0;
    double lte_share = 0.0;  // of counted delivered bytes; 0 when none
    double wifi_share = 0.0;
    DistSummary theta_at_tx;  // normalized metric of the chosen interface at send instants
    std::uint64_t transmissions = 0;
    std::vector<VehicleStats> per_vehicle;                // equipped vehicles, ascending id
    std::vector<PredictionErrorStats> prediction_errors;  // (predictor, tau) ascending
};

}  // namespace catsim
