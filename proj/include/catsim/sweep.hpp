#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "catsim/engine.hpp"

namespace catsim {

// Cartesian experiment grid over the comparison axes. The base config supplies
// everything that is not an axis.
struct SweepSpec {
    std::vector<SchemeKind> schemes;
    std::vector<InterfaceMode> modes;
    std::vector<PredictorKind> predictors;
    std::vector<double> taus;
    std::vector<std::uint64_t> seeds;
    SimConfig base;
    int max_runs = 2000;

    void validate() const;  // throws ConfigError
    std::size_t run_count() const {
        return schemes.size() * modes.size() * predictors.size() * taus.size() * seeds.size();
    }
};

SweepSpec sweep_spec_from_json(const std::string& text);
SweepSpec load_sweep_spec(const std::string& path);

struct SweepRunResult {
    SchemeKind scheme = SchemeKind::Cat;
    InterfaceMode mode = InterfaceMode::Multi;
    PredictorKind predictor = PredictorKind::TrajectoryVel;
    double tau_s = 0.0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    SimConfig config;
    RunStatistics stats;
};

struct SweepResult {
    std::vector<SweepRunResult> runs;  // sorted by (scheme, mode, predictor, tau, seed)
    bool all_ok = false;
};

/// Builds the per-point config: the base with the axis values plugged in and
/// prediction evaluation enabled for the point's horizon.
SimConfig sweep_point_config(const SweepSpec& spec, SchemeKind scheme, InterfaceMode mode,
                             PredictorKind predictor, double tau_s, std::uint64_t seed);

/// Runs every cartesian point on a worker pool. Writes one summary JSON per
/// run plus combined.csv into out_dir (created if missing). The outputs are
/// byte-identical for any worker count. Failed runs are recorded per row.
SweepResult run_sweep(const Scenario& scenario, const SweepSpec& spec, int workers,
                      const std::string& out_dir);

/// The combined comparison table; stable column order, one row per run.
std::string combined_csv(const SweepResult& result);

std::string sweep_run_filename(const SweepRunResult& r);

}  // namespace catsim
