#include "catsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "catsim/errors.hpp"

namespace catsim {

using nlohmann::json;

void SweepSpec::validate() const {
    if (schemes.empty() || modes.empty() || predictors.empty() || taus.empty() || seeds.empty()) {
        throw ConfigError("every sweep axis needs at least one value");
    }
    for (double tau : taus) {
        if (!(tau > 0.0)) {
            throw ConfigError("sweep horizons must be positive");
        }
    }
    if (max_runs < 1) {
        throw ConfigError("max_runs must be positive");
    }
    if (run_count() > static_cast<std::size_t>(max_runs)) {
        throw ConfigError("sweep grid exceeds max_runs (" + std::to_string(run_count()) + " > " +
                          std::to_string(max_runs) + ")");
    }
    base.validate();  // a base that can never run makes every point fail
}

SweepSpec sweep_spec_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("sweep spec parse error: ") + e.what());
    }
    SweepSpec spec;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "schemes") {
                for (const auto& s : value) spec.schemes.push_back(parse_scheme(s.get<std::string>()));
            } else if (key == "modes") {
                for (const auto& s : value) spec.modes.push_back(parse_mode(s.get<std::string>()));
            } else if (key == "predictors") {
                for (const auto& s : value)
                    spec.predictors.push_back(parse_predictor(s.get<std::string>()));
            } else if (key == "taus") {
                spec.taus = value.get<std::vector<double>>();
            } else if (key == "seeds") {
                spec.seeds = value.get<std::vector<std::uint64_t>>();
            } else if (key == "max_runs") {
                spec.max_runs = value.get<int>();
            } else if (key == "base") {
                apply_config_json(spec.base, value.dump());
            } else {
                throw ConfigError("unknown sweep spec key: " + key);
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("sweep spec schema error: ") + e.what());
    }
    spec.validate();
    return spec;
}

SweepSpec load_sweep_spec(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open sweep spec: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return sweep_spec_from_json(buf.str());
}

SimConfig sweep_point_config(const SweepSpec& spec, SchemeKind scheme, InterfaceMode mode,
                             PredictorKind predictor, double tau_s, std::uint64_t seed) {
    SimConfig c = spec.base;
    c.scheme = scheme;
    c.mode = mode;
    c.predictor = predictor;
    c.params.tau_s = tau_s;
    c.seed = seed;
    c.evaluate_predictions = true;
    c.eval_taus = {tau_s};
    return c;
}

std::string sweep_run_filename(const SweepRunResult& r) {
    char tau[32];
    std::snprintf(tau, sizeof tau, "%g", r.tau_s);
    return std::string("run_") + scheme_name(r.scheme) + "_" + mode_name(r.mode) + "_" +
           predictor_name(r.predictor) + "_tau" + tau + "_seed" + std::to_string(r.seed) +
           ".json";
}

namespace {

std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Empty field when the run produced no samples for the distribution.
std::string mean_or_empty(const DistSummary& d) { return d.count > 0 ? num17(d.mean) : ""; }

}  // namespace

SweepResult run_sweep(const Scenario& scenario, const SweepSpec& spec, int workers,
                      const std::string& out_dir) {
    spec.validate();
    if (workers < 1) {
        throw ConfigError("worker count must be positive");
    }
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw IoError("cannot create output directory: " + out_dir + " (" + ec.message() + ")");
    }

    SweepResult result;
    for (SchemeKind scheme : spec.schemes) {
        for (InterfaceMode mode : spec.modes) {
            for (PredictorKind predictor : spec.predictors) {
                for (double tau : spec.taus) {
                    for (std::uint64_t seed : spec.seeds) {
                        SweepRunResult r;
                        r.scheme = scheme;
                        r.mode = mode;
                        r.predictor = predictor;
                        r.tau_s = tau;
                        r.seed = seed;
                        r.config = sweep_point_config(spec, scheme, mode, predictor, tau, seed);
                        result.runs.push_back(std::move(r));
                    }
                }
            }
        }
    }
    std::sort(result.runs.begin(), result.runs.end(),
              [](const SweepRunResult& a, const SweepRunResult& b) {
                  return std::make_tuple(static_cast<int>(a.scheme), static_cast<int>(a.mode),
                                         static_cast<int>(a.predictor), a.tau_s, a.seed) <
                         std::make_tuple(static_cast<int>(b.scheme), static_cast<int>(b.mode),
                                         static_cast<int>(b.predictor), b.tau_s, b.seed);
              });

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= result.runs.size()) return;
            SweepRunResult& r = result.runs[i];
            try {
                r.stats = run_simulation(scenario, r.config);
                const std::string path =
                    (std::filesystem::path(out_dir) / sweep_run_filename(r)).string();
                std::ofstream out(path, std::ios::binary);
                if (!out) {
                    throw IoError("cannot write run summary: " + path);
                }
                out << summary_to_json(r.config, r.stats);
                r.ok = true;
            } catch (const std::exception& e) {
                r.ok = false;
                r.error = e.what();
            }
        }
    };

    const std::size_t n_workers = std::min(static_cast<std::size_t>(workers),
                                           std::max<std::size_t>(result.runs.size(), 1));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    result.all_ok = std::all_of(result.runs.begin(), result.runs.end(),
                                [](const SweepRunResult& r) { return r.ok; });

    const std::string csv_path = (std::filesystem::path(out_dir) / "combined.csv").string();
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) {
        throw IoError("cannot write combined CSV: " + csv_path);
    }
    csv << combined_csv(result);
    return result;
}

std::string combined_csv(const SweepResult& result) {
    std::string out =
        "scheme,mode,predictor,tau_s,seed,status,goodput_mean_bps,data_age_mean_s,pdr,"
        "mean_position_error_m,mean_lte_metric_error_db,mean_wifi_metric_error_db,"
        "generated,delivered,dropped,buffered_end,lte_share,wifi_share,transmissions,error\n";
    for (const SweepRunResult& r : result.runs) {
        out += std::string(scheme_name(r.scheme)) + "," + mode_name(r.mode) + "," +
               predictor_name(r.predictor) + "," + num17(r.tau_s) + "," +
               std::to_string(r.seed) + ",";
        if (!r.ok) {
            std::string msg = r.error;
            for (char& c : msg) {
                if (c == ',' || c == '\n' || c == '"') c = ';';
            }
            out += "failed,,,,,,,,,,,,,," + msg + "\n";
            continue;
        }
        const DistSummary *pos = nullptr, *lte = nullptr, *wifi = nullptr;
        for (const PredictionErrorStats& pe : r.stats.prediction_errors) {
            if (pe.predictor == r.predictor && std::abs(pe.tau_s - r.tau_s) < 1e-9) {
                pos = &pe.position_error_m;
                lte = &pe.lte_metric_error_db;
                wifi = &pe.wifi_metric_error_db;
            }
        }
        out += std::string("ok,") + num17(r.stats.goodput_mean_bps) + "," +
               (r.stats.data_age_s.count > 0 ? num17(r.stats.data_age_s.mean) : "") + "," +
               num17(r.stats.pdr) + "," + (pos ? mean_or_empty(*pos) : "") + "," +
               (lte ? mean_or_empty(*lte) : "") + "," + (wifi ? mean_or_empty(*wifi) : "") + "," +
               std::to_string(r.stats.counted.generated) + "," +
               std::to_string(r.stats.counted.delivered) + "," +
               std::to_string(r.stats.counted.dropped) + "," +
               std::to_string(r.stats.counted.buffered_end) + "," + num17(r.stats.lte_share) +
               "," + num17(r.stats.wifi_share) + "," + std::to_string(r.stats.transmissions) +
               ",\n";
    }
    return out;
}

}  // namespace catsim
