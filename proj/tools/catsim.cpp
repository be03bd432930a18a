#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "catsim/engine.hpp"
#include "catsim/errors.hpp"
#include "catsim/scenario.hpp"
#include "catsim/sweep.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw catsim::IoError("cannot open file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct ScenarioGenArgs {
    std::string out;
    int blocks = 4;
    int blocks_x = -1;
    int blocks_y = -1;
    double block_size = 250.0;
    double margin = 15.0;
    double v_max = 13.89;
    int enbs = 3;
    int rsus = 8;
    double enb_power = 33.0;
    double rsu_power = 20.0;
    double enb_gain = 14.0;
    double rsu_gain = 0.0;
    double lte_freq = 1.8e9;
    double wifi_freq = 5.89e9;
    double beta = 2.0;
    double green = 30.0;
    double red = 30.0;
};

int cmd_scenario_gen(const ScenarioGenArgs& a) {
    catsim::ScenarioGenOptions opts;
    opts.grid.blocks_x = a.blocks_x > 0 ? a.blocks_x : a.blocks;
    opts.grid.blocks_y = a.blocks_y > 0 ? a.blocks_y : a.blocks;
    opts.grid.block_size_m = a.block_size;
    opts.grid.building_margin_m = a.margin;
    opts.v_max_mps = a.v_max;
    opts.enodeb_count = a.enbs;
    opts.rsu_count = a.rsus;
    opts.enodeb_tx_dbm = a.enb_power;
    opts.rsu_tx_dbm = a.rsu_power;
    opts.enodeb_antenna_gain_db = a.enb_gain;
    opts.rsu_antenna_gain_db = a.rsu_gain;
    opts.lte_frequency_hz = a.lte_freq;
    opts.wifi_frequency_hz = a.wifi_freq;
    opts.wall_attenuation_db = a.beta;
    opts.light_green_s = a.green;
    opts.light_red_s = a.red;
    const catsim::Scenario scenario = catsim::make_default_scenario(opts);
    catsim::save_scenario(scenario, a.out);
    std::printf("scenario written to %s\n", a.out.c_str());
    return 0;
}

struct RunArgs {
    std::string scenario;
    std::string out_dir = ".";
    std::string config_file;
    std::string scheme;
    std::string mode;
    std::string predictor;
    double tau = -1.0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double duration = -1.0;
    int vehicles = -1;
    double penetration = -1.0;
    bool eval = false;
    bool trajectory = false;
    bool predictions = false;
    bool no_events = false;
    bool no_transmissions = false;
};

int cmd_run(const RunArgs& a) {
    const catsim::Scenario scenario = catsim::load_scenario(a.scenario);

    catsim::SimConfig config;
    if (!a.config_file.empty()) {
        catsim::apply_config_json(config, read_file(a.config_file));
    }
    if (!a.scheme.empty()) config.scheme = catsim::parse_scheme(a.scheme);
    if (!a.mode.empty()) config.mode = catsim::parse_mode(a.mode);
    if (!a.predictor.empty()) config.predictor = catsim::parse_predictor(a.predictor);
    if (a.tau > 0.0) config.params.tau_s = a.tau;
    if (a.seed_set) config.seed = a.seed;
    if (a.duration > 0.0) config.duration_s = a.duration;
    if (a.vehicles >= 0) config.vehicle_count = a.vehicles;
    if (a.penetration >= 0.0) config.penetration = a.penetration;
    if (a.eval) config.evaluate_predictions = true;

    std::error_code ec;
    std::filesystem::create_directories(a.out_dir, ec);
    if (ec) {
        throw catsim::IoError("cannot create output directory: " + a.out_dir);
    }
    const auto in_dir = [&](const char* name) {
        return (std::filesystem::path(a.out_dir) / name).string();
    };
    catsim::RunOutputs outputs;
    if (!a.no_events) outputs.events_csv = in_dir("events.csv");
    if (!a.no_transmissions) outputs.transmissions_csv = in_dir("transmissions.csv");
    if (a.trajectory) outputs.trajectory_csv = in_dir("trajectory.csv");
    if (a.predictions) {
        config.evaluate_predictions = true;
        outputs.prediction_csv = in_dir("prediction_errors.csv");
    }

    const catsim::RunStatistics stats = catsim::run_simulation(scenario, config, outputs);

    const std::string summary_path = in_dir("summary.json");
    std::ofstream out(summary_path, std::ios::binary);
    if (!out) {
        throw catsim::IoError("cannot write summary: " + summary_path);
    }
    out << catsim::summary_to_json(config, stats);
    if (!out) {
        throw catsim::IoError("failed writing summary: " + summary_path);
    }
    std::printf("scheme=%s mode=%s goodput_mean_bps=%.3f pdr=%.6f data_age_mean_s=%.3f\n",
                catsim::scheme_name(config.scheme), catsim::mode_name(config.mode),
                stats.goodput_mean_bps, stats.pdr,
                stats.data_age_s.count > 0 ? stats.data_age_s.mean : 0.0);
    std::printf("summary written to %s\n", summary_path.c_str());
    return 0;
}

struct SweepArgs {
    std::string scenario;
    std::string spec;
    std::string out_dir = "sweep_out";
    int workers = 0;
};

int cmd_sweep(const SweepArgs& a) {
    const catsim::Scenario scenario = catsim::load_scenario(a.scenario);
    const catsim::SweepSpec spec = catsim::load_sweep_spec(a.spec);
    int workers = a.workers;
    if (workers <= 0) {
        workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    }
    const catsim::SweepResult result = catsim::run_sweep(scenario, spec, workers, a.out_dir);
    std::size_t failed = 0;
    for (const auto& r : result.runs) {
        if (!r.ok) {
            ++failed;
            std::fprintf(stderr, "run %s failed: %s\n", catsim::sweep_run_filename(r).c_str(),
                         r.error.c_str());
        }
    }
    std::printf("%zu runs, %zu failed, results in %s\n", result.runs.size(), failed,
                a.out_dir.c_str());
    return result.all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Context-predictive multi-interface vehicle-to-cloud transmission simulator"};
    app.require_subcommand(1);

    ScenarioGenArgs gen;
    CLI::App* sub_gen = app.add_subcommand("scenario-gen", "Generate a scenario file");
    sub_gen->add_option("--out", gen.out, "Output scenario JSON path")->required();
    sub_gen->add_option("--blocks", gen.blocks, "Grid blocks per axis");
    sub_gen->add_option("--blocks-x", gen.blocks_x, "Grid blocks, x axis");
    sub_gen->add_option("--blocks-y", gen.blocks_y, "Grid blocks, y axis");
    sub_gen->add_option("--block-size", gen.block_size, "Block edge length, m");
    sub_gen->add_option("--margin", gen.margin, "Building inset from the streets, m");
    sub_gen->add_option("--vmax", gen.v_max, "Speed limit, m/s");
    sub_gen->add_option("--enbs", gen.enbs, "Number of eNodeB sites");
    sub_gen->add_option("--rsus", gen.rsus, "Number of RSU sites");
    sub_gen->add_option("--enb-power", gen.enb_power, "eNodeB transmit power, dBm");
    sub_gen->add_option("--rsu-power", gen.rsu_power, "RSU transmit power, dBm");
    sub_gen->add_option("--enb-gain", gen.enb_gain, "eNodeB antenna gain, dB");
    sub_gen->add_option("--rsu-gain", gen.rsu_gain, "RSU antenna gain, dB");
    sub_gen->add_option("--lte-freq", gen.lte_freq, "LTE carrier frequency, Hz");
    sub_gen->add_option("--wifi-freq", gen.wifi_freq, "802.11p carrier frequency, Hz");
    sub_gen->add_option("--beta", gen.beta, "Wall attenuation per cut, dB");
    sub_gen->add_option("--green", gen.green, "Traffic light green phase, s");
    sub_gen->add_option("--red", gen.red, "Traffic light red phase, s");

    RunArgs run;
    CLI::App* sub_run = app.add_subcommand("run", "Execute one simulation run");
    sub_run->add_option("--scenario", run.scenario, "Scenario JSON path")->required();
    sub_run->add_option("--out", run.out_dir, "Output directory");
    sub_run->add_option("--config", run.config_file, "Run config JSON (overridden by flags)");
    sub_run->add_option("--scheme", run.scheme, "periodic | cat | pcat");
    sub_run->add_option("--mode", run.mode, "lte | wifi | multi");
    sub_run->add_option("--predictor", run.predictor,
                        "extrapolation | trajectory_vel | trajectory_acc");
    sub_run->add_option("--tau", run.tau, "Prediction horizon, s");
    sub_run->add_option("--seed", run.seed, "Master seed")->each([&](const std::string&) {
        run.seed_set = true;
    });
    sub_run->add_option("--duration", run.duration, "Simulated duration, s");
    sub_run->add_option("--vehicles", run.vehicles, "Vehicle count");
    sub_run->add_option("--penetration", run.penetration, "Equipped fraction, [0, 1]");
    sub_run->add_flag("--eval", run.eval, "Evaluate prediction errors (all predictors)");
    sub_run->add_flag("--trajectory", run.trajectory, "Write trajectory.csv");
    sub_run->add_flag("--predictions", run.predictions, "Write prediction_errors.csv");
    sub_run->add_flag("--no-events", run.no_events, "Skip events.csv");
    sub_run->add_flag("--no-transmissions", run.no_transmissions, "Skip transmissions.csv");

    SweepArgs sweep;
    CLI::App* sub_sweep = app.add_subcommand("sweep", "Run a cartesian parameter sweep");
    sub_sweep->add_option("--scenario", sweep.scenario, "Scenario JSON path")->required();
    sub_sweep->add_option("--spec", sweep.spec, "Sweep spec JSON path")->required();
    sub_sweep->add_option("--out", sweep.out_dir, "Output directory");
    sub_sweep->add_option("--workers", sweep.workers, "Worker thread count (0 = hardware)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 1;
    }

    try {
        if (sub_gen->parsed()) return cmd_scenario_gen(gen);
        if (sub_run->parsed()) return cmd_run(run);
        if (sub_sweep->parsed()) return cmd_sweep(sweep);
        std::fprintf(stderr, "no subcommand selected\n");
        return 1;
    } catch (const catsim::IoError& e) {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return 2;
    } catch (const catsim::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
