#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "t2smc/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDiverged = 3;
constexpr int kExitIo = 4;

struct CommonOpts {
    std::string preset;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<double> t_end;
    std::optional<double> step;
    std::optional<std::string> snr_db;
    std::optional<std::string> out_dir;
    std::optional<int> decimate;
};

void add_common_flags(CLI::App* cmd, CommonOpts& opts, const std::string& default_preset) {
    opts.preset = default_preset;
    cmd->add_option("--preset", opts.preset, "built-in experiment preset")
        ->check(CLI::IsMember(t2smc::preset_names()));
    cmd->add_option("--config", opts.config_path, "config file (overrides the preset)");
    cmd->add_option("--seed", opts.seed, "measurement-noise seed");
    cmd->add_option("--t-end", opts.t_end, "simulation horizon [s]");
    cmd->add_option("--step", opts.step, "integration step [s]");
    cmd->add_option("--snr-db", opts.snr_db, "measurement SNR in dB, or 'none'");
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--decimate", opts.decimate, "record every k-th step");
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw t2smc::IoError("cannot read '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

t2smc::ExperimentConfig resolve_config(const CommonOpts& opts) {
    t2smc::ExperimentConfig cfg = opts.config_path.empty()
                                      ? t2smc::preset(opts.preset)
                                      : t2smc::parse_config(read_file(opts.config_path));
    if (opts.seed) cfg.sim.seed = *opts.seed;
    if (opts.t_end) cfg.sim.t_end = *opts.t_end;
    if (opts.step) cfg.sim.h = *opts.step;
    if (opts.decimate) cfg.sim.decimate = *opts.decimate;
    if (opts.out_dir) cfg.out_dir = *opts.out_dir;
    if (opts.snr_db) {
        if (*opts.snr_db == "none" || *opts.snr_db == "off") {
            cfg.sim.noise.snr_db.reset();
        } else {
            cfg.sim.noise.snr_db = std::stod(*opts.snr_db);
        }
    }
    t2smc::validate(cfg);
    return cfg;
}

std::filesystem::path ensure_out_dir(const t2smc::ExperimentConfig& cfg) {
    std::filesystem::path dir(cfg.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw t2smc::IoError("cannot create output directory '" + dir.string() + "'");
    return dir;
}

int run_single(const t2smc::ExperimentConfig& cfg, const std::string& label) {
    const auto dir = ensure_out_dir(cfg);
    const t2smc::RunResult result = t2smc::run_experiment(cfg);
    const auto csv = dir / (label + ".csv");
    t2smc::write_csv(result.trajectory, csv);
    t2smc::write_metrics(result.metrics, dir / (label + "_metrics.txt"));
    std::cout << "wrote " << csv.string() << " (" << result.trajectory.rows() << " rows)\n"
              << t2smc::format_metrics(result.metrics);
    return kExitOk;
}

int run_compare(const t2smc::ExperimentConfig& base) {
    const auto dir = ensure_out_dir(base);
    const t2smc::ControllerKind kinds[] = {t2smc::ControllerKind::adaptive_t2_stc,
                                           t2smc::ControllerKind::ideal_stc,
                                           t2smc::ControllerKind::first_order_smc};
    std::ostringstream table;
    table << "controller,rmse_e1,rmse_e2,tv_u,settle_time\n";
    std::printf("%-18s %12s %12s %12s %12s\n", "controller", "rmse_e1", "rmse_e2", "tv_u",
                "settle[s]");
    for (t2smc::ControllerKind kind : kinds) {
        t2smc::ExperimentConfig cfg = base;
        cfg.sim.kind = kind;
        const t2smc::RunResult result = t2smc::run_experiment(cfg);
        const std::string name = t2smc::to_string(kind);
        t2smc::write_csv(result.trajectory, dir / ("compare_" + name + ".csv"));
        const t2smc::Metrics& m = result.metrics;
        const std::string settle = m.settle_time ? std::to_string(*m.settle_time) : "unsettled";
        table << name << ',' << m.rmse_e1 << ',' << m.rmse_e2 << ',' << m.tv_u << ',' << settle
              << '\n';
        std::printf("%-18s %12.4g %12.4g %12.4g %12s\n", name.c_str(), m.rmse_e1, m.rmse_e2,
                    m.tv_u, settle.c_str());
    }
    std::ofstream out(dir / "compare_metrics.csv", std::ios::binary);
    if (!out) throw t2smc::IoError("cannot write comparison table");
    out << table.str();
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive interval type-2 fuzzy super-twisting control simulator"};
    app.require_subcommand(1);

    CommonOpts free_opts, track_opts, compare_opts;
    CLI::App* cmd_free = app.add_subcommand("free-run", "uncontrolled plant run");
    add_common_flags(cmd_free, free_opts, "duffing-free");
    CLI::App* cmd_track = app.add_subcommand("track", "closed-loop tracking run");
    add_common_flags(cmd_track, track_opts, "duffing-track");
    CLI::App* cmd_compare = app.add_subcommand("compare",
                                               "adaptive vs ideal STC vs first-order SMC");
    add_common_flags(cmd_compare, compare_opts, "duffing-track");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_free->parsed()) {
            t2smc::ExperimentConfig cfg = resolve_config(free_opts);
            if (free_opts.config_path.empty() && cfg.sim.kind != t2smc::ControllerKind::none) {
                cfg.sim.kind = t2smc::ControllerKind::none;
            }
            return run_single(cfg, "free_run");
        }
        if (cmd_track->parsed()) {
            return run_single(resolve_config(track_opts), "track");
        }
        if (cmd_compare->parsed()) {
            return run_compare(resolve_config(compare_opts));
        }
    } catch (const t2smc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const t2smc::SimulationDiverged& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDiverged;
    } catch (const t2smc::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitOk;
}
