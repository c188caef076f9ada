#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mark0/config.hpp"
#include "mark0/io.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CliOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> seeds;
    std::optional<std::string> out;
    std::string profile = "desk";
    int threads = -1;
    bool resume = false;
};

mark0::ResolvedConfig load(const CliOptions& opt) {
    auto cfg = mark0::load_config_file(opt.config_path, mark0::profile_from_string(opt.profile));
    if (opt.seed && opt.seeds) throw mark0::ConfigError("give --seed or --seeds, not both");
    if (opt.seed) cfg.run.seeds = {*opt.seed};
    if (opt.seeds) cfg.run.seeds = mark0::parse_seed_spec(*opt.seeds);
    if (opt.out) cfg.run.out_dir = *opt.out;
    if (opt.threads >= 0) cfg.run.threads = opt.threads;
    if (cfg.run.out_dir.empty()) {
        throw mark0::ConfigError("no output directory (set [run] out or pass --out)");
    }
    return cfg;
}

fs::path prepare_out_dir(const mark0::ResolvedConfig& cfg) {
    const fs::path dir(cfg.run.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory: " + dir.string());
    return dir;
}

void log(const std::string& msg) { std::cerr << "mark0: " << msg << "\n"; }

int run_baseline_or_run(const CliOptions& opt, bool with_shock) {
    const auto cfg = load(opt);
    const char* command = with_shock ? "run" : "baseline";
    if (with_shock && !cfg.has_shock) {
        throw mark0::ConfigError("'run' needs a [shock] section with lockdown windows");
    }
    if (!with_shock && cfg.has_shock) {
        throw mark0::ConfigError("'baseline' must not have an active [shock] section");
    }
    if (cfg.grid) throw mark0::ConfigError("[grid] is only used by 'sweep'");

    const fs::path dir = prepare_out_dir(cfg);
    const auto spec = cfg.run_spec();
    const bool multi = cfg.run.seeds.size() > 1;

    ordered_json manifest = mark0::base_manifest(command, cfg);
    ordered_json per_seed = ordered_json::array();
    std::map<std::string, int> shape_counts;

    for (const std::uint64_t seed : cfg.run.seeds) {
        const fs::path seed_dir = multi ? dir / ("seed_" + std::to_string(seed)) : dir;
        if (multi) {
            std::error_code ec;
            fs::create_directories(seed_dir, ec);
            if (ec) throw std::runtime_error("cannot create " + seed_dir.string());
        }
        const mark0::RunSeries series = mark0::run_one(spec, seed);
        mark0::write_file(seed_dir / "dashboard.csv", mark0::dashboard_csv(series));

        ordered_json summary;
        if (with_shock) {
            mark0::RunSpec twin = spec;
            twin.scenario = mark0::ScenarioSpec{};
            const mark0::RunSeries baseline = mark0::run_one(twin, seed);
            const auto rel = mark0::relative_output(series, baseline);
            const auto label = mark0::classify_shape(rel, spec.scenario.shock.final_end(),
                                                     spec.horizon, spec.thresholds);
            const double peak_during = mark0::peak_unemployment(
                series, 0, spec.scenario.shock.final_end() + 1);
            const double peak_after = mark0::peak_unemployment(
                series, spec.scenario.shock.final_end(), spec.horizon);
            mark0::write_file(seed_dir / "relative_output.csv",
                              mark0::relative_csv(series, baseline, rel));
            summary = mark0::run_summary(series, label, peak_during, peak_after);
            shape_counts[mark0::to_string(label.shape)]++;
        } else {
            summary = mark0::baseline_summary(series);
        }
        summary["seed"] = seed;
        mark0::write_file(seed_dir / "summary.json", summary.dump(2) + "\n");
        per_seed.push_back(summary);
        log(std::string(command) + " seed " + std::to_string(seed) + " done");
    }

    if (multi) {
        ordered_json top;
        top["n_seeds"] = cfg.run.seeds.size();
        if (with_shock) {
            top["shape_counts"] = shape_counts;
            const double n = static_cast<double>(cfg.run.seeds.size());
            top["l_fraction"] = shape_counts["L"] / n;
            top["w_fraction"] = shape_counts["W"] / n;
        }
        top["seeds"] = per_seed;
        mark0::write_file(dir / "summary.json", top.dump(2) + "\n");
    }
    mark0::write_file(dir / "manifest.json", manifest.dump(2) + "\n");
    return kExitOk;
}

mark0::SweepGrid make_grid(const mark0::ResolvedConfig& cfg) {
    mark0::SweepGrid grid;
    grid.params = cfg.params;
    grid.policy = cfg.policy;
    grid.dc_values = cfg.grid->dc_values;
    grid.dzeta_values = cfg.grid->dzeta_values;
    grid.shock_length = cfg.grid->shock_length;
    grid.runs_per_cell = cfg.grid->runs_per_cell;
    grid.base_seed = cfg.run.seeds.front();
    grid.warmup = cfg.run.warmup;
    grid.horizon = cfg.run.horizon;
    grid.thresholds = cfg.thresholds;
    return grid;
}

int run_sweep(const CliOptions& opt) {
    const auto cfg = load(opt);
    if (!cfg.grid) throw mark0::ConfigError("'sweep' needs a [grid] section");
    if (cfg.run.seeds.size() != 1) {
        throw mark0::ConfigError("'sweep' takes a single base seed");
    }

    const fs::path dir = prepare_out_dir(cfg);
    const fs::path partial_path = dir / "cells_partial.csv";
    const fs::path manifest_path = dir / "manifest.json";
    const mark0::SweepGrid grid = make_grid(cfg);
    const std::size_t n_cells = grid.dc_values.size() * grid.dzeta_values.size();

    // completed rows, keyed by canonical cell index
    std::map<std::size_t, std::string> rows;
    if (opt.resume) {
        if (!fs::exists(manifest_path)) {
            throw mark0::ConfigError("--resume: no manifest in " + dir.string());
        }
        const auto prev = ordered_json::parse(mark0::read_file(manifest_path));
        if (prev.value("config_ini", "") != mark0::render_config_ini(cfg)) {
            throw mark0::ConfigError("--resume: configuration differs from the interrupted run");
        }
        if (fs::exists(partial_path)) {
            std::istringstream in(mark0::read_file(partial_path));
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                const auto comma = line.find(',');
                const std::size_t index = std::stoul(line.substr(0, comma));
                if (index < n_cells) rows[index] = line.substr(comma + 1);
            }
        }
        log("resume: " + std::to_string(rows.size()) + "/" + std::to_string(n_cells) +
            " cells already done");
    } else {
        std::error_code ec;
        fs::remove(partial_path, ec);
    }

    ordered_json manifest = mark0::base_manifest("sweep", cfg);
    manifest["grid"] = {{"dc_values", grid.dc_values},
                       {"dzeta_values", grid.dzeta_values},
                       {"shock_length", grid.shock_length},
                       {"runs_per_cell", grid.runs_per_cell},
                       {"base_seed", grid.base_seed},
                       {"n_cells", n_cells}};
    manifest["status"] = "running";
    mark0::write_file(manifest_path, manifest.dump(2) + "\n");

    std::ofstream partial(partial_path, std::ios::app);
    if (!partial) throw std::runtime_error("cannot open " + partial_path.string());
    std::size_t done = rows.size();

    mark0::SweepOptions options;
    options.threads = cfg.run.threads;
    for (const auto& [index, row] : rows) options.skip_cells.insert(index);
    options.on_cell_done = [&](std::size_t index, const mark0::PhaseCell& cell) {
        const std::string row = mark0::phase_row(cell);
        rows[index] = row;
        partial << index << ',' << row << "\n";
        partial.flush();
        ++done;
        log("cell " + std::to_string(index) + " done (" + std::to_string(done) + "/" +
            std::to_string(n_cells) + ")");
    };

    mark0::sweep(grid, options);

    if (rows.size() != n_cells) {
        throw std::runtime_error("sweep incomplete: " + std::to_string(rows.size()) + "/" +
                                 std::to_string(n_cells) + " cells");
    }
    std::string csv = std::string(mark0::kPhaseHeader) + "\n";
    for (std::size_t c = 0; c < n_cells; ++c) csv += rows[c] + "\n";
    mark0::write_file(dir / "phase_diagram.csv", csv);

    manifest["status"] = "complete";
    manifest["completed_cells"] = n_cells;
    mark0::write_file(manifest_path, manifest.dump(2) + "\n");
    partial.close();
    std::error_code ec;
    fs::remove(partial_path, ec);
    return kExitOk;
}

void add_common(CLI::App* cmd, CliOptions& opt, bool with_seeds) {
    cmd->add_option("--config", opt.config_path, "configuration file")->required();
    cmd->add_option("--seed", opt.seed, "single seed (overrides the config)");
    if (with_seeds) {
        cmd->add_option("--seeds", opt.seeds, "seed range A..B or comma list");
    }
    cmd->add_option("--out", opt.out, "output directory");
    cmd->add_option("--profile", opt.profile, "desk or full")
        ->check(CLI::IsMember({"desk", "full"}));
    cmd->add_option("--threads", opt.threads, "worker threads (0 = all cores)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mark-0 macroeconomy simulator: lockdown shocks, credit policy, "
                 "helicopter money, ensemble sweeps"};
    app.require_subcommand(1);

    CliOptions opt;
    auto* baseline = app.add_subcommand("baseline", "no-shock reference run");
    add_common(baseline, opt, true);
    auto* run = app.add_subcommand("run", "shock scenario with dashboards");
    add_common(run, opt, true);
    auto* sweep_cmd = app.add_subcommand("sweep", "phase-diagram grid sweep");
    add_common(sweep_cmd, opt, false);
    sweep_cmd->add_flag("--resume", opt.resume, "continue an interrupted sweep");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (baseline->parsed()) return run_baseline_or_run(opt, false);
        if (run->parsed()) return run_baseline_or_run(opt, true);
        return run_sweep(opt);
    } catch (const mark0::ConfigError& e) {
        std::cerr << "mark0: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "mark0: config: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "mark0: error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
