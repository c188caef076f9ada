#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "mark0/config.hpp"
#include "mark0/io.hpp"

namespace fs = std::filesystem;

namespace {

const char* cli_path() { return MARK0_CLI_PATH; }

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("mark0_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

int run_cli(const std::string& args) {
    const std::string cmd = std::string(cli_path()) + " " + args + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kQuickBaseline = R"(
[params]
n_firms = 200
[run]
warmup = 40
horizon = 24
seed = 7
)";

const char* kQuickRun = R"(
[params]
n_firms = 200
[shock]
windows = 0:3
dc_rel = 0.3
dzeta_rel = 0.1
[run]
warmup = 40
horizon = 30
seed = 7
)";

const char* kQuickSweep = R"(
[params]
n_firms = 150
[grid]
dc_values = 0.1,0.4
dzeta_values = 0.0,0.2
shock_length = 3
runs_per_cell = 3
[run]
warmup = 30
horizon = 30
seed = 5
)";

}  // namespace

TEST_CASE("cli baseline") {
    TempDir tmp;
    write(tmp.path / "cfg.ini", kQuickBaseline);

    SUBCASE("writes dashboard, summary and manifest; reruns are byte-identical") {
        const std::string out1 = (tmp.path / "out1").string();
        const std::string out2 = (tmp.path / "out2").string();
        const std::string base = "baseline --config " + (tmp.path / "cfg.ini").string();
        REQUIRE(run_cli(base + " --out " + out1) == 0);
        REQUIRE(run_cli(base + " --out " + out2) == 0);
        CHECK(fs::exists(fs::path(out1) / "dashboard.csv"));
        CHECK(fs::exists(fs::path(out1) / "summary.json"));
        CHECK(fs::exists(fs::path(out1) / "manifest.json"));
        CHECK(slurp(fs::path(out1) / "dashboard.csv") == slurp(fs::path(out2) / "dashboard.csv"));
        CHECK(slurp(fs::path(out1) / "summary.json") == slurp(fs::path(out2) / "summary.json"));
        // dashboard header matches the documented schema
        std::istringstream in(slurp(fs::path(out1) / "dashboard.csv"));
        std::string header;
        std::getline(in, header);
        CHECK(header == mark0::kDashboardHeader);
    }

    SUBCASE("unknown config key: exit 2, no output") {
        write(tmp.path / "bad.ini", "[params]\nn_fimrs = 10\n");
        const std::string out = (tmp.path / "bad_out").string();
        CHECK(run_cli("baseline --config " + (tmp.path / "bad.ini").string() + " --out " + out) ==
              2);
        CHECK_FALSE(fs::exists(out));
    }

    SUBCASE("a shock section is rejected for baseline") {
        write(tmp.path / "shocked.ini", kQuickRun);
        CHECK(run_cli("baseline --config " + (tmp.path / "shocked.ini").string() + " --out " +
                      (tmp.path / "x").string()) == 2);
    }

    SUBCASE("missing output directory setting: exit 2") {
        CHECK(run_cli("baseline --config " + (tmp.path / "cfg.ini").string()) == 2);
    }

    SUBCASE("unwritable output path: exit 3") {
        CHECK(run_cli("baseline --config " + (tmp.path / "cfg.ini").string() +
                      " --out /proc/mark0_nope") == 3);
    }
}

TEST_CASE("cli run") {
    TempDir tmp;
    write(tmp.path / "cfg.ini", kQuickRun);

    SUBCASE("produces the relative-output series and a shape label") {
        const std::string out = (tmp.path / "out").string();
        REQUIRE(run_cli("run --config " + (tmp.path / "cfg.ini").string() + " --out " + out) ==
                0);
        CHECK(fs::exists(fs::path(out) / "relative_output.csv"));
        const auto summary = nlohmann::json::parse(slurp(fs::path(out) / "summary.json"));
        const std::string shape = summary["shape"];
        CHECK((shape == "V" || shape == "U" || shape == "W" || shape == "L"));
        CHECK(summary["seed"] == 7);
        std::istringstream in(slurp(fs::path(out) / "relative_output.csv"));
        std::string header;
        std::getline(in, header);
        CHECK(header == mark0::kRelativeHeader);
    }

    SUBCASE("a seed range fans out into per-seed directories with an aggregate") {
        const std::string out = (tmp.path / "multi").string();
        REQUIRE(run_cli("run --config " + (tmp.path / "cfg.ini").string() + " --seeds 0..2 --out " +
                        out) == 0);
        CHECK(fs::exists(fs::path(out) / "seed_0" / "dashboard.csv"));
        CHECK(fs::exists(fs::path(out) / "seed_2" / "summary.json"));
        const auto top = nlohmann::json::parse(slurp(fs::path(out) / "summary.json"));
        CHECK(top["n_seeds"] == 3);
        CHECK(top.contains("l_fraction"));
    }

    SUBCASE("without a shock section, run is a config error") {
        write(tmp.path / "nos.ini", kQuickBaseline);
        CHECK(run_cli("run --config " + (tmp.path / "nos.ini").string() + " --out " +
                      (tmp.path / "x").string()) == 2);
    }

    SUBCASE("the echoed manifest reproduces identical output") {
        const std::string out = (tmp.path / "orig").string();
        REQUIRE(run_cli("run --config " + (tmp.path / "cfg.ini").string() + " --out " + out) ==
                0);
        const auto manifest = nlohmann::json::parse(slurp(fs::path(out) / "manifest.json"));
        write(tmp.path / "echoed.ini", manifest["config_ini"]);
        const std::string out2 = (tmp.path / "echoed").string();
        REQUIRE(run_cli("run --config " + (tmp.path / "echoed.ini").string() + " --out " + out2) ==
                0);
        CHECK(slurp(fs::path(out) / "dashboard.csv") == slurp(fs::path(out2) / "dashboard.csv"));
        CHECK(slurp(fs::path(out) / "relative_output.csv") ==
              slurp(fs::path(out2) / "relative_output.csv"));
    }
}

TEST_CASE("cli sweep") {
    TempDir tmp;
    write(tmp.path / "cfg.ini", kQuickSweep);
    const std::string cfg = (tmp.path / "cfg.ini").string();

    SUBCASE("full sweep writes the phase diagram and a complete manifest") {
        const std::string out = (tmp.path / "full").string();
        REQUIRE(run_cli("sweep --config " + cfg + " --out " + out) == 0);
        const std::string csv = slurp(fs::path(out) / "phase_diagram.csv");
        std::istringstream in(csv);
        std::string header;
        std::getline(in, header);
        CHECK(header == mark0::kPhaseHeader);
        int rows = 0;
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty()) ++rows;
        }
        CHECK(rows == 4);
        const auto manifest = nlohmann::json::parse(slurp(fs::path(out) / "manifest.json"));
        CHECK(manifest["status"] == "complete");
        CHECK_FALSE(fs::exists(fs::path(out) / "cells_partial.csv"));
    }

    SUBCASE("an interrupted sweep resumes to a byte-identical result") {
        const std::string full_out = (tmp.path / "uninterrupted").string();
        REQUIRE(run_cli("sweep --config " + cfg + " --out " + full_out) == 0);

        // simulate the interruption: run only a prefix of the cells, keeping
        // the partial file and the running manifest in place
        const std::string out = (tmp.path / "resumable").string();
        {
            auto cfg_obj = mark0::load_config_file(cfg, mark0::Profile::Desk);
            cfg_obj.run.out_dir = out;
            fs::create_directories(out);
            auto manifest = mark0::base_manifest("sweep", cfg_obj);
            manifest["status"] = "running";
            mark0::write_file(fs::path(out) / "manifest.json", manifest.dump(2) + "\n");

            mark0::SweepGrid grid;
            grid.params = cfg_obj.params;
            grid.policy = cfg_obj.policy;
            grid.dc_values = cfg_obj.grid->dc_values;
            grid.dzeta_values = cfg_obj.grid->dzeta_values;
            grid.shock_length = cfg_obj.grid->shock_length;
            grid.runs_per_cell = cfg_obj.grid->runs_per_cell;
            grid.base_seed = cfg_obj.run.seeds.front();
            grid.warmup = cfg_obj.run.warmup;
            grid.horizon = cfg_obj.run.horizon;
            std::ofstream partial(fs::path(out) / "cells_partial.csv");
            mark0::SweepOptions options;
            options.threads = 1;
            options.stop_after_cells = 2;
            options.on_cell_done = [&](std::size_t index, const mark0::PhaseCell& cell) {
                partial << index << ',' << mark0::phase_row(cell) << "\n";
            };
            mark0::sweep(grid, options);
        }
        CHECK_FALSE(fs::exists(fs::path(out) / "phase_diagram.csv"));

        REQUIRE(run_cli("sweep --config " + cfg + " --out " + out + " --resume") == 0);
        CHECK(slurp(fs::path(out) / "phase_diagram.csv") ==
              slurp(fs::path(full_out) / "phase_diagram.csv"));
    }

    SUBCASE("resume with a different configuration is rejected") {
        const std::string out = (tmp.path / "mismatch").string();
        REQUIRE(run_cli("sweep --config " + cfg + " --out " + out) == 0);
        write(tmp.path / "other.ini", std::string(kQuickSweep) + "\n[params]\nc0 = 0.45\n");
        CHECK(run_cli("sweep --config " + (tmp.path / "other.ini").string() + " --out " + out +
                      " --resume") == 2);
    }

    SUBCASE("sweep without a grid section is a config error") {
        write(tmp.path / "nogrid.ini", kQuickBaseline);
        CHECK(run_cli("sweep --config " + (tmp.path / "nogrid.ini").string() + " --out " +
                      (tmp.path / "x").string()) == 2);
    }
}
