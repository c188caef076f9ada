#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>

#include "mark0/metrics.hpp"
#include "mark0/params.hpp"
#include "mark0/scenario.hpp"

namespace mark0 {

struct RunSpec {
    EconomyParams params;
    ScenarioSpec scenario;
    int warmup = 300;   // unrecorded settling months before the shock clock
    int horizon = 180;  // recorded months, shock starts at month 0
    ShapeThresholds thresholds;
};

// One full simulation: warm-up with baseline values, then `horizon` recorded
// months driven by the shock schedule and policy. Bit-reproducible per seed.
RunSeries run_one(const RunSpec& spec, std::uint64_t seed);

struct EnsembleResult {
    std::vector<ShapeLabel> labels;       // one per seed, in seed order
    std::vector<double> peak_u_during;    // over the lockdown months (inclusive end)
    std::vector<double> peak_u_after;     // from shock end to horizon
    std::vector<RunSeries> runs;          // retained when requested
    std::vector<RunSeries> baselines;     // no-shock twins (same seeds)
    double l_fraction = 0.0;
    double w_fraction = 0.0;
    double peak_u_during_mean = 0.0;
    double peak_u_during_max = 0.0;
    double peak_u_after_mean = 0.0;
    double peak_u_after_max = 0.0;
};

// Independent shocked/baseline run pairs per seed, aggregated with the shape
// classifier. A throwing run aborts the ensemble and reports its seed.
EnsembleResult run_ensemble(const RunSpec& spec, std::span<const std::uint64_t> seeds,
                            int threads = 0, bool retain_series = false);

struct SweepGrid {
    EconomyParams params;
    PolicySpec policy;
    std::vector<double> dc_values;
    std::vector<double> dzeta_values;
    int shock_length = 6;  // single lockdown [0, T)
    int runs_per_cell = 100;
    std::uint64_t base_seed = 1;
    int warmup = 300;
    int horizon = 180;
    ShapeThresholds thresholds;
};

struct PhaseCell {
    double dc_rel = 0.0;
    double dzeta_rel = 0.0;
    int shock_length = 0;
    int n_runs = 0;
    double p_crisis = 0.0;
    double peak_u_during_mean = 0.0;
    double peak_u_during_max = 0.0;
    double peak_u_after_mean = 0.0;
    double peak_u_after_max = 0.0;
};

// Cells in canonical row-major order over dc_values x dzeta_values.
struct PhaseDiagram {
    std::vector<PhaseCell> cells;
};

struct SweepOptions {
    int threads = 0;                       // 0 = hardware concurrency
    std::set<std::size_t> skip_cells;      // already-completed cell indices (resume)
    std::function<void(std::size_t, const PhaseCell&)> on_cell_done;
    std::optional<std::size_t> stop_after_cells;  // simulated interruption (tests)
};

// Runs every cell not skipped; per-run seeds derive from (base_seed, dc,
// dzeta, run index) so any sub-grid reproduces the same cell values.
PhaseDiagram sweep(const SweepGrid& grid, const SweepOptions& options = {});

// Seed for one run of one cell; exposed for tests and the resume path.
std::uint64_t cell_run_seed(std::uint64_t base_seed, double dc_rel, double dzeta_rel,
                            int run_index);

ScenarioSpec cell_scenario(const SweepGrid& grid, double dc_rel, double dzeta_rel);

}  // namespace mark0
