#include "mark0/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace mark0 {

namespace {

void append_record(RunSeries& s, const StepRecord& r) {
    s.output.push_back(r.output);
    s.unemployment.push_back(r.unemployment);
    s.pi.push_back(r.pi);
    s.pi_ema.push_back(r.pi_ema);
    s.avg_price.push_back(r.avg_price);
    s.avg_wage.push_back(r.avg_wage);
    s.savings.push_back(r.savings);
    s.avg_fragility.push_back(r.avg_fragility);
    s.bankruptcies.push_back(r.bankruptcies);
    s.loan_rate.push_back(r.loan_rate);
    s.deposit_rate.push_back(r.deposit_rate);
    s.theta.push_back(r.theta);
    s.c_t.push_back(r.c_t);
    s.zeta_t.push_back(r.zeta_t);
    s.money.push_back(r.money);
}

double residual_ratio(const StepRecord& r) {
    const double scale = std::max({1.0, std::abs(r.money), r.savings});
    return r.sf_residual / (1e-9 * scale);
}

// Runs tasks [0, n) over a small pool; the first exception wins and is
// rethrown on the caller thread.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& task) {
    if (n == 0) return;
    unsigned int want = threads > 0 ? static_cast<unsigned int>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
    want = std::min<unsigned long>(want, n);
    if (want <= 1) {
        for (std::size_t i = 0; i < n; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) break;
            try {
                task(i);
            } catch (...) {
                std::scoped_lock lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true);
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(want);
    for (unsigned int i = 0; i < want; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace

RunSeries run_one(const RunSpec& spec, std::uint64_t seed) {
    spec.params.validate();
    spec.scenario.shock.validate();
    if (spec.warmup < 0 || spec.horizon < 1) {
        throw std::invalid_argument("run: warmup must be >= 0 and horizon >= 1");
    }

    Economy economy(spec.params, seed);
    const auto events = spec.scenario.helicopter_events();

    RunSeries series;
    series.output.reserve(spec.horizon);

    for (int t = -spec.warmup; t < spec.horizon; ++t) {
        const ShockValues sv =
            shock_at(spec.scenario.shock, t, spec.params.c0, spec.params.zeta);
        const bool locked = t >= 0 && spec.scenario.shock.in_lockdown(t);
        const double theta =
            theta_at(spec.scenario.policy, t, locked, economy.avg_fragility());

        std::vector<double> kappas;
        if (t >= 0) {
            for (const auto& e : events) {
                if (e.month == t) kappas.push_back(e.kappa);
            }
        }

        const StepRecord rec = economy.step({sv.c_t, sv.zeta_t, theta, kappas});
        series.max_residual_ratio = std::max(series.max_residual_ratio, residual_ratio(rec));
        if (t >= 0) append_record(series, rec);
    }
    series.degenerate = economy.degenerate();
    return series;
}

EnsembleResult run_ensemble(const RunSpec& spec, std::span<const std::uint64_t> seeds,
                            int threads, bool retain_series) {
    if (seeds.empty()) throw std::invalid_argument("ensemble: no seeds");

    RunSpec baseline_spec = spec;
    baseline_spec.scenario = ScenarioSpec{};  // no shock, no policy

    const int shock_end = spec.scenario.shock.final_end();
    EnsembleResult result;
    result.labels.resize(seeds.size());
    result.peak_u_during.resize(seeds.size());
    result.peak_u_after.resize(seeds.size());
    result.runs.resize(retain_series ? seeds.size() : 0);
    result.baselines.resize(retain_series ? seeds.size() : 0);

    parallel_for(seeds.size(), threads, [&](std::size_t i) {
        const std::uint64_t seed = seeds[i];
        try {
            RunSeries run = run_one(spec, seed);
            RunSeries base = run_one(baseline_spec, seed);
            const auto rel = relative_output(run, base);
            result.labels[i] = classify_shape(rel, shock_end, spec.horizon, spec.thresholds);
            result.peak_u_during[i] = peak_unemployment(run, 0, shock_end + 1);
            result.peak_u_after[i] = peak_unemployment(run, shock_end, spec.horizon);
            if (retain_series) {
                result.runs[i] = std::move(run);
                result.baselines[i] = std::move(base);
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("seed " + std::to_string(seed) + ": " + e.what());
        }
    });

    result.l_fraction = crisis_probability(result.labels);
    std::size_t w = 0;
    for (const auto& l : result.labels) {
        if (l.shape == Shape::W) ++w;
    }
    result.w_fraction = static_cast<double>(w) / static_cast<double>(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        result.peak_u_during_mean += result.peak_u_during[i];
        result.peak_u_after_mean += result.peak_u_after[i];
        result.peak_u_during_max = std::max(result.peak_u_during_max, result.peak_u_during[i]);
        result.peak_u_after_max = std::max(result.peak_u_after_max, result.peak_u_after[i]);
    }
    result.peak_u_during_mean /= static_cast<double>(seeds.size());
    result.peak_u_after_mean /= static_cast<double>(seeds.size());
    return result;
}

std::uint64_t cell_run_seed(std::uint64_t base_seed, double dc_rel, double dzeta_rel,
                            int run_index) {
    return derive_seed(base_seed, seed_word(dc_rel), seed_word(dzeta_rel),
                       static_cast<std::uint64_t>(run_index));
}

ScenarioSpec cell_scenario(const SweepGrid& grid, double dc_rel, double dzeta_rel) {
    ScenarioSpec scenario;
    scenario.shock.windows = {{0, grid.shock_length}};
    scenario.shock.dc_rel = dc_rel;
    scenario.shock.dzeta_rel = dzeta_rel;
    scenario.policy = grid.policy;
    return scenario;
}

PhaseDiagram sweep(const SweepGrid& grid, const SweepOptions& options) {
    if (grid.dc_values.empty() || grid.dzeta_values.empty()) {
        throw std::invalid_argument("sweep: empty grid");
    }
    if (grid.runs_per_cell < 1) throw std::invalid_argument("sweep: runs_per_cell must be >= 1");

    const std::size_t n_cells = grid.dc_values.size() * grid.dzeta_values.size();
    PhaseDiagram diagram;
    diagram.cells.resize(n_cells);

    std::vector<std::size_t> todo;
    for (std::size_t c = 0; c < n_cells; ++c) {
        if (!options.skip_cells.contains(c)) todo.push_back(c);
    }
    if (options.stop_after_cells && todo.size() > *options.stop_after_cells) {
        todo.resize(*options.stop_after_cells);
    }

    std::mutex done_mutex;
    parallel_for(todo.size(), options.threads, [&](std::size_t k) {
        const std::size_t c = todo[k];
        const std::size_t row = c / grid.dzeta_values.size();
        const std::size_t col = c % grid.dzeta_values.size();
        const double dc = grid.dc_values[row];
        const double dz = grid.dzeta_values[col];

        RunSpec spec{grid.params, cell_scenario(grid, dc, dz), grid.warmup, grid.horizon,
                     grid.thresholds};
        std::vector<std::uint64_t> seeds(grid.runs_per_cell);
        for (int r = 0; r < grid.runs_per_cell; ++r) seeds[r] = cell_run_seed(grid.base_seed, dc, dz, r);
        // cells parallelize across the pool; runs within a cell stay serial
        const EnsembleResult ens = run_ensemble(spec, seeds, 1);

        PhaseCell cell;
        cell.dc_rel = dc;
        cell.dzeta_rel = dz;
        cell.shock_length = grid.shock_length;
        cell.n_runs = grid.runs_per_cell;
        cell.p_crisis = ens.l_fraction;
        cell.peak_u_during_mean = ens.peak_u_during_mean;
        cell.peak_u_during_max = ens.peak_u_during_max;
        cell.peak_u_after_mean = ens.peak_u_after_mean;
        cell.peak_u_after_max = ens.peak_u_after_max;
        diagram.cells[c] = cell;
        if (options.on_cell_done) {
            std::scoped_lock lock(done_mutex);
            options.on_cell_done(c, cell);
        }
    });
    return diagram;
}

}  // namespace mark0
