#include "mark0/io.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

namespace mark0 {

namespace {

double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

}  // namespace

std::string dashboard_csv(const RunSeries& s) {
    std::ostringstream out;
    out << kDashboardHeader << "\n";
    for (std::size_t t = 0; t < s.months(); ++t) {
        out << t << ',' << format_double(s.output[t]) << ',' << format_double(s.unemployment[t])
            << ',' << format_double(s.pi[t]) << ',' << format_double(s.pi_ema[t]) << ','
            << format_double(s.avg_price[t]) << ',' << format_double(s.avg_wage[t]) << ','
            << format_double(s.savings[t]) << ',' << format_double(s.avg_fragility[t]) << ','
            << s.bankruptcies[t] << ',' << format_double(s.loan_rate[t]) << ','
            << format_double(s.deposit_rate[t]) << ',' << format_double(s.theta[t]) << ','
            << format_double(s.c_t[t]) << ',' << format_double(s.zeta_t[t]) << "\n";
    }
    return out.str();
}

std::string relative_csv(const RunSeries& run, const RunSeries& baseline,
                         const std::vector<double>& relative) {
    std::ostringstream out;
    out << kRelativeHeader << "\n";
    for (std::size_t t = 0; t < relative.size(); ++t) {
        out << t << ',' << format_double(run.output[t]) << ','
            << format_double(baseline.output[t]) << ',' << format_double(relative[t]) << "\n";
    }
    return out.str();
}

std::string phase_row(const PhaseCell& c) {
    std::ostringstream out;
    out << format_double(c.dc_rel) << ',' << format_double(c.dzeta_rel) << ',' << c.shock_length
        << ',' << c.n_runs << ',' << format_double(c.p_crisis) << ','
        << format_double(c.peak_u_during_mean) << ',' << format_double(c.peak_u_after_mean);
    return out.str();
}

std::string phase_csv(const PhaseDiagram& diagram) {
    std::ostringstream out;
    out << kPhaseHeader << "\n";
    for (const auto& cell : diagram.cells) out << phase_row(cell) << "\n";
    return out.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::ordered_json base_manifest(const std::string& command, const ResolvedConfig& cfg) {
    nlohmann::ordered_json m;
    m["schema_version"] = kSchemaVersion;
    m["code_version"] = kCodeVersion;
    m["command"] = command;
    m["profile"] = to_string(cfg.profile);
    m["seeds"] = cfg.run.seeds;
    m["config_ini"] = render_config_ini(cfg);
    m["csv_schemas"] = {
        {"dashboard", kDashboardHeader},
        {"relative_output", kRelativeHeader},
        {"phase_diagram", kPhaseHeader},
    };
    return m;
}

nlohmann::ordered_json baseline_summary(const RunSeries& s) {
    nlohmann::ordered_json j;
    j["months"] = s.months();
    j["mean_unemployment"] = mean_of(s.unemployment);
    j["annualized_inflation"] = annualized_inflation(s, 0, static_cast<int>(s.months()));
    j["mean_avg_fragility"] = mean_of(s.avg_fragility);
    j["final_savings"] = s.savings.empty() ? 0.0 : s.savings.back();
    j["max_stock_flow_residual_ratio"] = s.max_residual_ratio;
    j["degenerate"] = s.degenerate;
    return j;
}

nlohmann::ordered_json run_summary(const RunSeries& s, const ShapeLabel& label,
                                   double peak_u_during, double peak_u_after) {
    nlohmann::ordered_json j = baseline_summary(s);
    j["shape"] = to_string(label.shape);
    j["time_to_recovery"] = label.time_to_recovery;
    j["trough"] = label.trough;
    j["relapses"] = label.relapses;
    j["peak_u_during"] = peak_u_during;
    j["peak_u_after"] = peak_u_after;
    return j;
}

}  // namespace mark0
