#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "mark0/config.hpp"
#include "mark0/harness.hpp"

namespace mark0 {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kCodeVersion = "0.1.0";

inline constexpr const char* kDashboardHeader =
    "t,output,u,pi,pi_ema,pbar,wbar,S,avg_phi,bankruptcies,rho_l,rho_d,theta,c_t,zeta_t";
inline constexpr const char* kRelativeHeader = "t,output,baseline_output,relative";
inline constexpr const char* kPhaseHeader =
    "dc_rel,dzeta_rel,T_months,n_runs,p_L,peak_u_during_mean,peak_u_after_mean";

std::string dashboard_csv(const RunSeries& series);
std::string relative_csv(const RunSeries& run, const RunSeries& baseline,
                         const std::vector<double>& relative);
std::string phase_row(const PhaseCell& cell);
std::string phase_csv(const PhaseDiagram& diagram);

// throws std::runtime_error on any I/O failure
void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

nlohmann::ordered_json base_manifest(const std::string& command, const ResolvedConfig& cfg);

nlohmann::ordered_json baseline_summary(const RunSeries& series);
nlohmann::ordered_json run_summary(const RunSeries& series, const ShapeLabel& label,
                                   double peak_u_during, double peak_u_after);

}  // namespace mark0
