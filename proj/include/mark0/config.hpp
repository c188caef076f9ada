#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mark0/harness.hpp"

namespace mark0 {

class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& m) : std::runtime_error("config: " + m) {}
};

enum class Profile { Desk, Full };

std::string to_string(Profile p);
Profile profile_from_string(const std::string& s);

struct RunSettings {
    int warmup = 300;
    int horizon = 180;
    std::vector<std::uint64_t> seeds = {1};
    std::string out_dir;
    int threads = 0;  // 0 = hardware concurrency
};

struct GridSettings {
    std::vector<double> dc_values;
    std::vector<double> dzeta_values;
    int shock_length = 6;
    int runs_per_cell = 0;  // 0 = profile default
};

// A fully resolved configuration: every omitted key filled with its default,
// profile-dependent sizes applied. Rendering and reparsing it is an identity.
struct ResolvedConfig {
    Profile profile = Profile::Desk;
    EconomyParams params;
    bool has_shock = false;
    ShockSchedule shock;
    PolicySpec policy;
    RunSettings run;
    ShapeThresholds thresholds;
    std::optional<GridSettings> grid;

    ScenarioSpec scenario() const { return {has_shock ? shock : ShockSchedule{}, policy}; }
    RunSpec run_spec() const {
        return {params, scenario(), run.warmup, run.horizon, thresholds};
    }
};

// Parses the sectioned key=value format. Unknown sections or keys are
// errors; omitted keys take documented defaults.
ResolvedConfig parse_config_text(const std::string& text, Profile profile);

ResolvedConfig load_config_file(const std::string& path, Profile profile);

// Canonical echo of a resolved config; reparsing reproduces it exactly.
std::string render_config_ini(const ResolvedConfig& cfg);

// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

std::vector<std::uint64_t> parse_seed_spec(const std::string& text);

}  // namespace mark0
