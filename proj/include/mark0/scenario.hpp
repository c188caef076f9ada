#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "mark0/economy.hpp"

namespace mark0 {

struct LockdownWindow {
    int start = 0;  // first shocked month
    int end = 0;    // first month after the window, [start, end)
};

// Time profile of the shock: inside a window both the consumption propensity
// and the productivity are reduced; after a window closes they return to
// baseline linearly over `recovery_ramp` months (0 = instantaneous).
struct ShockSchedule {
    std::vector<LockdownWindow> windows;  // disjoint, ordered
    double dc_rel = 0.0;                  // relative consumption drop
    double dzeta_rel = 0.0;               // relative productivity drop
    int recovery_ramp = 0;

    bool empty() const { return windows.empty() || (dc_rel == 0.0 && dzeta_rel == 0.0); }
    bool in_lockdown(int t) const;
    int final_end() const;  // 0 when there is no window
    void validate() const;
};

enum class CreditPolicy { None, Naive, Adaptive };

struct HelicopterEvent {
    int month = 0;
    double kappa = 1.5;
};

struct PolicySpec {
    CreditPolicy credit = CreditPolicy::None;
    double theta_baseline = 3.0;
    double theta_offset = 1.25;  // multiplier on average fragility when unwinding
    std::optional<double> helicopter_kappa;
    std::optional<int> helicopter_time;  // default: closing month of the last window
};

struct ScenarioSpec {
    ShockSchedule shock;
    PolicySpec policy;

    // Scheduled savings multipliers; the time defaults to the end of the shock.
    std::vector<HelicopterEvent> helicopter_events() const;
};

struct ShockValues {
    double c_t;
    double zeta_t;
};

// Scheduled consumption propensity and productivity at month t (t < 0 is the
// warm-up and always returns the baseline).
ShockValues shock_at(const ShockSchedule& s, int t, double c0, double zeta);

// Bankruptcy threshold at month t. Naive and adaptive suspend defaults
// during lockdowns; adaptive unwinds afterwards by tracking the measured
// average fragility, never below the baseline.
double theta_at(const PolicySpec& p, int t, bool in_lockdown, double avg_fragility);

}  // namespace mark0
