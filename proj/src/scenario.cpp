#include "mark0/scenario.hpp"

#include <algorithm>
#include <stdexcept>

namespace mark0 {

bool ShockSchedule::in_lockdown(int t) const {
    for (const auto& w : windows) {
        if (t >= w.start && t < w.end) return true;
    }
    return false;
}

int ShockSchedule::final_end() const {
    int e = 0;
    for (const auto& w : windows) e = std::max(e, w.end);
    return e;
}

void ShockSchedule::validate() const {
    auto fail = [](const std::string& m) { throw std::invalid_argument("shock: " + m); };
    if (!(dc_rel >= 0.0 && dc_rel < 1.0)) fail("dc_rel must be in [0, 1)");
    if (!(dzeta_rel >= 0.0 && dzeta_rel < 1.0)) fail("dzeta_rel must be in [0, 1)");
    if (recovery_ramp < 0) fail("recovery_ramp must be >= 0");
    int prev_end = std::numeric_limits<int>::min();
    for (const auto& w : windows) {
        if (w.end <= w.start) fail("window end must be after start");
        if (w.start < prev_end) fail("windows must be disjoint and ordered");
        prev_end = w.end;
    }
}

std::vector<HelicopterEvent> ScenarioSpec::helicopter_events() const {
    std::vector<HelicopterEvent> events;
    if (policy.helicopter_kappa) {
        // by default the drop lands at the end of the last locked month, so
        // the boosted savings are in place when credit tightens again
        const int t = policy.helicopter_time.value_or(std::max(shock.final_end() - 1, 0));
        events.push_back({t, *policy.helicopter_kappa});
    }
    return events;
}

ShockValues shock_at(const ShockSchedule& s, int t, double c0, double zeta) {
    const double c_shocked = c0 * (1.0 - s.dc_rel);
    const double zeta_shocked = zeta * (1.0 - s.dzeta_rel);
    if (t < 0) return {c0, zeta};
    if (s.in_lockdown(t)) return {c_shocked, zeta_shocked};

    // linear recovery from the most recent closed window
    if (s.recovery_ramp > 0) {
        int last_close = std::numeric_limits<int>::min();
        for (const auto& w : s.windows) {
            if (w.end <= t) last_close = std::max(last_close, w.end);
        }
        if (last_close != std::numeric_limits<int>::min() && t < last_close + s.recovery_ramp) {
            const double frac =
                static_cast<double>(t - last_close) / static_cast<double>(s.recovery_ramp);
            return {c_shocked + frac * (c0 - c_shocked),
                    zeta_shocked + frac * (zeta - zeta_shocked)};
        }
    }
    return {c0, zeta};
}

double theta_at(const PolicySpec& p, int t, bool in_lockdown, double avg_fragility) {
    if (t < 0) return p.theta_baseline;
    switch (p.credit) {
        case CreditPolicy::None:
            return p.theta_baseline;
        case CreditPolicy::Naive:
            return in_lockdown ? std::numeric_limits<double>::infinity() : p.theta_baseline;
        case CreditPolicy::Adaptive:
            if (in_lockdown) return std::numeric_limits<double>::infinity();
            return std::max(p.theta_offset * avg_fragility, p.theta_baseline);
    }
    return p.theta_baseline;
}

}  // namespace mark0
