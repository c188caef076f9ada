#include "mark0/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mark0 {

std::string to_string(Shape s) {
    switch (s) {
        case Shape::V: return "V";
        case Shape::U: return "U";
        case Shape::W: return "W";
        case Shape::L: return "L";
    }
    return "?";
}

std::vector<double> relative_output(const RunSeries& run, const RunSeries& baseline,
                                    bool* degenerate) {
    if (run.months() != baseline.months()) {
        throw std::invalid_argument("relative_output: series lengths differ");
    }
    std::vector<double> rel(run.months());
    for (std::size_t i = 0; i < rel.size(); ++i) {
        if (baseline.output[i] > 0.0) {
            rel[i] = run.output[i] / baseline.output[i];
        } else {
            rel[i] = 0.0;
            if (degenerate) *degenerate = true;
        }
    }
    return rel;
}

namespace {

// first month >= from at which rel stays at/above `level` for `sustain`
// consecutive months; -1 if none
int first_sustained(std::span<const double> rel, int from, double level, int sustain) {
    const int n = static_cast<int>(rel.size());
    int streak = 0;
    for (int t = std::max(from, 0); t < n; ++t) {
        streak = rel[t] >= level ? streak + 1 : 0;
        if (streak >= sustain) return t - sustain + 1;
    }
    return -1;
}

}  // namespace

ShapeLabel classify_shape(std::span<const double> relative, int shock_end, int horizon,
                          const ShapeThresholds& th) {
    if (static_cast<int>(relative.size()) < horizon) {
        throw std::invalid_argument("classify_shape: series shorter than horizon");
    }
    ShapeLabel label;
    label.trough = 1.0;
    for (int t = 0; t < horizon; ++t) label.trough = std::min(label.trough, relative[t]);

    const int recovered_at =
        first_sustained(relative, 0, th.recovered_level, th.sustain_months);
    if (recovered_at < 0) {
        label.shape = Shape::L;
        label.time_to_recovery = -1;
        return label;
    }
    label.time_to_recovery = std::max(recovered_at - shock_end, 0);

    // scan for relapses after the first recovery
    int t = recovered_at;
    bool ended_recovered = true;
    while (t < horizon) {
        int relapse_at = -1;
        for (int s = t; s < horizon; ++s) {
            if (relative[s] < th.relapse_level) {
                relapse_at = s;
                break;
            }
        }
        if (relapse_at < 0) break;
        ++label.relapses;
        const int again = first_sustained(relative, relapse_at, th.recovered_level,
                                          th.sustain_months);
        if (again < 0) {
            ended_recovered = false;
            break;
        }
        t = again;
    }

    if (!ended_recovered) {
        label.shape = Shape::L;  // relapsed and stayed down: a permanent loss
    } else if (label.relapses > 0) {
        label.shape = Shape::W;
    } else if (label.time_to_recovery <= th.v_months) {
        label.shape = Shape::V;
    } else {
        label.shape = Shape::U;
    }
    return label;
}

double peak_unemployment(const RunSeries& run, int from, int to) {
    from = std::max(from, 0);
    to = std::min(to, static_cast<int>(run.months()));
    if (from >= to) throw std::invalid_argument("peak_unemployment: empty window");
    double peak = 0.0;
    for (int t = from; t < to; ++t) peak = std::max(peak, run.unemployment[t]);
    return peak;
}

double crisis_probability(std::span<const ShapeLabel> labels) {
    if (labels.empty()) throw std::invalid_argument("crisis_probability: empty ensemble");
    std::size_t count = 0;
    for (const auto& l : labels) {
        if (l.shape == Shape::L) ++count;
    }
    return static_cast<double>(count) / static_cast<double>(labels.size());
}

double annualized_inflation(const RunSeries& run, int from, int to) {
    from = std::max(from, 0);
    to = std::min(to, static_cast<int>(run.months()));
    if (from >= to) throw std::invalid_argument("annualized_inflation: empty window");
    double mean = 0.0;
    for (int t = from; t < to; ++t) mean += run.pi[t];
    mean /= static_cast<double>(to - from);
    return std::pow(1.0 + mean, 12.0) - 1.0;
}

}  // namespace mark0
