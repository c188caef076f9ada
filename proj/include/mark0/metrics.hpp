#pragma once

#include <span>
#include <string>
#include <vector>

namespace mark0 {

// Monthly observables of one run, columnar. Month 0 is the start of the
// shock clock (the first month after warm-up).
struct RunSeries {
    std::vector<double> output;
    std::vector<double> unemployment;
    std::vector<double> pi;
    std::vector<double> pi_ema;
    std::vector<double> avg_price;
    std::vector<double> avg_wage;
    std::vector<double> savings;
    std::vector<double> avg_fragility;
    std::vector<int> bankruptcies;
    std::vector<double> loan_rate;
    std::vector<double> deposit_rate;
    std::vector<double> theta;
    std::vector<double> c_t;
    std::vector<double> zeta_t;
    std::vector<double> money;

    double max_residual_ratio = 0.0;  // stock-flow residual / tolerance scale
    bool degenerate = false;

    std::size_t months() const { return output.size(); }
};

enum class Shape { V, U, W, L };

std::string to_string(Shape s);

struct ShapeLabel {
    Shape shape = Shape::V;
    int time_to_recovery = 0;  // months from shock end to first sustained recovery
    double trough = 1.0;       // minimum relative output
    int relapses = 0;          // dips below the relapse level after first recovery
};

// Classifier thresholds. The recovery shapes are qualitative in origin;
// these constants pin them down and are exposed in the configuration.
struct ShapeThresholds {
    double recovered_level = 0.95;
    int sustain_months = 6;
    int v_months = 12;  // recovery within this many months of shock end => V
    double relapse_level = 0.90;
};

// Elementwise run/baseline output. A zero baseline month is flagged and
// contributes 0.
std::vector<double> relative_output(const RunSeries& run, const RunSeries& baseline,
                                    bool* degenerate = nullptr);

// Deterministic rule: L if never recovered (or relapsed for good), W if
// recovered-relapsed-recovered, V if first recovery came quickly, U otherwise.
ShapeLabel classify_shape(std::span<const double> relative, int shock_end, int horizon,
                          const ShapeThresholds& thresholds = {});

// max of u over the half-open window [from, to)
double peak_unemployment(const RunSeries& run, int from, int to);

double crisis_probability(std::span<const ShapeLabel> labels);

// (1 + mean monthly inflation)^12 - 1 over [from, to)
double annualized_inflation(const RunSeries& run, int from, int to);

}  // namespace mark0
