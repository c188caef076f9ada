#pragma once

#include <stdexcept>
#include <string>

namespace mark0 {

// Model constants. Defaults are the baseline configuration: full-employment
// regime, central bank switched off (zero base rate, no inflation targeting),
// constant consumption propensity, no fragility feedback on hiring/firing.
struct EconomyParams {
    int n_firms = 10000;            // number of firms (= number of households)
    double c0 = 0.5;                // baseline consumption propensity
    double beta = 2.0;              // intensity of choice (demand and labor softmax)
    double price_adjust = 0.01;     // gamma, relative size of price/wage moves
    double eta0_minus = 0.2;        // firing propensity
    double hire_fire_ratio = 2.0;   // R; hiring propensity eta0_plus = R * eta0_minus
    double dividend_share = 0.02;   // delta, fraction of cash paid out on profit
    double theta = 3.0;             // bankruptcy threshold on debt-to-payroll
    double revival_rate = 0.1;      // phi, monthly revival probability of a dead slot
    double zeta = 1.0;              // productivity: goods per worker per month
    double gamma0 = 0.0;            // floor of the fragility coupling
    double omega = 0.2;             // EMA weight for realized inflation
    double alpha_c = 0.0;           // sensitivity of consumption to real deposit rate
    double alpha_gamma = 0.0;       // sensitivity of the fragility coupling
    double tau_r = 0.0;             // weight of realized inflation in expectations
    double tau_t = 0.0;             // weight of the target in expectations
    double loss_share = 0.5;        // f: default costs borne by borrowers vs depositors
    double wage_indexation = 1.0;   // g: wage indexation to expected inflation
    double rho_star = 0.0;          // baseline central-bank rate
    double phi_pi = 0.0;            // central-bank reaction to inflation
    double pi_star = 0.0;           // inflation target
    bool demand_price_normalized = true;  // softmax on p/pbar; false = raw prices

    // Width of the initial debt-to-payroll dispersion across firms, centered
    // on one month of payroll. Internal constant, not a scenario knob.
    double initial_fragility_spread = 2.0;

    double eta0_plus() const { return hire_fire_ratio * eta0_minus; }

    void validate() const {
        auto fail = [](const std::string& m) { throw std::invalid_argument("params: " + m); };
        if (n_firms < 1) fail("n_firms must be >= 1");
        if (!(c0 > 0.0 && c0 <= 1.0)) fail("c0 must be in (0, 1]");
        if (beta < 0.0) fail("beta must be >= 0");
        if (!(price_adjust >= 0.0 && price_adjust < 1.0)) fail("price_adjust must be in [0, 1)");
        if (!(eta0_minus >= 0.0 && eta0_minus <= 1.0)) fail("eta0_minus must be in [0, 1]");
        if (hire_fire_ratio < 0.0) fail("hire_fire_ratio must be >= 0");
        if (eta0_plus() > 1.0) fail("hire_fire_ratio * eta0_minus must be <= 1");
        if (!(dividend_share >= 0.0 && dividend_share <= 1.0)) fail("dividend_share in [0, 1]");
        if (!(theta > 0.0)) fail("theta must be > 0 (may be infinite)");
        if (!(revival_rate >= 0.0 && revival_rate <= 1.0)) fail("revival_rate in [0, 1]");
        if (!(zeta > 0.0)) fail("zeta must be > 0");
        if (!(omega >= 0.0 && omega <= 1.0)) fail("omega in [0, 1]");
        if (!(loss_share >= 0.0 && loss_share <= 1.0)) fail("loss_share in [0, 1]");
        if (gamma0 < 0.0) fail("gamma0 must be >= 0");
    }
};

}  // namespace mark0
