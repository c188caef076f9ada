#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "mark0/params.hpp"
#include "mark0/rng.hpp"

namespace mark0 {

// One firm: production of perishable goods, posted price, wage, cash balance
// (negative cash is bank debt). The last_* fields carry the previous month's
// market outcome, which drives this month's decision rules.
struct FirmState {
    double production = 0.0;  // Y: goods produced this month
    double workforce = 0.0;   // N = Y / zeta
    double price = 1.0;
    double wage = 1.0;
    double cash = 0.0;  // E: signed, negative = debt
    bool alive = true;

    double last_demand = 0.0;
    double last_sales = 0.0;     // value sold: p * min(Y, D)
    double last_interest = 0.0;  // deposit interest earned minus loan interest paid
    double last_profit = 0.0;
};

// Debt-to-payroll ratio. Healthy firms (positive cash) have negative values.
// A firm with no payroll is fragile only if it carries debt.
inline double fragility(double cash, double wage, double workforce) {
    const double payroll = wage * workforce;
    if (payroll > 0.0) return -cash / payroll;
    return cash < 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

inline double fragility(const FirmState& f) { return fragility(f.cash, f.wage, f.workforce); }

struct HouseholdSector {
    double savings = 0.0;
    double consumption_propensity = 0.5;  // c(t), rescheduled every month
    double last_budget = 0.0;             // C_B
    double last_consumption = 0.0;        // C <= C_B
};

struct BankSector {
    double base_rate = 0.0;     // rho_0 from the central-bank rule
    double loan_rate = 0.0;     // rho_l charged on firm debt
    double deposit_rate = 0.0;  // rho_d paid on savings and firm deposits
    double default_cost = 0.0;  // D: debt written off this month
    double loss_share = 0.5;    // f
    double total_money = 0.0;   // M: constant except at helicopter events
};

struct InflationTracker {
    double avg_price = 1.0;          // production-weighted
    double avg_wage = 1.0;           // production-weighted
    double instant_inflation = 0.0;  // pi(t)
    double ema_inflation = 0.0;      // smoothed "realized" inflation
    double expected_inflation = 0.0; // pi_hat = tau_r * ema + tau_t * target
};

enum class PriceBranch { RaiseActive, RaiseFrozen, CutActive, CutFrozen, Balanced };
enum class WageBranch { Raise, RaiseClamped, Cut, Frozen };

// ---- decision rules (pure; unit-tested directly, composed by Economy::step)

// C_B = c * [S + W + rho_d * S], with c = c0 * (1 + alpha_c * (ema - rho_d)),
// floored at zero (perishable goods cannot be sold short).
double consumption_budget(const HouseholdSector& h, double total_wages, double deposit_rate,
                          double ema_inflation, const EconomyParams& p);

// Demand for each live firm: softmax weights over prices, budget spread so
// that sum(p_i * D_i) == budget. price_scale rescales prices inside the
// exponent (pass the average price for the scale-free variant, 1 for raw).
// Dead firms receive zero. Returns false (all-dead) with zero demand.
bool allocate_demand(double budget, std::span<const FirmState> firms, double beta,
                     double price_scale, std::vector<double>& demand_out);

// Per-firm share of the unemployed pool, softmax on relative wages.
void hireable_workers(std::span<const FirmState> firms, double avg_wage, double beta,
                      double unemployed, std::vector<double>& out);

static constexpr double kWageFloorFactor = 1e-3;

PriceBranch price_branch(double production, double demand, double price, double avg_price);

// Four-branch multiplicative price rule: raise only when sold out and still
// cheaper than average, cut only when overstocked and pricier than average.
double update_price(const FirmState& f, double avg_price, double expected_inflation,
                    double gamma, double xi, PriceBranch* branch = nullptr);

// Wage rule: raise on (excess demand, positive profit), cut on (excess
// supply, loss). A raise is capped at the wage that would have zeroed last
// month's profit. phi is the firm's fragility at decision time.
double update_wage(const FirmState& f, double phi, double u_prev, double gamma,
                   double fragility_coupling, double wage_indexation, double expected_inflation,
                   double xi, WageBranch* branch = nullptr);

// Hiring/firing sensitivities, clamped to [0, 1].
double eta_plus(double eta0_plus, double fragility_coupling, double phi);
double eta_minus(double eta0_minus, double fragility_coupling, double phi);

// Production adjustment toward last month's demand, limited by the workers
// the firm can attract. Returns the new workforce (production = zeta * N).
double update_workforce(const FirmState& f, double phi, double hireable, const EconomyParams& p,
                        double fragility_coupling, double zeta_t);

// P = sales - wage bill + deposit interest - loan interest. Interest on debt
// is a cost (the bank is on the receiving side).
double firm_profit(const FirmState& f, double demand, double loan_rate, double deposit_rate);

// Transfers delta * cash from every firm with positive profit and positive
// cash; returns the total paid into household savings.
double pay_dividends(std::span<FirmState> firms, std::span<const double> profits, double delta);

struct BankruptcyOutcome {
    double default_cost = 0.0;
    int defaults = 0;
    int revivals = 0;
};

// Kills live firms whose fragility reached theta (skipped entirely when theta
// is infinite), then revives dead slots with probability `revival_rate`,
// initialized at the average price/wage with zero cash and a random small
// workforce drawn from the unemployed pool.
BankruptcyOutcome bankruptcies_and_revivals(std::span<FirmState> firms, double theta,
                                            double revival_rate, double avg_price,
                                            double avg_wage, double unemployed, double zeta_t,
                                            Rng& rng);

struct Rates {
    double loan = 0.0;
    double deposit = 0.0;
};

// Spreads the month's default cost over borrowers (share f) and depositors
// (share 1-f); an empty side shifts its share to the other so the write-off
// is always recouped within the month.
Rates set_rates(double base_rate, double default_cost, double total_debt, double firm_deposits,
                double savings, double loss_share);

// rho_0 = rho* + phi_pi * (ema - target)
double taylor_rate(double ema_inflation, const EconomyParams& p);

// Production-weighted average price/wage, instant inflation, EMA update and
// expectations. Zero total production carries the previous averages.
InflationTracker update_inflation(const InflationTracker& prev, std::span<const FirmState> firms,
                                  const EconomyParams& p, bool* degenerate = nullptr);

// ---- the assembled economy

struct StepInputs {
    double c_t;                      // scheduled consumption propensity
    double zeta_t;                   // scheduled productivity
    double theta_t;                  // scheduled bankruptcy threshold (may be inf)
    std::span<const double> kappas;  // helicopter multipliers firing this month
};

struct StepRecord {
    double output = 0.0;
    double unemployment = 0.0;
    double pi = 0.0;
    double pi_ema = 0.0;
    double avg_price = 0.0;
    double avg_wage = 0.0;
    double savings = 0.0;
    double avg_fragility = 0.0;
    int bankruptcies = 0;
    double loan_rate = 0.0;
    double deposit_rate = 0.0;
    double theta = 0.0;
    double c_t = 0.0;
    double zeta_t = 0.0;
    double budget = 0.0;
    double consumed = 0.0;
    double money = 0.0;
    double sf_residual = 0.0;  // |S + E+ - E- - M|
};

class Economy {
  public:
    Economy(const EconomyParams& params, std::uint64_t seed);

    // Advances one month. Never throws on economic degeneracy; flags it.
    StepRecord step(const StepInputs& in);

    const EconomyParams& params() const { return params_; }
    std::span<const FirmState> firms() const { return firms_; }
    const HouseholdSector& household() const { return household_; }
    const BankSector& bank() const { return bank_; }
    const InflationTracker& inflation() const { return inflation_; }
    double unemployment() const;
    double unemployed_count() const;
    double avg_fragility() const;  // production-weighted over live firms
    double total_output() const;
    bool degenerate() const { return degenerate_; }
    long month() const { return month_; }

    // |S + E+ - E- - M| at the end of the last step
    double stock_flow_residual() const;

    HouseholdSector& household_mut() { return household_; }
    BankSector& bank_mut() { return bank_; }

  private:
    EconomyParams params_;
    std::vector<FirmState> firms_;
    HouseholdSector household_;
    BankSector bank_;
    InflationTracker inflation_;
    Rng rng_;
    double zeta_prev_;
    long month_ = 0;
    bool degenerate_ = false;

    // per-step scratch, reused to avoid allocation
    std::vector<double> scratch_a_;  // hireable shares, then profits
    std::vector<double> scratch_b_;  // demand
    std::vector<double> cash_basis_; // balances interest applies to
};

// Multiplies household savings by kappa, financing the difference with new
// money. No-op (flagged by return value) when savings are not positive.
bool apply_helicopter(HouseholdSector& h, BankSector& b, double kappa);

}  // namespace mark0
