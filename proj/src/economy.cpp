#include "mark0/economy.hpp"

#include <algorithm>
#include <cmath>

#include "mark0/numeric.hpp"

namespace mark0 {

double consumption_budget(const HouseholdSector& h, double total_wages, double deposit_rate,
                          double ema_inflation, const EconomyParams& p) {
    const double c =
        h.consumption_propensity * (1.0 + p.alpha_c * (ema_inflation - deposit_rate));
    const double wealth = h.savings + total_wages + deposit_rate * h.savings;
    // perishable goods cannot be sold short
    return std::max(c * wealth, 0.0);
}

bool allocate_demand(double budget, std::span<const FirmState> firms, double beta,
                     double price_scale, std::vector<double>& demand_out) {
    const std::size_t n = firms.size();
    demand_out.assign(n, 0.0);

    double max_x = -std::numeric_limits<double>::infinity();
    bool any_alive = false;
    for (const auto& f : firms) {
        if (!f.alive) continue;
        any_alive = true;
        max_x = std::max(max_x, -beta * f.price / price_scale);
    }
    if (!any_alive || budget <= 0.0) return any_alive;

    KahanSum den;
    for (std::size_t i = 0; i < n; ++i) {
        if (!firms[i].alive) continue;
        const double e = std::exp(-beta * firms[i].price / price_scale - max_x);
        demand_out[i] = e;
        den.add(e);
    }
    const double d = den.value();
    for (std::size_t i = 0; i < n; ++i) {
        if (!firms[i].alive) continue;
        demand_out[i] = budget * (demand_out[i] / d) / firms[i].price;
    }
    return true;
}

void hireable_workers(std::span<const FirmState> firms, double avg_wage, double beta,
                      double unemployed, std::vector<double>& out) {
    const std::size_t n = firms.size();
    out.assign(n, 0.0);

    double max_x = -std::numeric_limits<double>::infinity();
    bool any_alive = false;
    for (const auto& f : firms) {
        if (!f.alive) continue;
        any_alive = true;
        max_x = std::max(max_x, beta * f.wage / avg_wage);
    }
    if (!any_alive) return;

    KahanSum den;
    for (std::size_t i = 0; i < n; ++i) {
        if (!firms[i].alive) continue;
        const double e = std::exp(beta * firms[i].wage / avg_wage - max_x);
        out[i] = e;
        den.add(e);
    }
    const double d = den.value();
    for (std::size_t i = 0; i < n; ++i) {
        if (firms[i].alive) out[i] = unemployed * (out[i] / d);
    }
}

PriceBranch price_branch(double production, double demand, double price, double avg_price) {
    if (production < demand) {
        return price < avg_price ? PriceBranch::RaiseActive : PriceBranch::RaiseFrozen;
    }
    if (production > demand) {
        return price > avg_price ? PriceBranch::CutActive : PriceBranch::CutFrozen;
    }
    return PriceBranch::Balanced;
}

double update_price(const FirmState& f, double avg_price, double expected_inflation, double gamma,
                    double xi, PriceBranch* branch) {
    const PriceBranch b = price_branch(f.production, f.last_demand, f.price, avg_price);
    if (branch) *branch = b;
    switch (b) {
        case PriceBranch::RaiseActive:
            return f.price * (1.0 + gamma * xi) * (1.0 + expected_inflation);
        case PriceBranch::CutActive:
            return f.price * (1.0 - gamma * xi) * (1.0 + expected_inflation);
        default:
            return f.price;
    }
}

double update_wage(const FirmState& f, double phi, double u_prev, double gamma,
                   double fragility_coupling, double wage_indexation, double expected_inflation,
                   double xi, WageBranch* branch) {
    const double index = 1.0 + wage_indexation * expected_inflation;
    if (f.production < f.last_demand && f.last_profit > 0.0) {
        double target =
            f.wage * (1.0 + gamma * (1.0 - fragility_coupling * phi) * (1.0 - u_prev) * xi) *
            index;
        WageBranch b = WageBranch::Raise;
        if (f.workforce > 0.0) {
            // cap at the wage that would have zeroed last month's profit
            const double implied_profit = f.last_sales + f.last_interest - target * f.workforce;
            if (implied_profit < 0.0) {
                target = (f.last_sales + f.last_interest) / f.workforce;
                b = WageBranch::RaiseClamped;
            }
        }
        if (branch) *branch = b;
        return std::max(target, f.wage * kWageFloorFactor);
    }
    if (f.production > f.last_demand && f.last_profit < 0.0) {
        if (branch) *branch = WageBranch::Cut;
        const double target =
            f.wage * (1.0 - gamma * (1.0 + fragility_coupling * phi) * u_prev * xi) * index;
        return std::max(target, f.wage * kWageFloorFactor);
    }
    if (branch) *branch = WageBranch::Frozen;
    return f.wage;
}

namespace {
double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }
}  // namespace

double eta_plus(double eta0_plus, double fragility_coupling, double phi) {
    return clamp01(eta0_plus * (1.0 - fragility_coupling * phi));
}

double eta_minus(double eta0_minus, double fragility_coupling, double phi) {
    return clamp01(eta0_minus * (1.0 + fragility_coupling * phi));
}

double update_workforce(const FirmState& f, double phi, double hireable, const EconomyParams& p,
                        double fragility_coupling, double zeta_t) {
    const double gap = f.last_demand - f.production;
    if (gap > 0.0) {
        const double ep = eta_plus(p.eta0_plus(), fragility_coupling, phi);
        return f.workforce + std::min(ep * gap / zeta_t, hireable);
    }
    if (gap < 0.0) {
        const double em = eta_minus(p.eta0_minus, fragility_coupling, phi);
        return std::max(f.workforce - em * (-gap) / zeta_t, 0.0);
    }
    return f.workforce;
}

double firm_profit(const FirmState& f, double demand, double loan_rate, double deposit_rate) {
    const double sales = f.price * std::min(f.production, demand);
    const double wage_bill = f.wage * f.workforce;
    const double interest =
        deposit_rate * std::max(f.cash, 0.0) - loan_rate * std::max(-f.cash, 0.0);
    return sales - wage_bill + interest;
}

double pay_dividends(std::span<FirmState> firms, std::span<const double> profits, double delta) {
    KahanSum total;
    for (std::size_t i = 0; i < firms.size(); ++i) {
        auto& f = firms[i];
        if (!f.alive || profits[i] <= 0.0 || f.cash <= 0.0) continue;
        const double div = delta * f.cash;
        f.cash -= div;
        total.add(div);
    }
    return total.value();
}

BankruptcyOutcome bankruptcies_and_revivals(std::span<FirmState> firms, double theta,
                                            double revival_rate, double avg_price,
                                            double avg_wage, double unemployed, double zeta_t,
                                            Rng& rng) {
    BankruptcyOutcome out;
    KahanSum cost;
    const double n_firms = static_cast<double>(firms.size());
    const bool theta_finite = std::isfinite(theta);
    for (auto& f : firms) {
        if (f.alive) {
            if (theta_finite && fragility(f) >= theta) {
                cost.add(std::max(-f.cash, 0.0));
                f.alive = false;
                f.cash = 0.0;
                f.production = 0.0;
                f.workforce = 0.0;
                f.last_demand = f.last_sales = f.last_interest = f.last_profit = 0.0;
                ++out.defaults;
            }
        } else if (rng.uniform() < revival_rate) {
            f.alive = true;
            f.price = avg_price;
            f.wage = avg_wage;
            f.cash = 0.0;
            f.workforce = rng.uniform() * unemployed / n_firms;
            f.production = zeta_t * f.workforce;
            f.last_demand = f.production;  // neutral first month
            f.last_sales = f.last_interest = f.last_profit = 0.0;
            ++out.revivals;
        }
    }
    out.default_cost = cost.value();
    return out;
}

Rates set_rates(double base_rate, double default_cost, double total_debt, double firm_deposits,
                double savings, double loss_share) {
    const double deposits = savings + firm_deposits;
    const bool have_debt = total_debt > 0.0;
    const bool have_deposits = deposits > 0.0;
    // shift the share of an empty side to the other so the month's write-off
    // is always recouped within the month
    double on_borrowers = loss_share;
    double on_depositors = 1.0 - loss_share;
    if (!have_debt) {
        on_borrowers = 0.0;
        on_depositors = 1.0;
    } else if (!have_deposits) {
        on_borrowers = 1.0;
        on_depositors = 0.0;
    }
    Rates r;
    r.loan = have_debt ? base_rate + on_borrowers * default_cost / total_debt : base_rate;
    r.deposit =
        have_deposits ? (base_rate * total_debt - on_depositors * default_cost) / deposits : 0.0;
    return r;
}

double taylor_rate(double ema_inflation, const EconomyParams& p) {
    return p.rho_star + p.phi_pi * (ema_inflation - p.pi_star);
}

InflationTracker update_inflation(const InflationTracker& prev, std::span<const FirmState> firms,
                                  const EconomyParams& p, bool* degenerate) {
    KahanSum price_weighted, wage_weighted, total;
    for (const auto& f : firms) {
        if (!f.alive || f.production <= 0.0) continue;
        price_weighted.add(f.price * f.production);
        wage_weighted.add(f.wage * f.production);
        total.add(f.production);
    }
    InflationTracker t = prev;
    const double y = total.value();
    if (y > 0.0) {
        t.avg_price = price_weighted.value() / y;
        t.avg_wage = wage_weighted.value() / y;
        t.instant_inflation = (t.avg_price - prev.avg_price) / prev.avg_price;
    } else {
        // no production anywhere: carry the averages, flag the economy
        t.instant_inflation = 0.0;
        if (degenerate) *degenerate = true;
    }
    t.ema_inflation = p.omega * t.instant_inflation + (1.0 - p.omega) * prev.ema_inflation;
    t.expected_inflation = p.tau_r * t.ema_inflation + p.tau_t * p.pi_star;
    return t;
}

bool apply_helicopter(HouseholdSector& h, BankSector& b, double kappa) {
    if (h.savings <= 0.0) return false;
    const double injection = (kappa - 1.0) * h.savings;
    b.total_money += injection;
    h.savings += injection;
    return true;
}

Economy::Economy(const EconomyParams& params, std::uint64_t seed)
    : params_(params), rng_(seed), zeta_prev_(params.zeta) {
    params_.validate();
    // Start at the self-consistent full-employment point: every firm employs
    // one worker and carries between zero and two months of payroll as debt
    // (one month on average), households hold the matching savings, so the
    // monetary base is exactly zero.
    const int n = params_.n_firms;
    firms_.resize(n);
    const double spread = params_.initial_fragility_spread;
    double debt_total = 0.0;
    for (auto& f : firms_) {
        f.workforce = 1.0;
        f.production = params_.zeta * f.workforce;
        f.price = 1.0 + rng_.uniform(-0.01, 0.01);
        f.wage = 1.0;
        f.cash = -(1.0 + spread * (rng_.uniform() - 0.5)) * f.wage * f.workforce;
        debt_total += -f.cash;
        f.alive = true;
        f.last_demand = f.production;
        f.last_sales = f.last_interest = f.last_profit = 0.0;
    }
    household_.savings = debt_total;
    household_.consumption_propensity = params_.c0;
    bank_.loss_share = params_.loss_share;
    bank_.total_money = 0.0;

    KahanSum pw, y;
    for (const auto& f : firms_) {
        pw.add(f.price * f.production);
        y.add(f.production);
    }
    inflation_.avg_price = pw.value() / y.value();
    inflation_.avg_wage = 1.0;

    scratch_a_.resize(n);
    scratch_b_.resize(n);
    cash_basis_.resize(n);
}

double Economy::unemployed_count() const {
    KahanSum employed;
    for (const auto& f : firms_) {
        if (f.alive) employed.add(f.workforce);
    }
    return std::max(static_cast<double>(params_.n_firms) - employed.value(), 0.0);
}

double Economy::unemployment() const {
    return std::clamp(unemployed_count() / static_cast<double>(params_.n_firms), 0.0, 1.0);
}

double Economy::avg_fragility() const {
    KahanSum weighted, total;
    for (const auto& f : firms_) {
        if (!f.alive || f.production <= 0.0) continue;
        weighted.add(fragility(f) * f.production);
        total.add(f.production);
    }
    return total.value() > 0.0 ? weighted.value() / total.value() : 0.0;
}

double Economy::total_output() const {
    KahanSum y;
    for (const auto& f : firms_) {
        if (f.alive) y.add(f.production);
    }
    return y.value();
}

double Economy::stock_flow_residual() const {
    KahanSum cash;
    for (const auto& f : firms_) cash.add(f.cash);
    return std::abs(household_.savings + cash.value() - bank_.total_money);
}

StepRecord Economy::step(const StepInputs& in) {
    const auto& P = params_;
    const int n = P.n_firms;
    const double n_d = static_cast<double>(n);

    const double fragility_coupling =
        std::max(P.alpha_gamma * (bank_.loan_rate - inflation_.ema_inflation), P.gamma0);
    const double pihat = inflation_.expected_inflation;
    const double pbar_prev = inflation_.avg_price;
    const double wbar_prev = inflation_.avg_wage;

    // ---- firm decisions: wages, prices, then production targets.
    // All rules compare last month's production against last month's demand.
    KahanSum employed_prev;
    for (const auto& f : firms_) {
        if (f.alive) employed_prev.add(f.workforce);
    }
    const double u_prev = std::clamp(1.0 - employed_prev.value() / n_d, 0.0, 1.0);
    const double pool = std::max(n_d - employed_prev.value(), 0.0);

    for (int i = 0; i < n; ++i) {
        auto& f = firms_[i];
        if (!f.alive) continue;
        const double phi = fragility(f);
        scratch_a_[i] = phi;

        const bool wage_active = (f.production < f.last_demand && f.last_profit > 0.0) ||
                                 (f.production > f.last_demand && f.last_profit < 0.0);
        const double xi_w = wage_active ? rng_.uniform() : 0.0;
        f.wage = update_wage(f, phi, u_prev, P.price_adjust, fragility_coupling,
                             P.wage_indexation, pihat, xi_w);

        const PriceBranch pb = price_branch(f.production, f.last_demand, f.price, pbar_prev);
        const bool price_active =
            pb == PriceBranch::RaiseActive || pb == PriceBranch::CutActive;
        const double xi_p = price_active ? rng_.uniform() : 0.0;
        f.price = update_price(f, pbar_prev, pihat, P.price_adjust, xi_p);
    }

    hireable_workers(firms_, wbar_prev, P.beta, pool, scratch_b_);
    for (int i = 0; i < n; ++i) {
        auto& f = firms_[i];
        if (!f.alive) continue;
        f.workforce = update_workforce(f, scratch_a_[i], scratch_b_[i], P, fragility_coupling,
                                       in.zeta_t);
        f.production = in.zeta_t * f.workforce;
    }

    // ---- bankruptcy pass and revivals at this month's threshold
    KahanSum employed_now;
    for (const auto& f : firms_) {
        if (f.alive) employed_now.add(f.workforce);
    }
    const double pool_now = std::max(n_d - employed_now.value(), 0.0);
    const BankruptcyOutcome bust = bankruptcies_and_revivals(
        firms_, in.theta_t, P.revival_rate, pbar_prev, wbar_prev, pool_now, in.zeta_t, rng_);
    bank_.default_cost = bust.default_cost;

    // ---- rates for this month. Interest applies to the balances as they
    // stand here, so the month's write-off is recouped within the month and
    // the money stock stays fixed.
    KahanSum firm_deposits, firm_debt;
    for (int i = 0; i < n; ++i) {
        const auto& f = firms_[i];
        cash_basis_[i] = f.alive ? f.cash : 0.0;
        if (!f.alive) continue;
        if (f.cash >= 0.0) {
            firm_deposits.add(f.cash);
        } else {
            firm_debt.add(-f.cash);
        }
    }
    const double savings0 = household_.savings;
    bank_.base_rate = taylor_rate(inflation_.ema_inflation, P);
    const Rates rates = set_rates(bank_.base_rate, bust.default_cost, firm_debt.value(),
                                  firm_deposits.value(), savings0, P.loss_share);
    bank_.loan_rate = rates.loan;
    bank_.deposit_rate = rates.deposit;

    // ---- household budget
    KahanSum wage_bill_sum;
    for (const auto& f : firms_) {
        if (f.alive) wage_bill_sum.add(f.wage * f.workforce);
    }
    const double wage_bill_total = wage_bill_sum.value();
    household_.consumption_propensity = in.c_t;
    const double budget = consumption_budget(household_, wage_bill_total, bank_.deposit_rate,
                                             inflation_.ema_inflation, P);
    household_.last_budget = budget;

    // ---- demand allocation and trade
    const double price_scale = P.demand_price_normalized ? pbar_prev : 1.0;
    if (!allocate_demand(budget, firms_, P.beta, price_scale, scratch_b_)) {
        degenerate_ = true;
    }

    std::fill(scratch_a_.begin(), scratch_a_.end(), 0.0);
    KahanSum consumed;
    for (int i = 0; i < n; ++i) {
        auto& f = firms_[i];
        if (!f.alive) continue;
        const double demand = scratch_b_[i];
        const double sales = f.price * std::min(f.production, demand);
        const double wage_bill = f.wage * f.workforce;
        const double basis = cash_basis_[i];
        const double interest =
            bank_.deposit_rate * std::max(basis, 0.0) - bank_.loan_rate * std::max(-basis, 0.0);
        f.cash += sales;
        f.cash -= wage_bill;
        f.cash += interest;
        consumed.add(sales);
        const double profit = sales - wage_bill + interest;
        scratch_a_[i] = profit;
        f.last_demand = demand;
        f.last_sales = sales;
        f.last_interest = interest;
        f.last_profit = profit;
    }
    const double total_consumed = consumed.value();
    household_.last_consumption = total_consumed;

    const double dividends = pay_dividends(firms_, scratch_a_, P.dividend_share);
    household_.savings = savings0 - total_consumed + wage_bill_total +
                         bank_.deposit_rate * savings0 + dividends;

    // ---- inflation bookkeeping
    bool no_production = false;
    inflation_ = update_inflation(inflation_, firms_, P, &no_production);
    if (no_production) degenerate_ = true;

    // ---- scheduled money injections
    for (const double kappa : in.kappas) {
        apply_helicopter(household_, bank_, kappa);
    }

    zeta_prev_ = in.zeta_t;
    ++month_;

    StepRecord rec;
    rec.output = total_output();
    rec.unemployment = unemployment();
    rec.pi = inflation_.instant_inflation;
    rec.pi_ema = inflation_.ema_inflation;
    rec.avg_price = inflation_.avg_price;
    rec.avg_wage = inflation_.avg_wage;
    rec.savings = household_.savings;
    rec.avg_fragility = avg_fragility();
    rec.bankruptcies = bust.defaults;
    rec.loan_rate = bank_.loan_rate;
    rec.deposit_rate = bank_.deposit_rate;
    rec.theta = in.theta_t;
    rec.c_t = in.c_t;
    rec.zeta_t = in.zeta_t;
    rec.budget = budget;
    rec.consumed = total_consumed;
    rec.money = bank_.total_money;
    rec.sf_residual = stock_flow_residual();
    return rec;
}

}  // namespace mark0
