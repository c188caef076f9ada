// scratch diagnostics binary, not part of the shipped artifact
#include <cmath>
#include <cstdio>

#include "mark0/economy.hpp"

using namespace mark0;

int main(int argc, char** argv) {
    EconomyParams p;
    p.n_firms = argc > 1 ? std::atoi(argv[1]) : 1000;
    const int months = argc > 2 ? std::atoi(argv[2]) : 400;
    Economy e(p, 42);
    for (int t = 0; t < months; ++t) {
        const auto rec = e.step({p.c0, p.zeta, p.theta, {}});
        if (t % 20 == 0 || t == months - 1) {
            // price dispersion and demand-gap sign split
            double mean_p = 0, var_p = 0, n_live = 0, under = 0, gap = 0, phi = 0;
            for (const auto& f : e.firms()) {
                if (!f.alive) continue;
                n_live += 1;
                mean_p += f.price;
                if (f.production < f.last_demand) under += 1;
                gap += (f.last_demand - f.production);
            }
            mean_p /= n_live;
            for (const auto& f : e.firms()) {
                if (f.alive) var_p += (f.price - mean_p) * (f.price - mean_p);
            }
            var_p /= n_live;
            phi = e.avg_fragility();
            std::printf(
                "t=%4d u=%.3f S=%8.1f pbar=%.3f wbar=%.3f sigp=%.4f under=%.2f gap=%7.2f "
                "phi=%6.2f pi=%+.4f budget=%8.1f consumed=%8.1f\n",
                t, rec.unemployment, rec.savings, rec.avg_price, rec.avg_wage,
                std::sqrt(var_p), under / n_live, gap, phi, rec.pi, rec.budget, rec.consumed);
        }
    }
    return 0;
}
