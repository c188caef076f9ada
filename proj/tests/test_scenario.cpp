#include <cmath>
#include <limits>

#include "doctest.h"
#include "mark0/scenario.hpp"

using namespace mark0;

TEST_CASE("shock schedule") {
    SUBCASE("inside a window both values are reduced") {
        ShockSchedule s;
        s.windows = {{0, 6}};
        s.dzeta_rel = 0.1;
        s.dc_rel = 0.0;
        const auto v = shock_at(s, 3, 0.5, 1.0);
        CHECK(v.zeta_t == doctest::Approx(0.9));
        CHECK(v.c_t == doctest::Approx(0.5));
    }

    SUBCASE("window closed, no ramp: instant return to baseline") {
        ShockSchedule s;
        s.windows = {{0, 6}};
        s.dzeta_rel = 0.1;
        s.dc_rel = 0.3;
        const auto v = shock_at(s, 6, 0.5, 1.0);
        CHECK(v.zeta_t == 1.0);
        CHECK(v.c_t == 0.5);
    }

    SUBCASE("linear ramp between two windows") {
        ShockSchedule s;
        s.windows = {{0, 3}, {7, 10}};
        s.dc_rel = 0.3;
        s.recovery_ramp = 4;
        const double c0 = 0.5;
        const double c_shock = c0 * (1.0 - 0.3);
        // two months into the four-month ramp after the first window
        const auto v = shock_at(s, 5, c0, 1.0);
        CHECK(v.c_t == doctest::Approx(c_shock + 0.5 * (c0 - c_shock)));
        // re-entering the second window reapplies the shocked value
        CHECK(shock_at(s, 7, c0, 1.0).c_t == doctest::Approx(c_shock));
        // ramp again after the second window
        CHECK(shock_at(s, 12, c0, 1.0).c_t ==
              doctest::Approx(c_shock + 0.5 * (c0 - c_shock)));
        CHECK(shock_at(s, 14, c0, 1.0).c_t == c0);
    }

    SUBCASE("piecewise linear and continuous at the ramp boundaries") {
        ShockSchedule s;
        s.windows = {{0, 6}};
        s.dc_rel = 0.4;
        s.dzeta_rel = 0.2;
        s.recovery_ramp = 5;
        for (int t = -2; t < 20; ++t) {
            const auto a = shock_at(s, t, 0.5, 1.0);
            const auto b = shock_at(s, t, 0.5, 1.0);
            CHECK(a.c_t == b.c_t);  // pure function of t
        }
        // reaches baseline exactly at the end of the ramp
        CHECK(shock_at(s, 10, 0.5, 1.0).c_t < 0.5);
        CHECK(shock_at(s, 11, 0.5, 1.0).c_t == 0.5);
    }

    SUBCASE("warm-up months are always baseline") {
        ShockSchedule s;
        s.windows = {{0, 6}};
        s.dc_rel = 0.3;
        CHECK(shock_at(s, -1, 0.5, 1.0).c_t == 0.5);
    }

    SUBCASE("validation rejects overlapping windows and out-of-range drops") {
        ShockSchedule s;
        s.windows = {{0, 6}, {3, 9}};
        CHECK_THROWS(s.validate());
        s.windows = {{0, 6}};
        s.dc_rel = 1.0;
        CHECK_THROWS(s.validate());
        s.dc_rel = 0.3;
        CHECK_NOTHROW(s.validate());
    }
}

TEST_CASE("credit policy threshold") {
    PolicySpec p;
    p.theta_baseline = 3.0;
    p.theta_offset = 1.25;
    const double inf = std::numeric_limits<double>::infinity();

    SUBCASE("no policy: baseline always") {
        p.credit = CreditPolicy::None;
        CHECK(theta_at(p, 3, true, 6.0) == 3.0);
        CHECK(theta_at(p, 30, false, 6.0) == 3.0);
    }
    SUBCASE("naive: unlimited credit during lockdown, instant snap-back") {
        p.credit = CreditPolicy::Naive;
        CHECK(theta_at(p, 3, true, 1.0) == inf);
        CHECK(theta_at(p, 9, false, 9.0) == 3.0);
    }
    SUBCASE("adaptive: tracks measured fragility, never below baseline") {
        p.credit = CreditPolicy::Adaptive;
        CHECK(theta_at(p, 3, true, 1.0) == inf);
        CHECK(theta_at(p, 12, false, 6.0) == doctest::Approx(7.5));
        CHECK(theta_at(p, 12, false, 2.0) == 3.0);
    }
    SUBCASE("never below baseline after the shock") {
        p.credit = CreditPolicy::Adaptive;
        for (double phi = -5.0; phi < 10.0; phi += 0.37) {
            CHECK(theta_at(p, 20, false, phi) >= 3.0);
        }
    }
    SUBCASE("warm-up uses the baseline threshold") {
        p.credit = CreditPolicy::Adaptive;
        CHECK(theta_at(p, -10, false, 8.0) == 3.0);
    }
}

TEST_CASE("helicopter schedule resolution") {
    ScenarioSpec scenario;
    scenario.shock.windows = {{0, 9}};
    scenario.shock.dc_rel = 0.3;

    SUBCASE("defaults to the closing month of the last window") {
        scenario.policy.helicopter_kappa = 1.5;
        const auto events = scenario.helicopter_events();
        REQUIRE(events.size() == 1);
        CHECK(events[0].month == 9);
        CHECK(events[0].kappa == 1.5);
    }
    SUBCASE("explicit time wins") {
        scenario.policy.helicopter_kappa = 2.0;
        scenario.policy.helicopter_time = 12;
        CHECK(scenario.helicopter_events()[0].month == 12);
    }
    SUBCASE("no kappa, no events") {
        CHECK(scenario.helicopter_events().empty());
    }
}
