#include <cmath>

#include "doctest.h"
#include "mark0/metrics.hpp"

using namespace mark0;

namespace {

RunSeries series_with_output(const std::vector<double>& output) {
    RunSeries s;
    s.output = output;
    s.unemployment.assign(output.size(), 0.05);
    s.pi.assign(output.size(), 0.0);
    return s;
}

// piecewise-constant relative-output path builder
std::vector<double> path(int horizon, std::initializer_list<std::pair<int, double>> knots) {
    std::vector<double> rel(horizon, 1.0);
    double level = 1.0;
    auto it = knots.begin();
    for (int t = 0; t < horizon; ++t) {
        while (it != knots.end() && it->first == t) {
            level = it->second;
            ++it;
        }
        rel[t] = level;
    }
    return rel;
}

}  // namespace

TEST_CASE("relative output") {
    SUBCASE("identical runs give ones") {
        const auto a = series_with_output({10, 11, 12});
        const auto rel = relative_output(a, a);
        for (double r : rel) CHECK(r == 1.0);
    }
    SUBCASE("constant contraction") {
        const auto run = series_with_output({4, 4, 4});
        const auto base = series_with_output({10, 10, 10});
        const auto rel = relative_output(run, base);
        for (double r : rel) CHECK(r == doctest::Approx(0.4));
    }
    SUBCASE("zero baseline month is flagged") {
        const auto run = series_with_output({4, 4});
        const auto base = series_with_output({10, 0});
        bool degenerate = false;
        const auto rel = relative_output(run, base, &degenerate);
        CHECK(degenerate);
        CHECK(rel[1] == 0.0);
    }
    SUBCASE("length mismatch is an error") {
        const auto run = series_with_output({4, 4});
        const auto base = series_with_output({10});
        CHECK_THROWS(relative_output(run, base));
    }
}

TEST_CASE("shape classifier") {
    const int horizon = 120;
    const int shock_end = 6;

    SUBCASE("flat at one is an instant V") {
        const auto label = classify_shape(path(horizon, {}), shock_end, horizon);
        CHECK(label.shape == Shape::V);
        CHECK(label.time_to_recovery == 0);
    }
    SUBCASE("permanent collapse is L") {
        const auto label = classify_shape(path(horizon, {{2, 0.4}}), shock_end, horizon);
        CHECK(label.shape == Shape::L);
        CHECK(label.trough == doctest::Approx(0.4));
    }
    SUBCASE("dip with quick recovery is V") {
        const auto rel = path(horizon, {{1, 0.8}, {10, 1.0}});
        const auto label = classify_shape(rel, shock_end, horizon);
        CHECK(label.shape == Shape::V);
        CHECK(label.time_to_recovery == doctest::Approx(4));
    }
    SUBCASE("slow recovery is U") {
        const auto rel = path(horizon, {{1, 0.8}, {40, 1.0}});
        const auto label = classify_shape(rel, shock_end, horizon);
        CHECK(label.shape == Shape::U);
    }
    SUBCASE("recovery, relapse, recovery is W") {
        const auto rel = path(horizon, {{1, 0.7}, {8, 1.0}, {30, 0.85}, {40, 1.0}});
        const auto label = classify_shape(rel, shock_end, horizon);
        CHECK(label.shape == Shape::W);
        CHECK(label.relapses == 1);
    }
    SUBCASE("relapse without re-recovery ends as a permanent loss") {
        const auto rel = path(horizon, {{1, 0.7}, {8, 1.0}, {30, 0.5}});
        const auto label = classify_shape(rel, shock_end, horizon);
        CHECK(label.shape == Shape::L);
    }
    SUBCASE("shallow dip above the relapse level stays V") {
        const auto rel = path(horizon, {{1, 0.8}, {8, 1.0}, {30, 0.92}, {40, 1.0}});
        const auto label = classify_shape(rel, shock_end, horizon);
        CHECK(label.shape == Shape::V);
        CHECK(label.relapses == 0);
    }
    SUBCASE("boundary: recovery exactly at the V window is V, one later is U") {
        ShapeThresholds th;
        auto rel = path(horizon, {{1, 0.8}, {shock_end + th.v_months, 1.0}});
        CHECK(classify_shape(rel, shock_end, horizon).shape == Shape::V);
        rel = path(horizon, {{1, 0.8}, {shock_end + th.v_months + 1, 1.0}});
        CHECK(classify_shape(rel, shock_end, horizon).shape == Shape::U);
    }
    SUBCASE("sustain requirement: a six-month plateau is needed") {
        // five months at 1.0 then a fallback, never six in a row
        std::vector<double> rel(horizon, 0.5);
        for (int t = 10; t < horizon; t += 6) {
            for (int k = 0; k < 5 && t + k < horizon; ++k) rel[t + k] = 1.0;
        }
        CHECK(classify_shape(rel, shock_end, horizon).shape == Shape::L);
    }
    SUBCASE("scale invariance: classification uses relative output only") {
        const auto rel = path(horizon, {{1, 0.7}, {8, 1.0}, {30, 0.85}, {40, 1.0}});
        const auto a = classify_shape(rel, shock_end, horizon);
        // the classifier consumes ratios; rescaling both series by any
        // positive constant leaves the ratios identical by construction
        auto run = series_with_output(rel);
        auto base = series_with_output(std::vector<double>(rel.size(), 1.0));
        for (auto& v : run.output) v *= 37.5;
        for (auto& v : base.output) v *= 37.5;
        const auto rel2 = relative_output(run, base);
        const auto b = classify_shape(rel2, shock_end, horizon);
        CHECK(a.shape == b.shape);
        CHECK(a.time_to_recovery == b.time_to_recovery);
    }
    SUBCASE("lowering the relapse threshold never creates a W") {
        // monotonicity: a run with no dip below 0.90 cannot become W when
        // the threshold is lowered further
        const auto rel = path(horizon, {{1, 0.8}, {8, 1.0}, {30, 0.92}, {40, 1.0}});
        ShapeThresholds th;
        th.relapse_level = 0.90;
        CHECK(classify_shape(rel, shock_end, horizon, th).shape != Shape::W);
        th.relapse_level = 0.85;
        CHECK(classify_shape(rel, shock_end, horizon, th).shape != Shape::W);
    }
    SUBCASE("series shorter than the horizon is an error") {
        CHECK_THROWS(classify_shape(path(10, {}), shock_end, 20));
    }
}

TEST_CASE("peak unemployment") {
    RunSeries s;
    s.unemployment = {0.02, 0.4, 0.1};
    s.output.assign(3, 1.0);
    CHECK(peak_unemployment(s, 0, 3) == doctest::Approx(0.4));
    CHECK(peak_unemployment(s, 2, 3) == doctest::Approx(0.1));
    SUBCASE("constant series") {
        RunSeries c;
        c.unemployment.assign(10, 0.05);
        c.output.assign(10, 1.0);
        CHECK(peak_unemployment(c, 0, 10) == doctest::Approx(0.05));
    }
    SUBCASE("empty window is an error") { CHECK_THROWS(peak_unemployment(s, 2, 2)); }
}

TEST_CASE("crisis probability") {
    SUBCASE("all V gives zero, all L gives one") {
        std::vector<ShapeLabel> v(10), l(10);
        for (auto& x : v) x.shape = Shape::V;
        for (auto& x : l) x.shape = Shape::L;
        CHECK(crisis_probability(v) == 0.0);
        CHECK(crisis_probability(l) == 1.0);
    }
    SUBCASE("fraction in between, permutation invariant") {
        std::vector<ShapeLabel> mix(10);
        for (int i = 0; i < 10; ++i) mix[i].shape = i < 3 ? Shape::L : Shape::V;
        CHECK(crisis_probability(mix) == doctest::Approx(0.3));
        std::rotate(mix.begin(), mix.begin() + 4, mix.end());
        CHECK(crisis_probability(mix) == doctest::Approx(0.3));
    }
    SUBCASE("empty ensemble is an error") {
        std::vector<ShapeLabel> none;
        CHECK_THROWS(crisis_probability(none));
    }
}

TEST_CASE("annualized inflation") {
    RunSeries s;
    s.pi.assign(24, 0.001);
    s.output.assign(24, 1.0);
    CHECK(annualized_inflation(s, 0, 24) == doctest::Approx(std::pow(1.001, 12.0) - 1.0));
}
