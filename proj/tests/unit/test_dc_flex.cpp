#include "doctest.h"
#include "fixtures.hpp"
#include "lecdc/coordinator.hpp"
#include "lecdc/dc_flex.hpp"
#include "lecdc/solvers.hpp"
#include "oracle.hpp"

using namespace lecdc;
using milp::LinExpr;

namespace {

struct DcOnly {
    milp::Model model;
    DcHandles h;
};

DcOnly dc_only(const DataCentreSpec& spec, const ExogenousProfiles& p, const Series& price,
               ScenarioConfig scenario = ScenarioConfig::tc_jp()) {
    DcOnly d;
    TimeGrid g{1.0, static_cast<int>(price.size()), 0};
    d.h = build_dc_block(d.model, spec, p, g, scenario);
    LinExpr obj;
    for (std::size_t t = 0; t < price.size(); ++t) obj.add(d.h.demand[t], price[t]);
    d.model.set_objective(obj);
    return d;
}

ExogenousProfiles dc_profiles(const Series& workload, double mu) {
    ExogenousProfiles p;
    p.workload = workload;
    p.mean_job_duration.assign(workload.size(), mu);
    return p;
}

}  // namespace

TEST_CASE("pair generation") {
    SUBCASE("T=4, mu=2, cap 0.5") {
        auto s = admissible_delay_pairs({1.0, 4, 0}, Series(4, 2.0), Series(4, 1.0), 0.5);
        std::vector<std::pair<int, int>> allowed;
        for (const auto& p : s.pairs)
            if (!p.forbidden) allowed.push_back({p.pause, p.later});
        CHECK(allowed == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}});
        for (int t = 0; t < 4; ++t)
            for (int l = t + 2; l < 4; ++l) CHECK_FALSE(s.allowed(t, l));
        for (const auto& p : s.pairs) CHECK(p.forbidden == (p.later - p.pause >= 2));
        CHECK(s.allowed(0, 1));
        CHECK_FALSE(s.allowed(1, 1));
        CHECK_FALSE(s.allowed(2, 1));
    }
    SUBCASE("T=2, one pair") {
        for (double mu : {1.0, 3.0, 50.0}) {
            auto s = admissible_delay_pairs({1.0, 2, 0}, Series(2, mu), Series(2, 1.0), 1.0);
            REQUIRE(s.pairs.size() == 1);
            CHECK(s.pairs[0].pause == 0);
            CHECK(s.pairs[0].later == 1);
            CHECK(s.pairs[0].delay == doctest::Approx(1.0 / mu));
        }
    }
    SUBCASE("case-study durations allow at most two periods") {
        auto b = load_case(fixtures::desk10_day());
        auto s = admissible_delay_pairs(b.grid, b.profiles.mean_job_duration, b.profiles.workload, 0.25);
        int longest = 0;
        for (const auto& p : s.pairs)
            if (!p.forbidden) longest = std::max(longest, p.later - p.pause);
        CHECK(longest >= 1);
        CHECK(longest <= 2);
    }
    SUBCASE("duration guard") {
        Series mu{2.0, 0.0, 2.0};
        CHECK_THROWS_AS(admissible_delay_pairs({1.0, 3, 0}, mu, Series{1.0, 1.0, 1.0}, 0.5), std::invalid_argument);
        auto s = admissible_delay_pairs({1.0, 3, 0}, mu, Series{1.0, 0.0, 1.0}, 0.5);
        for (const auto& p : s.pairs) CHECK(p.pause != 1);
    }
}

TEST_CASE("demand and heat arithmetic") {
    DataCentreSpec spec;
    spec.rating = 200.0;
    spec.big_m = 1e4;
    spec.resume_overhead = 1.1;
    milp::HighsAdapter highs;
    SUBCASE("pausing 20 of 100") {
        auto p = dc_profiles({100.0, 0.0}, 4.0);
        auto d = dc_only(spec, p, {1.0, 1.0});
        d.model.fix(d.h.paused[0], 20.0);
        auto s = milp::solve(d.model, highs);
        REQUIRE(s.optimal());
        CHECK(s.value(d.h.demand[0]) == doctest::Approx(80.0));
        CHECK(s.value(d.h.resumed[1]) == doctest::Approx(20.0));
        CHECK(s.value(d.h.demand[1]) == doctest::Approx(22.0));
    }
    SUBCASE("heat output") {
        spec.heat_slope = 0.9;
        spec.heat_floor = 5.0;
        auto p = dc_profiles({100.0, 100.0}, 4.0);
        auto d = dc_only(spec, p, {1.0, 1.0}, ScenarioConfig::nc());
        auto s = milp::solve(d.model, highs);
        REQUIRE(s.optimal());
        CHECK(s.value(d.h.demand[0]) == doctest::Approx(100.0));
        CHECK(s.value(d.h.heat_out[0]) == doctest::Approx(95.0));
    }
}

TEST_CASE("expensive first period is shifted") {
    DataCentreSpec spec;
    spec.rating = 25.0;
    spec.max_delay = 1.0;
    auto p = dc_profiles({10.0, 0.0, 0.0}, 2.0);
    auto d = dc_only(spec, p, {5.0, 1.0, 1.0});
    milp::HighsAdapter highs;
    auto s = milp::solve(d.model, highs);
    REQUIRE(s.optimal());
    auto e = oracle::enumerate(d.model);
    REQUIRE(e.feasible);
    CHECK(s.objective == doctest::Approx(e.objective).epsilon(1e-9));
    CHECK(s.objective == doctest::Approx(11.0));
    CHECK(s.value(d.h.paused[0]) == doctest::Approx(10.0));
    CHECK(s.value(d.h.resumed[1]) + s.value(d.h.resumed[2]) == doctest::Approx(10.0));
    auto dec = decode_dc(s, d.h);
    CHECK(dec.delays.max_entry() <= 1.0 + 1e-12);
}

TEST_CASE("tight cap leaves only next-period resumption") {
    DataCentreSpec spec;
    spec.max_delay = 0.25;  // with mu = 2 no work may be outstanding at a later period
    auto p = dc_profiles({10.0, 0.0, 0.0}, 2.0);
    auto d = dc_only(spec, p, {5.0, 3.0, 1.0});
    CHECK(d.h.delay_flags.empty());
    milp::HighsAdapter highs;
    auto s = milp::solve(d.model, highs);
    REQUIRE(s.optimal());
    CHECK(oracle::enumerate(d.model).objective == doctest::Approx(s.objective).epsilon(1e-9));
    // Cheapest would be resuming at period 2; the cap forces period 1.
    CHECK(s.value(d.h.paused[0]) == doctest::Approx(10.0));
    CHECK(s.value(d.h.resumed[1]) == doctest::Approx(10.0));
    CHECK(s.objective == doctest::Approx(33.0));
    CHECK(decode_dc(s, d.h).delays.max_entry() == 0.0);
}

TEST_CASE("no pausing gives an empty delay matrix") {
    DataCentreSpec spec;
    auto p = dc_profiles({10.0, 12.0, 8.0, 9.0}, 4.0);
    auto d = dc_only(spec, p, {1.0, 1.0, 1.0, 1.0}, ScenarioConfig::nc());
    CHECK(d.h.delay_flags.empty());
    CHECK(d.h.cum_paused.empty());
    milp::HighsAdapter highs;
    auto s = milp::solve(d.model, highs);
    auto dec = decode_dc(s, d.h);
    CHECK(dec.delays.size() == 4);
    CHECK(dec.delays.max_entry() == 0.0);
    milp::Solution bad;
    CHECK_THROWS_AS(decode_dc(bad, d.h), std::invalid_argument);
}

TEST_CASE("delay matrix rows and columns follow the pause") {
    // Pause only in periods 7 and 8 of a 12-period window. With mu = 8 work
    // may be outstanding for two periods at most.
    DataCentreSpec spec;
    spec.max_delay = 0.25;
    Series wkl(12, 10.0);
    auto p = dc_profiles(wkl, 8.0);
    Series price(12, 1.0);
    price[7] = price[8] = 3.0;
    auto d = dc_only(spec, p, price);
    for (int t = 0; t < 12; ++t)
        if (t != 7 && t != 8) d.model.fix(d.h.paused[t], 0.0);
    milp::HighsAdapter highs;
    auto s = milp::solve(d.model, highs);
    REQUIRE(s.optimal());
    CHECK(s.value(d.h.paused[7]) > 1.0);
    auto dec = decode_dc(s, d.h);
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j)
            if (dec.delays.at(i, j) != 0.0) {
                CHECK((i == 7 || i == 8));
                CHECK(j <= i + 2);
                CHECK(dec.delays.at(i, j) <= 0.25 + 1e-12);
            }
    CHECK(dec.delays.max_entry() > 0.0);
}

TEST_CASE("big-M must cover the window") {
    DataCentreSpec spec;
    spec.rating = 25.0;
    spec.big_m = 90.0;
    auto p = dc_profiles({5.0, 5.0, 5.0, 5.0}, 4.0);
    milp::Model m;
    CHECK_THROWS_AS(build_dc_block(m, spec, p, {1.0, 4, 0}, ScenarioConfig::tc_jp()), CaseError);
    milp::Model ok;
    spec.big_m = 100.0;
    CHECK_NOTHROW(build_dc_block(ok, spec, p, {1.0, 4, 0}, ScenarioConfig::tc_jp()));
    milp::Model nc;
    spec.big_m = 1.0;  // unused without pausing
    CHECK_NOTHROW(build_dc_block(nc, spec, p, {1.0, 4, 0}, ScenarioConfig::nc()));
}

TEST_CASE("pausing is never profitable without a price difference") {
    DataCentreSpec spec;
    auto p = dc_profiles({10.0, 10.0, 10.0}, 2.0);
    auto d = dc_only(spec, p, {1.0, 1.0, 1.0});
    milp::HighsAdapter highs;
    auto s = milp::solve(d.model, highs);
    CHECK(s.objective == doctest::Approx(30.0));
}
