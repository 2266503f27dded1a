#include "doctest.h"
#include "fixtures.hpp"
#include "lecdc/lec_assets.hpp"
#include "lecdc/solvers.hpp"

using namespace lecdc;
using milp::LinExpr;

namespace {

milp::Solution solve_feasible(milp::Model& m, const LinExpr& obj = LinExpr()) {
    m.set_objective(obj);
    milp::HighsAdapter highs;
    return milp::solve(m, highs);
}

}  // namespace

TEST_CASE("thermal recursion arithmetic") {
    auto b = fixtures::flat_case(2);
    auto& hh = b.community.households[0];
    hh.thermal.resistance = 5.0;
    hh.thermal.capacitance = 2.0;
    hh.thermal.temp_initial = 20.0;
    b.profiles.outdoor_temp = {10.0, 10.0};
    milp::Model m;
    auto h = build_household_block(m, 0, hh, b.profiles, b.grid);
    m.fix(h.heat_in[0], 4.0);
    m.fix(h.cool_power[0], 0.0);
    auto s = solve_feasible(m);
    REQUIRE(s.optimal());
    CHECK(s.value(h.temperature[0]) == doctest::Approx(21.0).epsilon(1e-12));
}

TEST_CASE("cooling lowers the temperature by its efficiency") {
    auto b = fixtures::flat_case(2);
    auto& hh = b.community.households[0];
    hh.thermal.resistance = 5.0;
    hh.thermal.capacitance = 2.0;
    hh.thermal.temp_initial = 22.0;
    hh.thermal.cool_eff = 3.0;
    b.profiles.outdoor_temp = {22.0, 22.0};
    milp::Model m;
    auto h = build_household_block(m, 0, hh, b.profiles, b.grid);
    m.fix(h.heat_in[0], 0.0);
    m.fix(h.cool_power[0], 1.0);
    auto s = solve_feasible(m);
    REQUIRE(s.optimal());
    CHECK(s.value(h.temperature[0]) == doctest::Approx(22.0 - 1.5));
}

TEST_CASE("EV charging arithmetic") {
    auto b = fixtures::flat_case(2);
    auto& ev = b.community.households[0].ev;
    ev.soc_initial = 10.0;
    ev.eff_charge = 0.9;
    milp::Model m;
    auto h = build_household_block(m, 0, b.community.households[0], b.profiles, b.grid);
    m.fix(h.ev_charge[0], 3.0);
    auto s = solve_feasible(m);
    REQUIRE(s.optimal());
    CHECK(s.value(h.ev_soc[0]) == doctest::Approx(12.7).epsilon(1e-12));
    CHECK(s.value(h.ev_discharge[0]) == doctest::Approx(0.0));
    CHECK(s.value(h.ev_flag[0]) == doctest::Approx(1.0));
}

TEST_CASE("EV is inert while away") {
    auto b = fixtures::flat_case(6);
    auto& ev = b.community.households[0].ev;
    ev.arrival = 3;
    ev.departure = 4;
    b.profiles.drive_power[0] = {0.5, 0.5, 0.5, 0.0, 0.0, 0.0};
    milp::Model m;
    auto h = build_household_block(m, 0, b.community.households[0], b.profiles, b.grid);
    for (int t : {0, 1, 2, 5}) {
        CHECK(m.var(h.ev_charge[t]).upper == 0.0);
        CHECK(m.var(h.ev_discharge[t]).upper == 0.0);
    }
    CHECK(m.var(h.ev_charge[3]).upper == ev.charger_rating);
    // Charging is made attractive everywhere.
    LinExpr obj;
    for (int t = 0; t < 6; ++t) obj.add(h.ev_charge[t], -1.0);
    auto s = solve_feasible(m, obj);
    REQUIRE(s.optimal());
    for (int t : {0, 1, 2, 5}) CHECK(s.value(h.ev_charge[t]) == 0.0);
    CHECK(s.value(h.ev_soc[2]) == doctest::Approx(ev.soc_initial - 1.5));
}

TEST_CASE("EV window wraps at midnight") {
    auto b = fixtures::flat_case(24);
    auto& ev = b.community.households[0].ev;
    ev.arrival = 20;
    ev.departure = 2;
    milp::Model m;
    auto h = build_household_block(m, 0, b.community.households[0], b.profiles, b.grid);
    CHECK(m.var(h.ev_charge[1]).upper > 0.0);
    CHECK(m.var(h.ev_charge[10]).upper == 0.0);
    CHECK(m.var(h.ev_charge[22]).upper > 0.0);
}

TEST_CASE("flexible load is energy neutral and bounded") {
    auto b = fixtures::flat_case(4);
    milp::Model m;
    auto h = build_household_block(m, 0, b.community.households[0], b.profiles, b.grid);
    LinExpr obj;
    obj.add(h.flex_load[0], 1.0);  // shift load out of period 0
    auto s = solve_feasible(m, obj);
    REQUIRE(s.optimal());
    CHECK(s.value(h.flex_load[0]) == doctest::Approx(0.8));
    double total = 0.0;
    for (int t = 0; t < 4; ++t) {
        total += s.value(h.flex_load[t]);
        CHECK(s.value(h.flex_load[t]) >= 0.8 - 1e-9);
        CHECK(s.value(h.flex_load[t]) <= 1.2 + 1e-9);
    }
    CHECK(total == doctest::Approx(4.0));
}

TEST_CASE("battery arithmetic and gating") {
    auto b = fixtures::flat_case(2);
    b.community.battery_soc_initial = 5.0;
    b.community.battery_eff_charge = 0.95;
    SUBCASE("charge 2") {
        milp::Model m;
        auto c = build_community_block(m, b.community, b.profiles, b.grid);
        m.fix(c.battery_charge[0], 2.0);
        auto s = solve_feasible(m);
        REQUIRE(s.optimal());
        CHECK(s.value(c.battery_soc[0]) == doctest::Approx(6.9).epsilon(1e-12));
    }
    SUBCASE("flag one blocks discharge") {
        milp::Model m;
        auto c = build_community_block(m, b.community, b.profiles, b.grid);
        m.fix(c.battery_flag[0], 1.0);
        m.fix(c.battery_discharge[0], 1.0);
        CHECK(solve_feasible(m).status == milp::SolveStatus::infeasible);
    }
    SUBCASE("flag zero blocks charge") {
        milp::Model m;
        auto c = build_community_block(m, b.community, b.profiles, b.grid);
        m.fix(c.battery_flag[0], 0.0);
        m.fix(c.battery_charge[0], 1.0);
        CHECK(solve_feasible(m).status == milp::SolveStatus::infeasible);
    }
    SUBCASE("zero rating") {
        b.community.battery_rating = 0.0;
        milp::Model m;
        auto c = build_community_block(m, b.community, b.profiles, b.grid);
        LinExpr obj;
        obj.add(c.battery_soc[0], -1.0);
        auto s = solve_feasible(m, obj);
        REQUIRE(s.optimal());
        for (int t = 0; t < 2; ++t) CHECK(s.value(c.battery_soc[t]) == doctest::Approx(5.0));
        CHECK(m.var(c.battery_flag[0]).upper == 0.0);
    }
    SUBCASE("anchoring") {
        milp::Model m;
        auto c = build_community_block(m, b.community, b.profiles, b.grid);
        LinExpr obj;
        obj.add(c.battery_soc[1], 1.0);
        auto s = solve_feasible(m, obj);
        CHECK(s.value(c.battery_soc[1]) == doctest::Approx(5.0));
        milp::Model free;
        auto f = build_community_block(free, b.community, b.profiles, b.grid, AssetOptions{false});
        LinExpr fobj;
        fobj.add(f.battery_soc[1], 1.0);
        auto fs = solve_feasible(free, fobj);
        CHECK(fs.value(f.battery_soc[1]) < 5.0 - 1.0);
    }
    SUBCASE("wind is fixed to the profile") {
        milp::Model m;
        auto c = build_community_block(m, b.community, b.profiles, b.grid);
        CHECK(m.var(c.wind_in[0]).lower == 2.0);
        CHECK(m.var(c.wind_in[0]).upper == 2.0);
    }
}

namespace {

struct HeatRig {
    milp::Model model;
    DcHandles dc;
    std::vector<HouseholdHandles> households;
    CommunityHandles community;
};

HeatRig heat_rig(bool coupling) {
    HeatRig r;
    r.dc.heat_out.push_back(r.model.continuous("q"));
    r.households.resize(1);
    r.households[0].heat_in.push_back(r.model.continuous("q_he"));
    r.community.hvac_power.push_back(r.model.continuous("p_a"));
    r.community.heat_vent.push_back(r.model.continuous("vent"));
    DataCentreSpec spec;
    spec.exchanger_eff = 0.8;
    spec.upgrade_eff = 1.0;
    ScenarioConfig s = coupling ? ScenarioConfig::tc() : ScenarioConfig::nc();
    build_heat_recovery(r.model, r.dc, r.households, r.community, spec, s);
    return r;
}

}  // namespace

TEST_CASE("heat balance arithmetic") {
    SUBCASE("surplus is vented") {
        auto r = heat_rig(true);
        r.model.fix(r.dc.heat_out[0], 100.0);
        r.model.fix(r.households[0].heat_in[0], 60.0);
        r.model.fix(r.community.hvac_power[0], 0.0);
        auto s = solve_feasible(r.model);
        REQUIRE(s.optimal());
        CHECK(s.value(r.community.heat_vent[0]) == doctest::Approx(20.0));
    }
    SUBCASE("decoupled heat comes from the HVAC") {
        auto r = heat_rig(false);
        r.model.fix(r.dc.heat_out[0], 100.0);
        r.model.fix(r.households[0].heat_in[0], 60.0);
        LinExpr obj(r.community.hvac_power[0]);
        auto s = solve_feasible(r.model, obj);
        REQUIRE(s.optimal());
        CHECK(s.value(r.community.hvac_power[0]) == doctest::Approx(60.0));
    }
}
