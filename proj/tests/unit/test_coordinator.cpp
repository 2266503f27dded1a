#include <fstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"
#include "lecdc/coordinator.hpp"
#include "lecdc/solvers.hpp"

using namespace lecdc;

namespace {

bool has_prefix(const milp::Model& m, const std::string& prefix) {
    for (const auto& v : m.vars())
        if (v.name.rfind(prefix, 0) == 0) return true;
    return false;
}

}  // namespace

TEST_CASE("objective arithmetic") {
    auto b = fixtures::flat_case(2);
    b.profiles.day_ahead_price = {50.0, 0.0};
    b.profiles.ppa_price = {30.0, 0.0};
    b.profiles.afrr_price = {10.0, 0.0};
    SolutionRecord r;
    r.retailer_buy = {2.0, 0.0};
    r.retailer_sell = {1.0, 0.0};
    r.dc_paused = {0.5, 0.0};
    CHECK(record_cost(r, b, ScenarioConfig::tc_jp_afrr()) == doctest::Approx(65.0));
    CHECK(record_cost(r, b, ScenarioConfig::tc_jp()) == doctest::Approx(70.0));
    r.step_hours = 0.5;
    CHECK(record_cost(r, b, ScenarioConfig::tc_jp_afrr()) == doctest::Approx(32.5));
}

TEST_CASE("scenario toggles") {
    auto b = fixtures::flat_case(6);
    auto nc = assemble(b, ScenarioConfig::nc());
    CHECK_FALSE(has_prefix(nc.model, "dc_delta"));
    CHECK_FALSE(has_prefix(nc.model, "dc_cum"));
    for (auto z : nc.dc.pausing_flag) CHECK(nc.model.var(z).upper == 0.0);
    for (auto v : nc.dc.paused) CHECK(nc.model.objective().terms().count(v.index) == 0);
    auto full = assemble(b, ScenarioConfig::tc_jp_afrr());
    CHECK(has_prefix(full.model, "dc_delta"));
    for (auto v : full.dc.paused) CHECK(full.model.objective().terms().count(v.index) == 1);
    auto jp = assemble(b, ScenarioConfig::tc_jp());
    for (auto v : jp.dc.paused) CHECK(jp.model.objective().terms().count(v.index) == 0);
    CHECK(full.stats().binaries > nc.stats().binaries);
}

TEST_CASE("flat case solves in every scenario") {
    auto b = fixtures::flat_case(6, 2);
    milp::HighsAdapter highs;
    double last = 1e300;
    for (auto s : {ScenarioConfig::nc(), ScenarioConfig::tc(), ScenarioConfig::tc_jp(), ScenarioConfig::tc_jp_afrr()}) {
        auto r = solve_window(b, s, highs);
        REQUIRE(r.optimal());
        CHECK(check_record(r, b, s).empty());
        CHECK(r.objective_cost == doctest::Approx(record_cost(r, b, s)).epsilon(1e-9));
        CHECK(r.objective_cost <= last + 1e-6);
        last = r.objective_cost;
        CHECK(r.periods() == 6);
        CHECK(r.households.size() == 2);
    }
}

TEST_CASE("relaxed-first and direct agree") {
    auto b = load_case(fixtures::desk10_day());
    milp::HighsAdapter highs;
    for (auto s : {ScenarioConfig::nc(), ScenarioConfig::tc_jp_afrr()}) {
        WindowOptions direct;
        direct.relax_exclusivity = false;
        auto a = solve_window(b, s, highs, direct);
        auto r = solve_window(b, s, highs);
        REQUIRE(a.optimal());
        REQUIRE(r.optimal());
        CHECK(a.solve_path == "direct");
        CHECK(r.solve_path != "direct");
        CHECK(r.objective_cost == doctest::Approx(a.objective_cost).epsilon(1e-6));
    }
}

TEST_CASE("infeasible comfort band names the thermal family") {
    auto b = fixtures::flat_case(4);
    b.community.households[0].thermal.temp_min = 24.0;
    b.community.households[0].thermal.temp_max = 23.0;
    b.community.households[0].thermal.temp_initial = 23.5;
    milp::HighsAdapter highs;
    auto r = solve_window(b, ScenarioConfig::tc(), highs);
    CHECK(r.status == milp::SolveStatus::infeasible);
    CHECK(std::find(r.infeasible_families.begin(), r.infeasible_families.end(), "thermal") !=
          r.infeasible_families.end());
    CHECK(std::find(r.infeasible_families.begin(), r.infeasible_families.end(), "balance") ==
          r.infeasible_families.end());
}

TEST_CASE("no prices and no work cost nothing") {
    auto b = fixtures::flat_case(6);
    for (auto* s : {&b.profiles.day_ahead_price, &b.profiles.ppa_price, &b.profiles.afrr_price, &b.profiles.workload})
        std::fill(s->begin(), s->end(), 0.0);
    milp::HighsAdapter highs;
    auto r = solve_window(b, ScenarioConfig::tc_jp_afrr(), highs);
    REQUIRE(r.optimal());
    CHECK(r.objective_cost == doctest::Approx(0.0));
}

TEST_CASE("export above import is flagged") {
    auto b = fixtures::flat_case(3);
    b.profiles.ppa_price[1] = 0.5;
    auto a = assemble(b, ScenarioConfig::tc());
    REQUIRE(a.warnings.size() == 1);
    CHECK(a.warnings[0].find("period 1") == 0);
}

TEST_CASE("desk10 day model size") {
    auto b = load_case(fixtures::desk10_day());
    auto a = assemble(b, ScenarioConfig::tc_jp_afrr());
    auto s = a.stats();
    MESSAGE("constraints " << s.constraints << ", variables " << s.variables << ", binaries " << s.binaries);
    CHECK(s.variables > 1000);
    CHECK(s.binaries > 100);
    CHECK(s.constraints > s.variables / 2);
}

TEST_CASE("check_record catches tampering") {
    auto b = fixtures::flat_case(4);
    milp::HighsAdapter highs;
    auto s = ScenarioConfig::tc_jp_afrr();
    auto r = solve_window(b, s, highs);
    REQUIRE(r.optimal());
    REQUIRE(check_record(r, b, s).empty());
    auto bad = r;
    bad.retailer_buy[1] += 0.1;
    CHECK_FALSE(check_record(bad, b, s).empty());
    bad = r;
    bad.households[0].heat_in[2] += 0.1;
    CHECK_FALSE(check_record(bad, b, s).empty());
    bad = r;
    bad.delay_matrix.at(0, 3) = 0.75;
    CHECK_FALSE(check_record(bad, b, s).empty());
    bad = r;
    bad.objective_cost += 1.0;
    CHECK_FALSE(check_record(bad, b, s).empty());
}

TEST_CASE("written record") {
    auto b = fixtures::flat_case(4);
    milp::HighsAdapter highs;
    auto r = solve_window(b, ScenarioConfig::tc_jp_afrr(), highs);
    auto dir = fixtures::scratch_dir("record");
    write_record(r, dir);
    for (auto f : {"system_series.csv", "household_series.csv", "delay_matrix.csv", "summary.json"})
        CHECK(std::filesystem::exists(dir / f));
    std::ifstream in(dir / "summary.json");
    auto j = nlohmann::json::parse(in);
    CHECK(j.at("status") == "optimal");
    CHECK(j.at("periods") == 4);
    CHECK(j.at("objective_cost").get<double>() == doctest::Approx(r.objective_cost));
    CHECK_FALSE(j.contains("solve_seconds"));
    auto again = fixtures::scratch_dir("record2");
    write_record(solve_window(b, ScenarioConfig::tc_jp_afrr(), highs), again);
    for (auto f : {"system_series.csv", "household_series.csv", "delay_matrix.csv", "summary.json"}) {
        std::ifstream x(dir / f), y(again / f);
        std::string a((std::istreambuf_iterator<char>(x)), {}), c((std::istreambuf_iterator<char>(y)), {});
        CHECK(a == c);
    }
    std::filesystem::remove_all(dir);
    std::filesystem::remove_all(again);
}
