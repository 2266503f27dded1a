#include <fstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "lecdc/sim_metrics.hpp"
#include "lecdc/solvers.hpp"

using namespace lecdc;

namespace {

// Optimal-looking record with every series zero.
SolutionRecord blank_record(int T, int H) {
    SolutionRecord r;
    r.status = milp::SolveStatus::optimal;
    Series z(T, 0.0);
    r.retailer_buy = r.retailer_sell = r.wind_in = z;
    r.battery_charge = r.battery_discharge = r.battery_soc = z;
    r.hvac_power = r.heat_vent = z;
    r.dc_demand = r.dc_paused = r.dc_resumed = r.dc_heat = z;
    HouseholdSeries hs;
    hs.to_eoa = hs.from_eoa = hs.flex_load = hs.flex_up = hs.flex_down = z;
    hs.ev_charge = hs.ev_discharge = hs.ev_soc = hs.heat_in = hs.cool_power = hs.temperature = z;
    r.households.assign(H, hs);
    r.delay_matrix = DelayMatrix(T);
    return r;
}

const ScenarioConfig kAll[] = {ScenarioConfig::nc(), ScenarioConfig::tc(), ScenarioConfig::tc_jp(),
                               ScenarioConfig::tc_jp_afrr()};

}  // namespace

TEST_CASE("metric formulas on hand-made records") {
    auto b = fixtures::flat_case(2);
    SUBCASE("heat recovery 87 percent") {
        auto r = blank_record(2, 1);
        r.households[0].heat_in = {60.0, 40.0};
        r.hvac_power = {13.0, 0.0};
        b.data_centre.upgrade_eff = 1.0;
        auto m = compute_metrics({r}, b, ScenarioConfig::tc());
        CHECK(m.heating == doctest::Approx(0.1));
        CHECK(m.heat_recovery_ratio == doctest::Approx(87.0));
    }
    SUBCASE("everything exported") {
        auto r = blank_record(2, 1);
        // wind 2 + pv 0.5 per period, no local use
        r.retailer_sell = {2.5, 2.5};
        auto m = compute_metrics({r}, b, ScenarioConfig::nc());
        CHECK(m.renewable_gen == doctest::Approx(0.005));
        CHECK(m.ac_ratio == 0.0);
    }
    SUBCASE("nothing exported") {
        auto r = blank_record(2, 1);
        auto m = compute_metrics({r}, b, ScenarioConfig::nc());
        CHECK(m.ac_ratio == doctest::Approx(100.0));
    }
    SUBCASE("power-weighted delay") {
        auto r = blank_record(2, 1);
        r.dc_paused = {3.0, 1.0};
        r.delay_matrix.at(0, 1) = 0.2;
        auto m = compute_metrics({r}, b, ScenarioConfig::tc_jp());
        CHECK(m.avg_job_delay == doctest::Approx(100.0 * 3.0 * 0.2 / 4.0));
    }
    SUBCASE("dc fed from surplus") {
        auto r = blank_record(2, 1);
        r.dc_demand = {2.0, 2.0};
        r.households[0].flex_load = {0.5, 2.5};  // surplus 2.0 then 0
        auto m = compute_metrics({r}, b, ScenarioConfig::nc());
        CHECK(m.dc_re_consumption == doctest::Approx(50.0));
    }
    SUBCASE("cost per household") {
        auto b2 = fixtures::flat_case(2, 2);
        auto r = blank_record(2, 2);
        r.objective_cost = 30.0;
        auto m = compute_metrics({r}, b2, ScenarioConfig::nc());
        CHECK(m.op_cost == doctest::Approx(0.03));
        CHECK(m.cost_per_household == doctest::Approx(15.0));
    }
    SUBCASE("records must be optimal and consecutive") {
        auto r = blank_record(1, 1);
        auto bad = r;
        bad.status = milp::SolveStatus::infeasible;
        CHECK_THROWS_AS(compute_metrics({bad}, b, ScenarioConfig::nc()), MetricsError);
        auto second = r;
        second.start_index = 5;
        CHECK_THROWS_AS(compute_metrics({r, second}, b, ScenarioConfig::nc()), MetricsError);
        second.start_index = 1;
        CHECK_NOTHROW(compute_metrics({r, second}, b, ScenarioConfig::nc()));
        CHECK_THROWS_AS(compute_metrics({}, b, ScenarioConfig::nc()), MetricsError);
    }
}

TEST_CASE("scenario metrics on a solved flat case") {
    auto b = fixtures::flat_case(6, 2);
    b.profiles.day_ahead_price = {0.3, 0.1, 0.1, 0.3, 0.1, 0.1};
    milp::HighsAdapter highs;
    std::vector<MetricsReport> reports;
    for (const auto& s : kAll) {
        auto r = solve_window(b, s, highs);
        REQUIRE(r.optimal());
        reports.push_back(compute_metrics({r}, b, s));
    }
    CHECK(reports[0].heat_recovery_ratio == 0.0);
    CHECK(reports[0].avg_job_delay == 0.0);
    CHECK(reports[1].avg_job_delay == 0.0);
    for (const auto& m : reports) {
        CHECK(m.renewable_gen == reports[0].renewable_gen);
        CHECK(m.ac_ratio >= 0.0);
        CHECK(m.ac_ratio <= 100.0);
        CHECK(m.heat_recovery_ratio >= 0.0);
        CHECK(m.heat_recovery_ratio <= 100.0);
        CHECK(m.avg_job_delay <= 100.0 * b.data_centre.max_delay + 1e-9);
    }
    // Without coupling all heating energy comes from the HVAC.
    CHECK(reports[0].power_to_hvac * b.data_centre.upgrade_eff == doctest::Approx(reports[0].heating));
}

TEST_CASE("one-window chain equals the window") {
    auto b = load_case(fixtures::desk10_day());
    milp::HighsAdapter highs;
    auto s = ScenarioConfig::tc();
    auto chain = run_chain(b, s, 1, highs);
    REQUIRE(chain.records.size() == 1);
    auto direct = solve_window(b, s, highs);
    auto m = compute_metrics({direct}, b, s);
    CHECK(chain.report.op_cost == doctest::Approx(m.op_cost).epsilon(1e-9));
    CHECK(chain.report.power_to_hvac == doctest::Approx(m.power_to_hvac).epsilon(1e-6));
    CHECK(chain.report.renewable_gen == m.renewable_gen);
    CHECK(chain.boundaries.size() == 2);
    CHECK(chain.boundaries[0] == initial_state(b));
}

TEST_CASE("chain carries state and sums costs") {
    auto year = load_case(fixtures::desk10_year());
    auto b = slice_case(year, 100 * 24, 3 * 24);
    milp::HighsAdapter highs;
    auto s = ScenarioConfig::tc();
    int calls = 0;
    ChainOptions opts;
    opts.on_window = [&](int k, const SolutionRecord&) { CHECK(k == calls++); };
    auto chain = run_chain(b, s, 1, highs, opts);
    REQUIRE(chain.records.size() == 3);
    CHECK(calls == 3);
    double total = 0.0;
    for (std::size_t k = 0; k < chain.records.size(); ++k) {
        total += chain.records[k].objective_cost;
        CHECK(chain.records[k].start_index == b.grid.start_index + 24 * static_cast<int>(k));
        CHECK(chain.boundaries[k + 1] == final_state(chain.records[k]));
        // The next window starts from the carried state.
        const auto& next_init = chain.boundaries[k];
        if (k > 0) {
            const auto& prev = chain.records[k - 1];
            CHECK(next_init.battery_soc == prev.battery_soc.back());
        }
        // The first period follows from the carried SoC.
        const auto& r = chain.records[k];
        const auto& c = b.community;
        double soc0 = chain.boundaries[k].battery_soc + c.battery_eff_charge * r.battery_charge[0] -
                      r.battery_discharge[0] / c.battery_eff_discharge;
        CHECK(r.battery_soc[0] == doctest::Approx(soc0).epsilon(1e-9));
    }
    CHECK(chain.report.op_cost * 1000.0 == doctest::Approx(total).epsilon(1e-6));
    // Anchoring keeps every boundary at or above the starting SoC.
    for (const auto& st : chain.boundaries) {
        CHECK(st.battery_soc >= b.community.battery_soc_initial - 1e-6);
        for (std::size_t h = 0; h < st.ev_soc.size(); ++h)
            CHECK(st.ev_soc[h] >= b.community.households[h].ev.soc_initial - 1e-6);
    }

    ChainOptions loose;
    loose.window.assets.anchor_storage = false;
    auto free_chain = run_chain(b, s, 1, highs, loose);
    // Dropping the end condition can only help the first window.
    CHECK(free_chain.records[0].objective_cost <= chain.records[0].objective_cost + 1e-6);
}

TEST_CASE("window length must divide the horizon") {
    auto b = load_case(fixtures::desk10_year());
    milp::HighsAdapter highs;
    CHECK_THROWS_AS(run_chain(b, ScenarioConfig::nc(), 7, highs), std::invalid_argument);
    CHECK_THROWS_AS(run_chain(b, ScenarioConfig::nc(), 0, highs), std::invalid_argument);
    CHECK_THROWS_AS(run_chain(b, ScenarioConfig::nc(), 720, highs), std::invalid_argument);
}

TEST_CASE("carried state is clamped into bands") {
    auto b = fixtures::flat_case(4);
    CarryState s = initial_state(b);
    s.battery_soc = b.community.battery_soc_max + 1e-9;
    s.temperature[0] = 18.0;
    auto w = with_state(b, s);
    CHECK(w.community.battery_soc_initial == b.community.battery_soc_max);
    CHECK(w.community.households[0].thermal.temp_initial == b.community.households[0].thermal.temp_min);
    s.ev_soc.clear();
    CHECK_THROWS_AS(with_state(b, s), std::invalid_argument);
}

TEST_CASE("household replication") {
    auto b = load_case(fixtures::desk10_10day());
    auto r = replicate_households(b, 25);
    REQUIRE(r.community.households.size() == 25);
    CHECK(validate_case(r).empty());
    CHECK(r.community.households[3].id == b.community.households[3].id);
    CHECK(r.community.households[13].id == b.community.households[3].id + "_1");
    CHECK(r.community.households[23].id == b.community.households[3].id + "_2");
    const auto& src = b.community.households[3].baseline_load;
    const auto& cp = r.community.households[23].baseline_load;
    const int T = b.grid.period_count;
    for (int t = 0; t < T; ++t) CHECK(cp[(t + 48) % T] == src[t]);
    CHECK(r.profiles.drive_power[13][29] == b.profiles.drive_power[3][5]);
    CHECK(r.profiles.pv_gen[13] == b.profiles.pv_gen[3]);
    CHECK(r.community.households[13].ev.arrival == b.community.households[3].ev.arrival);
    CHECK_THROWS_AS(replicate_households(b, 0), std::invalid_argument);
    auto small = replicate_households(b, 5);
    CHECK(small.community.households.size() == 5);

    // A one-day horizon has nothing to rotate.
    auto day = load_case(fixtures::desk10_day());
    auto copies = replicate_households(day, 12);
    CHECK(copies.community.households[11].baseline_load == day.community.households[1].baseline_load);
}

TEST_CASE("small sensitivity sweep") {
    auto b = load_case(fixtures::desk10_day());
    milp::HighsAdapter highs;
    auto res = sensitivity_households(b, {2, 1, 2}, ScenarioConfig::tc_jp_afrr(), highs);
    REQUIRE(res.rows.size() == 2);
    CHECK(res.warnings.size() == 1);
    CHECK(res.rows[0].count == 1);
    CHECK(res.rows[1].count == 2);
    for (const auto& row : res.rows) {
        CHECK(row.avg_job_delay <= 100.0 * b.data_centre.max_delay + 1e-9);
        CHECK(row.heat_recovery_ratio >= 0.0);
        CHECK(row.heat_recovery_ratio <= 100.0);
    }
    auto dir = fixtures::scratch_dir("sens");
    write_sensitivity_table(res, dir / "sensitivity.csv");
    std::ifstream in(dir / "sensitivity.csv");
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 3);
    std::filesystem::remove_all(dir);
}

TEST_CASE("sensitivity chains daily windows") {
    auto b = slice_case(load_case(fixtures::desk10_10day()), 0, 48);
    milp::HighsAdapter highs;
    int windows = 0;
    ChainOptions opts;
    opts.on_window = [&](int, const SolutionRecord&) { ++windows; };
    auto res = sensitivity_households(b, {3}, ScenarioConfig::tc(), highs, 1, opts);
    CHECK(windows == 2);
    auto chain = run_chain(replicate_households(b, 3), ScenarioConfig::tc(), 1, highs);
    CHECK(res.rows.at(0).op_cost == doctest::Approx(chain.report.op_cost).epsilon(1e-12));
    CHECK_THROWS_AS(sensitivity_households(b, {3}, ScenarioConfig::tc(), highs, 5), std::invalid_argument);
}

TEST_CASE("metrics table layout") {
    MetricsReport a, c;
    a.scenario = "nc";
    c.scenario = "tc";
    a.op_cost = 1.5;
    auto dir = fixtures::scratch_dir("table");
    write_metrics_table({a, c}, dir / "metrics.csv");
    std::ifstream in(dir / "metrics.csv");
    std::string header, first;
    std::getline(in, header);
    std::getline(in, first);
    CHECK(header == "metric,unit,nc,tc");
    CHECK(first == "op_cost,kEUR,1.5,0");
    write_metrics_json({a, c}, dir / "metrics.json");
    CHECK(std::filesystem::exists(dir / "metrics.json"));
    std::filesystem::remove_all(dir);
}
