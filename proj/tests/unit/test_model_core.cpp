#include <cmath>
#include <fstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "lecdc/model_core.hpp"
#include "lecdc/synthetic.hpp"

using namespace lecdc;

namespace {

bool has_field(const std::vector<Finding>& f, const std::string& field) {
    for (const auto& x : f)
        if (x.field == field) return true;
    return false;
}

double max_diff(const Series& a, const Series& b) {
    REQUIRE(a.size() == b.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("bundled day case loads with ten households") {
    auto b = load_case(fixtures::desk10_day());
    CHECK(b.community.households.size() == 10);
    CHECK(b.grid.period_count == 24);
    CHECK(b.data_centre.max_delay == doctest::Approx(0.25));
    CHECK(b.data_centre.big_m == doctest::Approx(1e4));
    CHECK(validate_case(b).empty());
}

TEST_CASE("bundled year case has 360 days") {
    auto b = load_case(fixtures::desk10_year());
    CHECK(b.grid.period_count == 360 * 24);
    CHECK(b.community.households.size() == 10);
}

TEST_CASE("household sizes fall in the described range") {
    auto b = load_case(fixtures::desk10_year());
    for (const auto& h : b.community.households) {
        double peak = *std::max_element(h.baseline_load.begin(), h.baseline_load.end());
        CHECK(peak >= 3.0 * 0.5);
        CHECK(peak <= 10.0 * 1.2);
    }
}

TEST_CASE("save and load round trip") {
    auto b = fixtures::flat_case(5, 2);
    b.profiles.day_ahead_price = {0.1, 0.123456789012345, 1.0 / 3.0, -0.02, 0.2};
    b.grid.start_index = 7;
    auto dir = fixtures::scratch_dir("roundtrip");
    save_case(b, dir);
    auto r = load_case(dir / "case.json");
    CHECK(r.grid.start_index == 7);
    CHECK(r.grid.period_count == 5);
    CHECK(max_diff(r.profiles.day_ahead_price, b.profiles.day_ahead_price) <= 1e-12);
    CHECK(max_diff(r.profiles.workload, b.profiles.workload) <= 1e-12);
    CHECK(max_diff(r.community.households[1].load_upper, b.community.households[1].load_upper) <= 1e-12);
    CHECK(max_diff(r.profiles.pv_gen[1], b.profiles.pv_gen[1]) <= 1e-12);
    CHECK(r.community.households[1].id == "h2");
    CHECK(r.data_centre.big_m == b.data_centre.big_m);
    std::filesystem::remove_all(dir);
}

TEST_CASE("validation findings") {
    SUBCASE("defaults are consistent") { CHECK(validate_case(fixtures::flat_case()).empty()); }
    SUBCASE("resume overhead below one") {
        auto b = fixtures::flat_case();
        b.data_centre.resume_overhead = 0.9;
        auto f = validate_case(b);
        REQUIRE(f.size() == 1);
        CHECK(f[0].field == "data_centre.resume_overhead");
        CHECK(f[0].message == "resume_overhead must exceed 1");
    }
    SUBCASE("duration zero where work is positive") {
        auto b = fixtures::flat_case(8);
        b.profiles.mean_job_duration[5] = 0.0;
        CHECK(has_field(validate_case(b), "profiles.mean_job_duration[5]"));
        b.profiles.workload[5] = 0.0;
        CHECK(validate_case(b).empty());
    }
    SUBCASE("arrival index at period count") {
        auto b = fixtures::flat_case(6);
        b.community.households[0].ev.arrival = 6;
        CHECK(has_field(validate_case(b), "community.households[0].ev.arrival"));
    }
    SUBCASE("inverted bands") {
        auto b = fixtures::flat_case();
        b.community.battery_soc_min = 20.0;
        CHECK(has_field(validate_case(b), "community.battery_soc_min"));
        auto c = fixtures::flat_case();
        c.community.households[0].thermal.temp_min = 25.0;
        CHECK(has_field(validate_case(c), "community.households[0].thermal.temp_min"));
    }
    SUBCASE("length mismatch and negatives") {
        auto b = fixtures::flat_case(6);
        b.profiles.wind_gen.pop_back();
        CHECK(has_field(validate_case(b), "profiles.wind_gen"));
        auto c = fixtures::flat_case(6);
        c.profiles.pv_gen[0][2] = -1.0;
        CHECK(has_field(validate_case(c), "profiles.pv_gen[0][2]"));
        auto d = fixtures::flat_case(6);
        d.profiles.day_ahead_price[2] = -1.0;  // prices may be negative
        CHECK(validate_case(d).empty());
    }
    SUBCASE("grid") {
        auto b = fixtures::flat_case();
        b.grid.step_hours = 0.0;
        CHECK(has_field(validate_case(b), "grid.step_hours"));
    }
    SUBCASE("aFRR needs pausing") {
        auto b = fixtures::flat_case();
        b.scenario = {true, false, true};
        CHECK(has_field(validate_case(b), "scenario.afrr"));
    }
}

TEST_CASE("validation does not modify the bundle") {
    auto b = fixtures::flat_case();
    b.data_centre.resume_overhead = 0.9;
    auto copy = b;
    auto first = validate_case(b);
    auto second = validate_case(b);
    CHECK(first == second);
    CHECK(b.data_centre.resume_overhead == copy.data_centre.resume_overhead);
    CHECK(b.profiles.workload == copy.profiles.workload);
}

TEST_CASE("load errors carry their kind") {
    auto dir = fixtures::scratch_dir("loaderr");
    SUBCASE("missing manifest") {
        try {
            load_case(dir / "case.json");
            FAIL("expected error");
        } catch (const CaseError& e) {
            CHECK(e.kind() == CaseError::Kind::io);
        }
    }
    SUBCASE("missing series file") {
        save_case(fixtures::flat_case(), dir);
        std::filesystem::remove(dir / "pv_gen.csv");
        try {
            load_case(dir / "case.json");
            FAIL("expected error");
        } catch (const CaseError& e) {
            CHECK(e.kind() == CaseError::Kind::io);
        }
    }
    SUBCASE("malformed manifest") {
        std::ofstream(dir / "case.json") << "{ not json";
        try {
            load_case(dir / "case.json");
            FAIL("expected error");
        } catch (const CaseError& e) {
            CHECK(e.kind() == CaseError::Kind::parse);
        }
    }
    SUBCASE("invalid content") {
        auto b = fixtures::flat_case();
        b.data_centre.resume_overhead = 0.9;
        save_case(b, dir);
        try {
            load_case(dir / "case.json");
            FAIL("expected error");
        } catch (const CaseError& e) {
            CHECK(e.kind() == CaseError::Kind::validation);
        }
        CHECK_NOTHROW(load_case_unchecked(dir / "case.json"));
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("ev connection window") {
    EvSpec ev;
    ev.arrival = 18;
    ev.departure = 7;
    TimeGrid g{1.0, 48, 0};
    CHECK(ev_connected(ev, g, 0));
    CHECK(ev_connected(ev, g, 7));
    CHECK_FALSE(ev_connected(ev, g, 8));
    CHECK_FALSE(ev_connected(ev, g, 17));
    CHECK(ev_connected(ev, g, 18));
    CHECK(ev_connected(ev, g, 24 + 3));
    CHECK_FALSE(ev_connected(ev, g, 24 + 12));
    TimeGrid shifted{1.0, 24, 12};
    CHECK_FALSE(ev_connected(ev, shifted, 0));  // hour 12
    CHECK(ev_connected(ev, shifted, 6));        // hour 18
    EvSpec day;
    day.arrival = 2;
    day.departure = 4;
    CHECK_FALSE(ev_connected(day, g, 1));
    CHECK(ev_connected(day, g, 3));
    CHECK_FALSE(ev_connected(day, g, 5));
}

TEST_CASE("slicing keeps the absolute period") {
    auto b = load_case(fixtures::desk10_year());
    auto s = slice_case(b, 60 * 24, 24);
    CHECK(s.grid.start_index == 60 * 24);
    CHECK(s.grid.period_count == 24);
    CHECK(validate_case(s).empty());
    auto day = load_case(fixtures::desk10_day());
    CHECK(max_diff(s.profiles.workload, day.profiles.workload) <= 1e-12);
    CHECK(max_diff(s.community.households[3].baseline_load, day.community.households[3].baseline_load) <= 1e-12);
    CHECK_THROWS(slice_case(b, 360 * 24 - 10, 24));
}

TEST_CASE("scenario names") {
    for (auto n : {"nc", "tc", "tc-jp", "tc-jp-afrr"}) CHECK(scenario_name(scenario_from_name(n)) == n);
    CHECK(scenario_name({false, true, false}) == "custom");
    CHECK_THROWS_AS(scenario_from_name("all"), std::invalid_argument);
}

TEST_CASE("synthetic generator is deterministic and day-consistent") {
    SyntheticOptions o;
    o.days = 3;
    o.first_day = 10;
    auto a = generate_case(o);
    auto b = generate_case(o);
    CHECK(a.profiles.day_ahead_price == b.profiles.day_ahead_price);
    CHECK(a.community.households[4].baseline_load == b.community.households[4].baseline_load);
    CHECK(validate_case(a).empty());
    SyntheticOptions one = o;
    one.first_day = 11;
    one.days = 1;
    auto c = generate_case(one);
    for (int t = 0; t < 24; ++t) {
        CHECK(c.profiles.workload[t] == a.profiles.workload[24 + t]);
        CHECK(c.profiles.pv_gen[2][t] == a.profiles.pv_gen[2][24 + t]);
    }
    for (const auto& hh : a.community.households) {
        // No drive while plugged in.
        for (int t = 0; t < a.grid.period_count; ++t) {
            std::size_t h = &hh - &a.community.households[0];
            if (ev_connected(hh.ev, a.grid, t)) CHECK(a.profiles.drive_power[h][t] == 0.0);
        }
    }
}

TEST_CASE("synthetic driving energy matches the described range") {
    SyntheticOptions o;
    o.days = 30;
    auto b = generate_case(o);
    for (std::size_t h = 0; h < b.community.households.size(); ++h) {
        double total = 0.0;
        for (double v : b.profiles.drive_power[h]) total += v;
        double per_day = total / 30.0;
        CHECK(per_day >= 50 * 0.8 * 0.15 - 0.1);
        CHECK(per_day <= 100 * 1.2 * 0.20 + 0.1);
    }
}
