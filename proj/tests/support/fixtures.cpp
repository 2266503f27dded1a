#include "fixtures.hpp"

#include <unistd.h>

#include <atomic>

#include "lecdc/coordinator.hpp"
#include "oracle.hpp"

#ifndef LECDC_DATA_DIR
#error "LECDC_DATA_DIR must point at the bundled data"
#endif

namespace fixtures {

using namespace lecdc;

std::filesystem::path data_dir() { return LECDC_DATA_DIR; }
std::filesystem::path desk10_day() { return data_dir() / "desk10_day" / "case.json"; }
std::filesystem::path desk10_10day() { return data_dir() / "desk10_10day" / "case.json"; }
std::filesystem::path desk10_year() { return data_dir() / "desk10_year" / "case.json"; }

std::filesystem::path scratch_dir(const std::string& tag) {
    static std::atomic<int> counter{0};
    auto dir = std::filesystem::temp_directory_path() /
               ("lecdc_test_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

CaseBundle flat_case(int T, int households) {
    CaseBundle b;
    b.name = "flat";
    b.grid = {1.0, T, 0};
    b.scenario = ScenarioConfig::tc_jp_afrr();
    b.data_centre.rating = 10.0;
    b.data_centre.big_m = 1000.0;
    auto& p = b.profiles;
    p.day_ahead_price.assign(T, 0.2);
    p.ppa_price.assign(T, 0.05);
    p.afrr_price.assign(T, 0.01);
    p.workload.assign(T, 5.0);
    p.mean_job_duration.assign(T, 4.0);
    p.outdoor_temp.assign(T, 10.0);
    p.wind_gen.assign(T, 2.0);
    for (int h = 0; h < households; ++h) {
        HouseholdSpec hh;
        hh.id = "h" + std::to_string(h + 1);
        hh.baseline_load.assign(T, 1.0);
        hh.load_lower.assign(T, 0.8);
        hh.load_upper.assign(T, 1.2);
        hh.ev.arrival = 0;
        hh.ev.departure = T - 1;
        b.community.households.push_back(hh);
        p.pv_gen.push_back(Series(T, 0.5));
        p.drive_power.push_back(Series(T, 0.0));
    }
    b.community.battery_rating = 5.0;
    b.community.battery_soc_min = 1.0;
    b.community.battery_soc_max = 10.0;
    b.community.battery_soc_initial = 5.0;
    return b;
}

namespace {

double uni(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * std::generate_canonical<double, 53>(rng);
}

int pick(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

}  // namespace

TinyInstance tiny_instance(std::mt19937_64& rng, int max_free) {
    const int T = pick(rng, 2, 4);
    CaseBundle b;
    b.name = "tiny";
    b.grid = {1.0, T, 0};
    auto& p = b.profiles;
    auto& dc = b.data_centre;
    dc.rating = 10.0;
    dc.big_m = 100.0;
    dc.resume_overhead = uni(rng, 1.05, 1.3);
    dc.heat_slope = uni(rng, 0.6, 0.95);
    dc.heat_floor = uni(rng, 0.0, 1.0);
    dc.exchanger_eff = uni(rng, 0.6, 1.0);
    dc.upgrade_eff = uni(rng, 0.8, 3.0);
    dc.max_delay = pick(rng, 0, 1) ? 0.5 : 1.0;
    for (int t = 0; t < T; ++t) {
        double da = uni(rng, 0.05, 0.3);
        p.day_ahead_price.push_back(da);
        p.ppa_price.push_back(uni(rng, 0.0, da));
        p.afrr_price.push_back(uni(rng, 0.0, 0.1));
        p.workload.push_back(uni(rng, 0.0, 8.0));
        p.mean_job_duration.push_back(pick(rng, 2, 4));
        p.outdoor_temp.push_back(uni(rng, 0.0, 25.0));
        p.wind_gen.push_back(uni(rng, 0.0, 6.0));
    }

    HouseholdSpec hh;
    hh.id = "h1";
    Series pv, drive;
    for (int t = 0; t < T; ++t) {
        double base = uni(rng, 0.5, 3.0);
        hh.baseline_load.push_back(base);
        hh.load_lower.push_back(base * uni(rng, 0.6, 1.0));
        hh.load_upper.push_back(base * uni(rng, 1.0, 1.4));
        pv.push_back(uni(rng, 0.0, 3.0));
    }
    auto& ev = hh.ev;
    ev.charger_rating = 3.0;
    ev.soc_min = 1.0;
    ev.soc_max = 12.0;
    ev.soc_initial = uni(rng, 3.0, 8.0);
    ev.eff_charge = uni(rng, 0.85, 1.0);
    ev.eff_discharge = uni(rng, 0.85, 1.0);
    ev.arrival = pick(rng, 1, T - 1);
    ev.departure = pick(rng, ev.arrival, std::min(T - 1, ev.arrival + 1));
    for (int t = 0; t < T; ++t) drive.push_back(t < ev.arrival ? uni(rng, 0.0, 1.5) : 0.0);
    auto& th = hh.thermal;
    th.resistance = uni(rng, 3.0, 8.0);
    th.capacitance = uni(rng, 2.0, 5.0);
    th.temp_initial = uni(rng, 20.0, 22.0);
    th.heat_rating = 8.0;
    th.cool_rating = 3.0;
    b.community.households.push_back(hh);
    p.pv_gen.push_back(pv);
    p.drive_power.push_back(drive);

    auto& c = b.community;
    c.battery_rating = 3.0;
    c.battery_soc_min = 1.0;
    c.battery_soc_max = 8.0;
    c.battery_soc_initial = uni(rng, 2.0, 6.0);

    static const ScenarioConfig kScenarios[] = {ScenarioConfig::nc(), ScenarioConfig::tc(), ScenarioConfig::tc_jp(),
                                                ScenarioConfig::tc_jp_afrr()};
    TinyInstance out{b, kScenarios[pick(rng, 0, 3)]};
    out.bundle.scenario = out.scenario;

    // Trim the binary count: battery first, then the EV window, then pausing.
    auto free_count = [&] { return oracle::free_binaries(assemble(out.bundle, out.scenario).model); };
    if (free_count() > max_free) out.bundle.community.battery_rating = 0.0;
    if (free_count() > max_free) out.bundle.community.households[0].ev.departure = ev.arrival;
    if (free_count() > max_free) out.bundle.data_centre.max_delay = 0.5;
    if (free_count() > max_free) out.bundle.data_centre.max_delay = 0.25;  // no indicators left
    return out;
}

}  // namespace fixtures
