#include "lecdc/sim_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "csv.hpp"
#include "json.hpp"

namespace lecdc {

namespace {

// Solver noise below this is reported as zero in the percentage metrics.
constexpr double kReportEps = 1e-9;

double snap(double v) { return std::abs(v) < kReportEps ? 0.0 : v; }

double percent(double num, double den) { return den > 0.0 ? snap(100.0 * num / den) : 0.0; }

}  // namespace

MetricsReport compute_metrics(const std::vector<SolutionRecord>& records, const CaseBundle& b,
                              const ScenarioConfig& scenario) {
    if (records.empty()) throw MetricsError("no records");
    const auto& p = b.profiles;
    const std::size_t H = b.community.households.size();
    const double eta_a = b.data_centre.upgrade_eff;

    MetricsReport m;
    m.scenario = scenario_name(scenario);
    m.households = static_cast<int>(H);

    double cost = 0.0, renewable = 0.0, bought = 0.0, sold = 0.0;
    double dc_total = 0.0, dc_from_surplus = 0.0;
    double paused = 0.0, paused_delay = 0.0;
    double heating = 0.0, hvac = 0.0;
    int expected_start = b.grid.start_index;
    for (std::size_t k = 0; k < records.size(); ++k) {
        const auto& r = records[k];
        if (!r.optimal())
            throw MetricsError("record " + std::to_string(k) + " is " + milp::to_string(r.status));
        if (r.start_index != expected_start)
            throw MetricsError("record " + std::to_string(k) + " starts at " + std::to_string(r.start_index) +
                               ", expected " + std::to_string(expected_start));
        if (r.households.size() != H) throw MetricsError("household count differs from the bundle");
        const int offset = r.start_index - b.grid.start_index;
        const double dt = r.step_hours;
        if (offset + r.periods() > b.grid.period_count) throw MetricsError("records extend past the grid");
        cost += r.objective_cost;
        for (int t = 0; t < r.periods(); ++t) {
            const int g = offset + t;
            double local = p.wind_gen[g];
            double net_load = 0.0;
            for (std::size_t h = 0; h < H; ++h) {
                const auto& hs = r.households[h];
                local += p.pv_gen[h][g];
                net_load += hs.flex_load[t] + hs.ev_charge[t] + hs.cool_power[t] - hs.ev_discharge[t];
                heating += hs.heat_in[t] * dt;
            }
            renewable += local * dt;
            bought += r.retailer_buy[t] * dt;
            sold += r.retailer_sell[t] * dt;
            hvac += r.hvac_power[t] * dt;

            double surplus = std::max(0.0, local - net_load);
            dc_total += r.dc_demand[t];
            dc_from_surplus += std::min(r.dc_demand[t], surplus);

            paused += r.dc_paused[t];
            paused_delay += r.dc_paused[t] * r.delay_matrix.row_max(t);
        }
        expected_start += r.periods();
    }

    m.op_cost = cost / 1000.0;
    m.renewable_gen = renewable / 1000.0;
    m.retailer_energy = bought / 1000.0;
    m.ac_ratio = percent(renewable - sold, renewable);
    m.dc_re_consumption = percent(dc_from_surplus, dc_total);
    m.avg_job_delay = percent(paused_delay, paused);
    m.heating = heating / 1000.0;
    m.power_to_hvac = hvac / 1000.0;
    m.heat_recovery_ratio = percent(heating - hvac * eta_a, heating);
    m.cost_per_household = H ? cost / static_cast<double>(H) : 0.0;
    return m;
}

CarryState initial_state(const CaseBundle& b) {
    CarryState s;
    s.battery_soc = b.community.battery_soc_initial;
    for (const auto& hh : b.community.households) {
        s.ev_soc.push_back(hh.ev.soc_initial);
        s.temperature.push_back(hh.thermal.temp_initial);
    }
    return s;
}

CarryState final_state(const SolutionRecord& r) {
    if (!r.optimal() || r.periods() == 0) throw MetricsError("final_state needs an optimal record");
    const int last = r.periods() - 1;
    CarryState s;
    s.battery_soc = r.battery_soc[last];
    for (const auto& hs : r.households) {
        s.ev_soc.push_back(hs.ev_soc[last]);
        s.temperature.push_back(hs.temperature[last]);
    }
    return s;
}

CaseBundle with_state(const CaseBundle& b, const CarryState& s) {
    if (s.ev_soc.size() != b.community.households.size() || s.temperature.size() != b.community.households.size())
        throw std::invalid_argument("carry state does not match the household count");
    CaseBundle out = b;
    auto& c = out.community;
    // Solver noise may put a carried value a hair outside its band.
    c.battery_soc_initial = std::clamp(s.battery_soc, c.battery_soc_min, c.battery_soc_max);
    for (std::size_t h = 0; h < c.households.size(); ++h) {
        auto& hh = c.households[h];
        hh.ev.soc_initial = std::clamp(s.ev_soc[h], hh.ev.soc_min, hh.ev.soc_max);
        hh.thermal.temp_initial = std::clamp(s.temperature[h], hh.thermal.temp_min, hh.thermal.temp_max);
    }
    return out;
}

ChainResult run_chain(const CaseBundle& bundle, const ScenarioConfig& scenario, int window_days,
                      milp::SolverAdapter& adapter, const ChainOptions& options) {
    const int ppd = bundle.grid.periods_per_day();
    const int T = bundle.grid.period_count;
    if (window_days < 1) throw std::invalid_argument("window_days must be at least 1");
    const long long window = static_cast<long long>(window_days) * ppd;
    if (window > T || T % window != 0)
        throw std::invalid_argument("window of " + std::to_string(window_days) + " days (" + std::to_string(window) +
                                    " periods) does not divide the horizon of " + std::to_string(T) + " periods");
    const int W = static_cast<int>(window);

    ChainResult out;
    CarryState state = initial_state(bundle);
    out.boundaries.push_back(state);
    for (int k = 0; k * W < T; ++k) {
        CaseBundle part = with_state(slice_case(bundle, k * W, W), state);
        SolutionRecord r = solve_window(part, scenario, adapter, options.window);
        if (!r.optimal()) {
            std::string msg = "window " + std::to_string(k) + " (periods " + std::to_string(k * W) + "-" +
                              std::to_string(k * W + W - 1) + ") is " + milp::to_string(r.status);
            if (!r.infeasible_families.empty()) {
                msg += "; relaxing any of these constraint families restores feasibility:";
                for (const auto& f : r.infeasible_families) msg += " " + f;
            }
            throw ChainError(k, msg, std::move(r));
        }
        state = final_state(r);
        out.boundaries.push_back(state);
        if (options.on_window) options.on_window(k, r);
        out.records.push_back(std::move(r));
    }
    out.report = compute_metrics(out.records, bundle, scenario);
    return out;
}

namespace {

Series rotate(const Series& s, int k) {
    if (s.empty()) return s;
    Series out(s.size());
    const int n = static_cast<int>(s.size());
    for (int t = 0; t < n; ++t) out[t] = s[((t - k) % n + n) % n];
    return out;
}

}  // namespace

CaseBundle replicate_households(const CaseBundle& b, int count) {
    if (count < 1) throw std::invalid_argument("at least one household required");
    const auto& src = b.community.households;
    const int n = static_cast<int>(src.size());
    if (n == 0) throw std::invalid_argument("template has no households");
    const int ppd = b.grid.periods_per_day();

    CaseBundle out = b;
    auto& hh = out.community.households;
    hh.clear();
    out.profiles.pv_gen.clear();
    out.profiles.drive_power.clear();
    for (int i = 0; i < count; ++i) {
        const int j = i % n, k = i / n;
        HouseholdSpec h = src[j];
        const int shift = k * ppd;
        if (k > 0) {
            h.id = src[j].id + "_" + std::to_string(k);
            h.baseline_load = rotate(h.baseline_load, shift);
            h.load_lower = rotate(h.load_lower, shift);
            h.load_upper = rotate(h.load_upper, shift);
        }
        hh.push_back(std::move(h));
        out.profiles.pv_gen.push_back(b.profiles.pv_gen[j]);  // same sky for every copy
        out.profiles.drive_power.push_back(rotate(b.profiles.drive_power[j], shift));
    }
    out.name = b.name + "_x" + std::to_string(count);
    return out;
}

std::vector<int> normalize_counts(const std::vector<int>& counts, std::vector<std::string>* warnings) {
    if (counts.empty()) throw std::invalid_argument("no household counts given");
    std::set<int> seen;
    std::vector<int> out;
    for (int c : counts) {
        if (c < 1) throw std::invalid_argument("household count " + std::to_string(c) + ": at least one household required");
        if (!seen.insert(c).second) {
            if (warnings) warnings->push_back("duplicate household count " + std::to_string(c) + " ignored");
            continue;
        }
        out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

SensitivityResult sensitivity_households(const CaseBundle& bundle, const std::vector<int>& counts,
                                         const ScenarioConfig& scenario, milp::SolverAdapter& adapter,
                                         int window_days, const ChainOptions& options) {
    const int ppd = bundle.grid.periods_per_day();
    if (window_days == 0) window_days = std::max(1, bundle.grid.period_count / ppd);
    SensitivityResult out;
    for (int count : normalize_counts(counts, &out.warnings)) {
        CaseBundle b = replicate_households(bundle, count);
        ChainResult chain;
        try {
            chain = run_chain(b, scenario, window_days, adapter, options);
        } catch (const ChainError& e) {
            throw ChainError(e.window(), std::to_string(count) + " households: " + e.what(), e.record());
        }
        double draw = 0.0, dc = 0.0;
        for (const auto& r : chain.records) {
            for (int t = 0; t < r.periods(); ++t) {
                for (const auto& hs : r.households) draw += hs.from_eoa[t] - hs.to_eoa[t];
                dc += r.dc_demand[t];
            }
        }
        const auto& m = chain.report;
        SensitivityRow row;
        row.count = count;
        row.demand_ratio = dc > 0.0 ? draw / dc : 0.0;
        row.avg_job_delay = m.avg_job_delay;
        row.dc_re_consumption = m.dc_re_consumption;
        row.heat_recovery_ratio = m.heat_recovery_ratio;
        row.cost_per_household = m.cost_per_household;
        row.op_cost = m.op_cost;
        out.rows.push_back(row);
    }
    return out;
}

namespace {

struct MetricRow {
    const char* name;
    const char* unit;
    double MetricsReport::*field;
};

const MetricRow kMetricRows[] = {
    {"op_cost", "kEUR", &MetricsReport::op_cost},
    {"renewable_gen", "MWh", &MetricsReport::renewable_gen},
    {"retailer_energy", "MWh", &MetricsReport::retailer_energy},
    {"ac_ratio", "%", &MetricsReport::ac_ratio},
    {"dc_re_consumption", "%", &MetricsReport::dc_re_consumption},
    {"avg_job_delay", "%", &MetricsReport::avg_job_delay},
    {"heating", "MWh", &MetricsReport::heating},
    {"power_to_hvac", "MWh", &MetricsReport::power_to_hvac},
    {"heat_recovery_ratio", "%", &MetricsReport::heat_recovery_ratio},
    {"cost_per_household", "EUR", &MetricsReport::cost_per_household},
};

}  // namespace

void write_metrics_table(const std::vector<MetricsReport>& reports, const std::filesystem::path& path) {
    std::vector<std::string> header{"metric", "unit"};
    for (const auto& r : reports) header.push_back(r.scenario);
    csv::Writer w(header);
    for (const auto& row : kMetricRows) {
        std::vector<std::string> fields{row.name, row.unit};
        for (const auto& r : reports) fields.push_back(csv::format_number(r.*row.field));
        w.row(fields);
    }
    w.save(path);
}

void write_metrics_json(const std::vector<MetricsReport>& reports, const std::filesystem::path& path) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : reports) {
        nlohmann::json e = {{"scenario", r.scenario}, {"households", r.households}};
        for (const auto& row : kMetricRows) e[row.name] = r.*row.field;
        j.push_back(e);
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

void write_sensitivity_table(const SensitivityResult& result, const std::filesystem::path& path) {
    csv::Writer w({"households", "demand_ratio", "avg_job_delay", "dc_re_consumption", "heat_recovery_ratio",
                   "cost_per_household", "op_cost"});
    for (const auto& r : result.rows) {
        w.row(std::vector<double>{double(r.count), r.demand_ratio, r.avg_job_delay, r.dc_re_consumption,
                                  r.heat_recovery_ratio, r.cost_per_household, r.op_cost});
    }
    w.save(path);
}

}  // namespace lecdc
