#include "lecdc/coordinator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "csv.hpp"
#include "json.hpp"

namespace lecdc {

using milp::LinExpr;
using milp::Sense;

ModelStats Assembly::stats() const {
    return {model.var_count(), model.binary_count(), model.constraint_count()};
}

Assembly assemble(const CaseBundle& b, const ScenarioConfig& scenario, const AssetOptions& options) {
    const int T = b.grid.period_count;
    const double dt = b.grid.step_hours;
    const auto& p = b.profiles;
    Assembly a{milp::Model(b.name.empty() ? "window" : b.name), {}, {}, {}, {}};

    a.dc = build_dc_block(a.model, b.data_centre, p, b.grid, scenario);
    for (std::size_t h = 0; h < b.community.households.size(); ++h)
        a.households.push_back(build_household_block(a.model, h, b.community.households[h], p, b.grid, options));
    a.community = build_community_block(a.model, b.community, p, b.grid, options);
    build_heat_recovery(a.model, a.dc, a.households, a.community, b.data_centre, scenario);

    const auto& c = a.community;
    LinExpr objective;
    for (int t = 0; t < T; ++t) {
        // wind + discharge + buy + sum(to_eoa) = sell + charge + dc + sum(from_eoa) + hvac
        LinExpr balance = LinExpr(c.wind_in[t]) + c.battery_discharge[t] + c.retailer_buy[t] - c.retailer_sell[t] -
                          c.battery_charge[t] - a.dc.demand[t] - c.hvac_power[t];
        for (const auto& h : a.households) balance += LinExpr(h.to_eoa[t]) - h.from_eoa[t];
        a.model.add_constraint("eoa_balance_" + std::to_string(t), balance, Sense::eq, 0.0, "balance");

        objective.add(c.retailer_buy[t], dt * p.day_ahead_price[t]);
        objective.add(c.retailer_sell[t], -dt * p.ppa_price[t]);
        if (scenario.afrr) objective.add(a.dc.paused[t], -dt * p.afrr_price[t]);

        if (p.ppa_price[t] > p.day_ahead_price[t]) {
            a.warnings.push_back("period " + std::to_string(t) +
                                 ": export price exceeds import price; simultaneous buy and sell is not excluded");
        }
    }
    a.model.set_objective(objective);
    return a;
}

namespace {

Series values(const milp::Solution& s, const std::vector<milp::Var>& vars) {
    Series out;
    out.reserve(vars.size());
    for (auto v : vars) out.push_back(s.value(v));
    return out;
}

}  // namespace

SolutionRecord decode(const Assembly& a, const milp::Solution& s, const CaseBundle& b,
                      const ScenarioConfig& scenario) {
    SolutionRecord r;
    r.status = s.status;
    r.scenario = scenario_name(scenario);
    r.start_index = b.grid.start_index;
    r.step_hours = b.grid.step_hours;
    r.objective_cost = s.objective;
    r.solve_seconds = s.solve_seconds;
    r.mip_gap = s.mip_gap;
    r.stats = a.stats();
    r.warnings = a.warnings;

    const auto& c = a.community;
    r.retailer_buy = values(s, c.retailer_buy);
    r.retailer_sell = values(s, c.retailer_sell);
    r.wind_in = values(s, c.wind_in);
    r.battery_charge = values(s, c.battery_charge);
    r.battery_discharge = values(s, c.battery_discharge);
    r.battery_soc = values(s, c.battery_soc);
    r.hvac_power = values(s, c.hvac_power);
    r.heat_vent = values(s, c.heat_vent);

    auto dc = decode_dc(s, a.dc);
    r.dc_demand = std::move(dc.demand);
    r.dc_paused = std::move(dc.paused);
    r.dc_resumed = std::move(dc.resumed);
    r.dc_heat = std::move(dc.heat);
    r.delay_matrix = std::move(dc.delays);

    for (const auto& h : a.households) {
        HouseholdSeries hs;
        hs.to_eoa = values(s, h.to_eoa);
        hs.from_eoa = values(s, h.from_eoa);
        hs.flex_load = values(s, h.flex_load);
        hs.flex_up = values(s, h.flex_up);
        hs.flex_down = values(s, h.flex_down);
        hs.ev_charge = values(s, h.ev_charge);
        hs.ev_discharge = values(s, h.ev_discharge);
        hs.ev_soc = values(s, h.ev_soc);
        hs.heat_in = values(s, h.heat_in);
        hs.cool_power = values(s, h.cool_power);
        hs.temperature = values(s, h.temperature);
        r.households.push_back(std::move(hs));
    }
    return r;
}

double record_cost(const SolutionRecord& r, const CaseBundle& b, const ScenarioConfig& scenario) {
    const auto& p = b.profiles;
    double cost = 0.0;
    for (int t = 0; t < r.periods(); ++t) {
        double term = p.day_ahead_price[t] * r.retailer_buy[t] - p.ppa_price[t] * r.retailer_sell[t];
        if (scenario.afrr) term -= p.afrr_price[t] * r.dc_paused[t];
        cost += r.step_hours * term;
    }
    return cost;
}

std::vector<std::string> check_record(const SolutionRecord& r, const CaseBundle& b, const ScenarioConfig& scenario,
                                      const AssetOptions& options, double tol) {
    std::vector<std::string> issues;
    auto fail = [&](const std::string& what, int t, double residual) {
        std::ostringstream msg;
        msg << what;
        if (t >= 0) msg << " at period " << t;
        msg << " (residual " << residual << ")";
        issues.push_back(msg.str());
    };
    auto near = [&](double residual) { return std::abs(residual) <= tol; };

    const int T = b.grid.period_count;
    const double dt = b.grid.step_hours;
    const auto& p = b.profiles;
    const auto& dc = b.data_centre;
    const auto& c = b.community;
    if (r.periods() != T) {
        issues.push_back("record has " + std::to_string(r.periods()) + " periods, grid has " + std::to_string(T));
        return issues;
    }

    for (int t = 0; t < T; ++t) {
        double balance = r.wind_in[t] + r.battery_discharge[t] + r.retailer_buy[t] - r.retailer_sell[t] -
                         r.battery_charge[t] - r.dc_demand[t] - r.hvac_power[t];
        double heat = dc.upgrade_eff * r.hvac_power[t] - r.heat_vent[t];
        if (scenario.thermal_coupling) heat += dc.exchanger_eff * r.dc_heat[t];
        for (std::size_t h = 0; h < r.households.size(); ++h) {
            const auto& hs = r.households[h];
            balance += hs.to_eoa[t] - hs.from_eoa[t];
            heat -= hs.heat_in[t];
            double hb = hs.to_eoa[t] + hs.ev_charge[t] + hs.flex_load[t] + hs.cool_power[t] - hs.from_eoa[t] -
                        hs.ev_discharge[t] - p.pv_gen[h][t];
            if (!near(hb)) fail("household " + std::to_string(h) + " balance", t, hb);
        }
        if (!near(balance)) fail("community balance", t, balance);
        if (!near(heat)) fail("heat balance", t, heat);
        if (r.heat_vent[t] < -tol) fail("negative vented heat", t, r.heat_vent[t]);
        if (r.hvac_power[t] < -tol) fail("negative HVAC power", t, r.hvac_power[t]);
        if (std::min(r.battery_charge[t], r.battery_discharge[t]) > tol)
            fail("battery charges and discharges together", t, std::min(r.battery_charge[t], r.battery_discharge[t]));

        double prev = t == 0 ? c.battery_soc_initial : r.battery_soc[t - 1];
        double soc = prev + (r.battery_charge[t] * c.battery_eff_charge -
                             r.battery_discharge[t] / c.battery_eff_discharge) * dt;
        if (!near(soc - r.battery_soc[t])) fail("battery SoC recursion", t, soc - r.battery_soc[t]);
        if (r.battery_soc[t] < c.battery_soc_min - tol || r.battery_soc[t] > c.battery_soc_max + tol)
            fail("battery SoC outside band", t, r.battery_soc[t]);

        double demand = p.workload[t] - r.dc_paused[t] + r.dc_resumed[t] * dc.resume_overhead;
        if (!near(demand - r.dc_demand[t])) fail("DC demand identity", t, demand - r.dc_demand[t]);
        double q = dc.heat_slope * r.dc_demand[t] + dc.heat_floor;
        if (!near(q - r.dc_heat[t])) fail("DC heat identity", t, q - r.dc_heat[t]);
        if (r.dc_demand[t] < -tol || r.dc_demand[t] > dc.rating + tol) fail("DC demand outside rating", t, r.dc_demand[t]);
        if (r.dc_paused[t] < -tol || r.dc_paused[t] > p.workload[t] + tol) fail("paused power outside workload", t, r.dc_paused[t]);
        if (std::min(r.dc_paused[t], r.dc_resumed[t]) > tol)
            fail("DC pauses and resumes together", t, std::min(r.dc_paused[t], r.dc_resumed[t]));
        if (!scenario.job_pausing && (std::abs(r.dc_paused[t]) > tol || std::abs(r.dc_resumed[t]) > tol))
            fail("pausing without job_pausing", t, r.dc_paused[t] + r.dc_resumed[t]);
    }
    if (options.anchor_storage && r.battery_soc[T - 1] < c.battery_soc_initial - tol)
        fail("battery ends below its initial SoC", T - 1, r.battery_soc[T - 1] - c.battery_soc_initial);

    for (std::size_t h = 0; h < r.households.size(); ++h) {
        const auto& hs = r.households[h];
        const auto& hh = c.households[h];
        const std::string tag = "household " + std::to_string(h) + " ";
        double net = 0.0;
        for (int t = 0; t < T; ++t) {
            net += hs.flex_up[t] - hs.flex_down[t];
            double f = hh.baseline_load[t] + hs.flex_up[t] - hs.flex_down[t] - hs.flex_load[t];
            if (!near(f)) fail(tag + "flexible load identity", t, f);
            if (hs.flex_load[t] < hh.load_lower[t] - tol || hs.flex_load[t] > hh.load_upper[t] + tol)
                fail(tag + "flexible load outside bounds", t, hs.flex_load[t]);
            if (std::min(hs.ev_charge[t], hs.ev_discharge[t]) > tol)
                fail(tag + "EV charges and discharges together", t, std::min(hs.ev_charge[t], hs.ev_discharge[t]));
            if (!ev_connected(hh.ev, b.grid, t) && (hs.ev_charge[t] > tol || hs.ev_discharge[t] > tol))
                fail(tag + "EV power while disconnected", t, hs.ev_charge[t] + hs.ev_discharge[t]);
            double prev = t == 0 ? hh.ev.soc_initial : hs.ev_soc[t - 1];
            double soc = prev + (hs.ev_charge[t] * hh.ev.eff_charge - hs.ev_discharge[t] / hh.ev.eff_discharge) * dt -
                         p.drive_power[h][t] * dt;
            if (!near(soc - hs.ev_soc[t])) fail(tag + "EV SoC recursion", t, soc - hs.ev_soc[t]);
            if (hs.ev_soc[t] < hh.ev.soc_min - tol || hs.ev_soc[t] > hh.ev.soc_max + tol)
                fail(tag + "EV SoC outside band", t, hs.ev_soc[t]);

            const auto& th = hh.thermal;
            double tp = t == 0 ? th.temp_initial : hs.temperature[t - 1];
            double temp = tp + dt / (th.resistance * th.capacitance) * (p.outdoor_temp[t] - tp) +
                          dt / th.capacitance * (hs.heat_in[t] - hs.cool_power[t] * th.cool_eff);
            if (!near(temp - hs.temperature[t])) fail(tag + "temperature recursion", t, temp - hs.temperature[t]);
            if (hs.temperature[t] < th.temp_min - tol || hs.temperature[t] > th.temp_max + tol)
                fail(tag + "temperature outside comfort band", t, hs.temperature[t]);
            if (hs.heat_in[t] < -tol || hs.heat_in[t] > th.heat_rating + tol) fail(tag + "heat input outside rating", t, hs.heat_in[t]);
            if (hs.cool_power[t] < -tol || hs.cool_power[t] > th.cool_rating + tol) fail(tag + "cooling outside rating", t, hs.cool_power[t]);
        }
        if (!near(net)) fail(tag + "flexibility not neutral over the horizon", -1, net);
        if (options.anchor_storage && hs.ev_soc[T - 1] < hh.ev.soc_initial - tol)
            fail(tag + "EV ends below its initial SoC", T - 1, hs.ev_soc[T - 1] - hh.ev.soc_initial);
    }

    // Job conservation and the delay cap, from the decoded series alone.
    Series cum_sb(T), cum_re(T);
    for (int t = 0; t < T; ++t) {
        cum_sb[t] = (t ? cum_sb[t - 1] : 0.0) + r.dc_paused[t];
        cum_re[t] = (t ? cum_re[t - 1] : 0.0) + r.dc_resumed[t];
        if (cum_re[t] - cum_sb[t] > tol) fail("resumed exceeds paused", t, cum_re[t] - cum_sb[t]);
    }
    if (!near(cum_re[T - 1] - cum_sb[T - 1])) fail("paused work not fully resumed", T - 1, cum_re[T - 1] - cum_sb[T - 1]);

    const auto& mu = p.mean_job_duration;
    for (int t = 0; t < T; ++t) {
        for (int later = 0; later < T; ++later) {
            double entry = r.delay_matrix.at(t, later);
            if (later <= t) {
                if (entry != 0.0) fail("delay matrix lower triangle nonzero", t, entry);
                continue;
            }
            if (entry > dc.max_delay + 1e-12) fail("delay above cap", t, entry);
            if (!scenario.job_pausing || !(mu[t] > 0.0)) continue;
            double d = (later - t) / mu[t];
            double outstanding = cum_sb[t] - cum_re[later];
            if (d > dc.max_delay + 1e-12 && outstanding > tol)
                fail("work outstanding beyond the delay cap from " + std::to_string(t), later, outstanding);
            const bool expected = d <= dc.max_delay + 1e-12 && outstanding > tol && r.dc_paused[t] > tol;
            if (expected && std::abs(entry - d) > 1e-12)
                fail("delay matrix misses outstanding work from " + std::to_string(t), later, outstanding);
            if (!expected && entry != 0.0) fail("delay matrix entry without outstanding work", t, entry);
        }
    }

    double cost = record_cost(r, b, scenario);
    if (std::abs(cost - r.objective_cost) > 1e-6 * std::max(1.0, std::abs(cost)))
        fail("objective differs from recomputed cost", -1, cost - r.objective_cost);
    return issues;
}

namespace {

std::vector<milp::Var> exclusivity_binaries(const Assembly& a) {
    std::vector<milp::Var> out = a.community.battery_flag;
    for (const auto& h : a.households) out.insert(out.end(), h.ev_flag.begin(), h.ev_flag.end());
    for (const auto& f : a.dc.delay_flags) out.push_back(f.flag);
    return out;
}

// Sets the relaxed flags from the continuous values. False if some device
// both charges and discharges.
bool complete_flags(const Assembly& a, std::vector<double>& x) {
    const double tol = milp::kFeasTol;
    auto pick = [&](milp::Var flag, milp::Var in, milp::Var out) {
        double c = x[in.index], d = x[out.index];
        if (c > tol && d > tol) return false;
        x[flag.index] = c > tol ? 1.0 : 0.0;
        return true;
    };
    const auto& c = a.community;
    for (std::size_t t = 0; t < c.battery_flag.size(); ++t)
        if (!pick(c.battery_flag[t], c.battery_charge[t], c.battery_discharge[t])) return false;
    for (const auto& h : a.households)
        for (std::size_t t = 0; t < h.ev_flag.size(); ++t)
            if (!pick(h.ev_flag[t], h.ev_charge[t], h.ev_discharge[t])) return false;
    for (const auto& f : a.dc.delay_flags) {
        double outstanding = x[a.dc.cum_paused[f.pair.pause].index] - x[a.dc.cum_resumed[f.pair.later].index];
        x[f.flag.index] = outstanding > tol ? 1.0 : 0.0;
    }
    return true;
}

// Optimal solution of the full model via the relaxed one, or nothing.
std::optional<milp::Solution> solve_relaxed_first(const Assembly& a, milp::SolverAdapter& adapter,
                                                  const milp::SolveOptions& options) {
    milp::Model relaxed = a.model;
    for (auto v : exclusivity_binaries(a)) relaxed.set_kind(v, milp::VarKind::continuous);
    milp::Solution rs = adapter.run(relaxed, options);
    if (!rs.optimal() || !rs.has_values()) return std::nullopt;
    std::vector<double> x = rs.values;
    if (!complete_flags(a, x)) return std::nullopt;

    milp::Model fixed = a.model;
    for (std::size_t j = 0; j < fixed.var_count(); ++j) {
        const auto& v = fixed.var(static_cast<std::int32_t>(j));
        if (v.kind == milp::VarKind::binary) fixed.fix(fixed.handle(static_cast<std::int32_t>(j)), std::round(x[j]));
    }
    milp::Solution fs;
    try {
        fs = milp::solve(fixed, adapter, options);
    } catch (const milp::SolverError&) {
        return std::nullopt;
    }
    // The fixed model contains the relaxed optimum, so it cannot do worse.
    if (!fs.optimal() || fs.objective > rs.objective + 1e-7 * std::max(1.0, std::abs(rs.objective)))
        return std::nullopt;
    fs.mip_gap = rs.mip_gap;
    fs.solve_seconds += rs.solve_seconds;
    return fs;
}

}  // namespace

SolutionRecord solve_window(const CaseBundle& bundle, const ScenarioConfig& scenario, milp::SolverAdapter& adapter,
                            const WindowOptions& options) {
    Assembly a = assemble(bundle, scenario, options.assets);
    std::optional<milp::Solution> lazy;
    std::string path = "direct";
    if (options.relax_exclusivity) {
        lazy = solve_relaxed_first(a, adapter, options.solve);
        path = lazy ? "relaxed" : "fallback";
    }
    milp::Solution s = lazy ? std::move(*lazy) : milp::solve(a.model, adapter, options.solve);
    if (!s.optimal()) {
        SolutionRecord r;
        r.status = s.status;
        r.scenario = scenario_name(scenario);
        r.start_index = bundle.grid.start_index;
        r.step_hours = bundle.grid.step_hours;
        r.solve_seconds = s.solve_seconds;
        r.stats = a.stats();
        r.warnings = a.warnings;
        r.solve_path = path;
        r.delay_matrix = DelayMatrix(bundle.grid.period_count);
        if (s.status == milp::SolveStatus::infeasible && options.diagnose_infeasible) {
            for (const auto& family : a.model.families()) {
                auto relaxed = a.model.without_families({family});
                auto rs = adapter.run(relaxed, options.solve);
                if (rs.status == milp::SolveStatus::optimal || rs.status == milp::SolveStatus::unbounded)
                    r.infeasible_families.push_back(family);
            }
        }
        return r;
    }
    SolutionRecord r = decode(a, s, bundle, scenario);
    r.solve_path = path;
    auto issues = check_record(r, bundle, scenario, options.assets);
    if (!issues.empty()) {
        std::string msg = "solution fails " + std::to_string(issues.size()) + " consistency checks; first: " + issues[0];
        throw ConsistencyError(msg);
    }
    return r;
}

void write_record(const SolutionRecord& r, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const int T = r.periods();

    csv::Writer sys({"period", "retailer_buy", "retailer_sell", "wind_in", "battery_charge", "battery_discharge",
                     "battery_soc", "dc_demand", "dc_paused", "dc_resumed", "dc_heat", "hvac_power", "heat_vent"});
    for (int t = 0; t < T; ++t) {
        sys.row(std::vector<double>{double(r.start_index + t), r.retailer_buy[t], r.retailer_sell[t], r.wind_in[t],
                                    r.battery_charge[t], r.battery_discharge[t], r.battery_soc[t], r.dc_demand[t],
                                    r.dc_paused[t], r.dc_resumed[t], r.dc_heat[t], r.hvac_power[t], r.heat_vent[t]});
    }
    sys.save(dir / "system_series.csv");

    csv::Writer hh({"period", "household", "to_eoa", "from_eoa", "flex_load", "flex_up", "flex_down", "ev_charge",
                    "ev_discharge", "ev_soc", "heat_in", "cool_power", "temperature"});
    for (std::size_t h = 0; h < r.households.size(); ++h) {
        const auto& s = r.households[h];
        for (int t = 0; t < T; ++t) {
            hh.row(std::vector<double>{double(r.start_index + t), double(h), s.to_eoa[t], s.from_eoa[t],
                                       s.flex_load[t], s.flex_up[t], s.flex_down[t], s.ev_charge[t],
                                       s.ev_discharge[t], s.ev_soc[t], s.heat_in[t], s.cool_power[t],
                                       s.temperature[t]});
        }
    }
    hh.save(dir / "household_series.csv");
    r.delay_matrix.save_csv(dir / "delay_matrix.csv");

    nlohmann::json j = {
        {"scenario", r.scenario},
        {"status", milp::to_string(r.status)},
        {"objective_cost", r.objective_cost},
        {"start_index", r.start_index},
        {"periods", T},
        {"variables", r.stats.variables},
        {"binaries", r.stats.binaries},
        {"constraints", r.stats.constraints},
        {"solve_path", r.solve_path},
        {"warnings", r.warnings},
        {"infeasible_families", r.infeasible_families},
    };
    std::ofstream out(dir / "summary.json");
    out << j.dump(2) << '\n';
}

}  // namespace lecdc
