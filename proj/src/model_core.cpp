#include "lecdc/model_core.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "csv.hpp"
#include "json.hpp"

namespace lecdc {

namespace fs = std::filesystem;
using nlohmann::json;

int TimeGrid::periods_per_day() const {
    if (step_hours <= 0.0) return 1;
    int n = static_cast<int>(std::lround(24.0 / step_hours));
    return n < 1 ? 1 : n;
}

std::string scenario_name(const ScenarioConfig& s) {
    if (!s.thermal_coupling && !s.job_pausing && !s.afrr) return "nc";
    if (s.thermal_coupling && !s.job_pausing && !s.afrr) return "tc";
    if (s.thermal_coupling && s.job_pausing && !s.afrr) return "tc-jp";
    if (s.thermal_coupling && s.job_pausing && s.afrr) return "tc-jp-afrr";
    return "custom";
}

ScenarioConfig scenario_from_name(const std::string& name) {
    if (name == "nc") return ScenarioConfig::nc();
    if (name == "tc") return ScenarioConfig::tc();
    if (name == "tc-jp") return ScenarioConfig::tc_jp();
    if (name == "tc-jp-afrr") return ScenarioConfig::tc_jp_afrr();
    throw std::invalid_argument("unknown scenario '" + name + "'");
}

bool ev_connected(const EvSpec& ev, const TimeGrid& grid, int t) {
    int day = grid.periods_per_day();
    int pos = ((grid.start_index + t) % day + day) % day;
    if (ev.arrival <= ev.departure) return ev.arrival <= pos && pos <= ev.departure;
    return pos >= ev.arrival || pos <= ev.departure;
}

// ---------------------------------------------------------------------------
// Loading

namespace {

const char* kSystemColumns[] = {"day_ahead_price", "ppa_price",    "afrr_price", "workload",
                                "mean_job_duration", "outdoor_temp", "wind_gen"};

Series* system_series(ExogenousProfiles& p, const std::string& column) {
    if (column == "day_ahead_price") return &p.day_ahead_price;
    if (column == "ppa_price") return &p.ppa_price;
    if (column == "afrr_price") return &p.afrr_price;
    if (column == "workload") return &p.workload;
    if (column == "mean_job_duration") return &p.mean_job_duration;
    if (column == "outdoor_temp") return &p.outdoor_temp;
    if (column == "wind_gen") return &p.wind_gen;
    return nullptr;
}

template <typename T>
void read_opt(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

csv::Table read_table(const fs::path& path) {
    if (!fs::exists(path)) throw CaseError(CaseError::Kind::io, "series file not found: " + path.string());
    try {
        return csv::read(path);
    } catch (const std::exception& e) {
        throw CaseError(CaseError::Kind::parse, e.what());
    }
}

/// Selects rows whose `period` column lies in the grid window, checking that
/// the window is fully and contiguously present. Returns row indices.
std::vector<std::size_t> window_rows(const csv::Table& table, const TimeGrid& grid,
                                     const fs::path& path) {
    int pcol = table.column("period");
    if (pcol < 0) throw CaseError(CaseError::Kind::parse, path.string() + ": missing 'period' column");
    std::vector<std::size_t> rows;
    long expected = grid.start_index;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        double v;
        try {
            v = csv::parse_number(table.rows[r][pcol]);
        } catch (const std::exception& e) {
            throw CaseError(CaseError::Kind::parse, path.string() + ": " + e.what());
        }
        long p = std::lround(v);
        if (p < grid.start_index || p >= grid.start_index + grid.period_count) continue;
        if (p != expected) {
            throw CaseError(CaseError::Kind::length_mismatch,
                            path.string() + ": period " + std::to_string(expected) + " missing or out of order");
        }
        rows.push_back(r);
        ++expected;
    }
    if (static_cast<int>(rows.size()) != grid.period_count) {
        throw CaseError(CaseError::Kind::length_mismatch,
                        path.string() + ": has " + std::to_string(rows.size()) + " rows in window [" +
                            std::to_string(grid.start_index) + ", " +
                            std::to_string(grid.start_index + grid.period_count) + "), grid needs " +
                            std::to_string(grid.period_count));
    }
    return rows;
}

Series column_values(const csv::Table& table, int col, const std::vector<std::size_t>& rows,
                     const fs::path& path) {
    Series out;
    out.reserve(rows.size());
    for (auto r : rows) {
        try {
            out.push_back(csv::parse_number(table.rows[r][col]));
        } catch (const std::exception& e) {
            throw CaseError(CaseError::Kind::parse,
                            path.string() + ": column '" + table.header[col] + "': " + e.what());
        }
    }
    return out;
}

/// One column per household id.
std::vector<Series> household_columns(const fs::path& path, const TimeGrid& grid,
                                      const std::vector<std::string>& ids) {
    auto table = read_table(path);
    auto rows = window_rows(table, grid, path);
    std::vector<Series> out;
    for (const auto& id : ids) {
        int col = table.column(id);
        if (col < 0) throw CaseError(CaseError::Kind::parse, path.string() + ": missing column '" + id + "'");
        out.push_back(column_values(table, col, rows, path));
    }
    return out;
}

EvSpec parse_ev(const json& j) {
    EvSpec ev;
    read_opt(j, "charger_rating", ev.charger_rating);
    read_opt(j, "eff_charge", ev.eff_charge);
    read_opt(j, "eff_discharge", ev.eff_discharge);
    read_opt(j, "soc_min", ev.soc_min);
    read_opt(j, "soc_max", ev.soc_max);
    read_opt(j, "soc_initial", ev.soc_initial);
    read_opt(j, "arrival", ev.arrival);
    read_opt(j, "departure", ev.departure);
    return ev;
}

ThermalSpec parse_thermal(const json& j) {
    ThermalSpec th;
    read_opt(j, "resistance", th.resistance);
    read_opt(j, "capacitance", th.capacitance);
    read_opt(j, "temp_min", th.temp_min);
    read_opt(j, "temp_max", th.temp_max);
    th.temp_initial = 0.5 * (th.temp_min + th.temp_max);
    read_opt(j, "temp_initial", th.temp_initial);
    read_opt(j, "heat_rating", th.heat_rating);
    read_opt(j, "cool_rating", th.cool_rating);
    read_opt(j, "cool_eff", th.cool_eff);
    return th;
}

CaseBundle parse_manifest(const json& j, const fs::path& base) {
    CaseBundle b;
    read_opt(j, "name", b.name);

    const json& g = j.at("grid");
    read_opt(g, "step_hours", b.grid.step_hours);
    read_opt(g, "period_count", b.grid.period_count);
    read_opt(g, "start_index", b.grid.start_index);

    if (j.contains("scenario")) {
        const json& s = j.at("scenario");
        read_opt(s, "thermal_coupling", b.scenario.thermal_coupling);
        read_opt(s, "job_pausing", b.scenario.job_pausing);
        read_opt(s, "afrr", b.scenario.afrr);
    }

    if (j.contains("data_centre")) {
        const json& d = j.at("data_centre");
        auto& dc = b.data_centre;
        read_opt(d, "rating", dc.rating);
        read_opt(d, "resume_overhead", dc.resume_overhead);
        read_opt(d, "heat_slope", dc.heat_slope);
        read_opt(d, "heat_floor", dc.heat_floor);
        read_opt(d, "exchanger_eff", dc.exchanger_eff);
        read_opt(d, "upgrade_eff", dc.upgrade_eff);
        read_opt(d, "max_delay", dc.max_delay);
        read_opt(d, "big_m", dc.big_m);
    }

    if (j.contains("battery")) {
        const json& bat = j.at("battery");
        auto& c = b.community;
        read_opt(bat, "rating", c.battery_rating);
        read_opt(bat, "eff_charge", c.battery_eff_charge);
        read_opt(bat, "eff_discharge", c.battery_eff_discharge);
        read_opt(bat, "soc_min", c.battery_soc_min);
        read_opt(bat, "soc_max", c.battery_soc_max);
        read_opt(bat, "soc_initial", c.battery_soc_initial);
    }

    std::vector<std::string> ids;
    for (const auto& hj : j.at("households")) {
        HouseholdSpec h;
        h.id = hj.at("id").get<std::string>();
        if (hj.contains("ev")) h.ev = parse_ev(hj.at("ev"));
        h.thermal = parse_thermal(hj.contains("thermal") ? hj.at("thermal") : json::object());
        ids.push_back(h.id);
        b.community.households.push_back(std::move(h));
    }

    std::map<std::string, std::string> files = {
        {"system", "system.csv"},           {"baseline_load", "baseline_load.csv"},
        {"load_lower", "load_lower.csv"},   {"load_upper", "load_upper.csv"},
        {"pv_gen", "pv_gen.csv"},           {"drive_power", "drive_power.csv"},
    };
    if (j.contains("series")) {
        for (auto& [key, value] : j.at("series").items()) {
            if (!files.count(key)) throw CaseError(CaseError::Kind::parse, "unknown series key '" + key + "'");
            files[key] = value.get<std::string>();
        }
    }

    // Grid sanity is needed before slicing; report it as validation.
    if (b.grid.period_count < 2 || b.grid.step_hours <= 0.0 || b.grid.start_index < 0) {
        throw CaseError(CaseError::Kind::validation,
                        "grid: step_hours must be > 0, period_count >= 2, start_index >= 0");
    }

    fs::path sys_path = base / files["system"];
    auto sys = read_table(sys_path);
    auto rows = window_rows(sys, b.grid, sys_path);
    for (const char* name : kSystemColumns) {
        int col = sys.column(name);
        if (col < 0) throw CaseError(CaseError::Kind::parse, sys_path.string() + ": missing column '" + name + "'");
        *system_series(b.profiles, name) = column_values(sys, col, rows, sys_path);
    }

    auto baseline = household_columns(base / files["baseline_load"], b.grid, ids);
    auto lower = household_columns(base / files["load_lower"], b.grid, ids);
    auto upper = household_columns(base / files["load_upper"], b.grid, ids);
    b.profiles.pv_gen = household_columns(base / files["pv_gen"], b.grid, ids);
    b.profiles.drive_power = household_columns(base / files["drive_power"], b.grid, ids);
    for (std::size_t h = 0; h < ids.size(); ++h) {
        auto& hh = b.community.households[h];
        hh.baseline_load = std::move(baseline[h]);
        hh.load_lower = std::move(lower[h]);
        hh.load_upper = std::move(upper[h]);
    }
    return b;
}

}  // namespace

CaseBundle load_case_unchecked(const fs::path& manifest_path) {
    if (!fs::exists(manifest_path))
        throw CaseError(CaseError::Kind::io, "case manifest not found: " + manifest_path.string());
    std::ifstream in(manifest_path);
    if (!in) throw CaseError(CaseError::Kind::io, "cannot open " + manifest_path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw CaseError(CaseError::Kind::parse, manifest_path.string() + ": " + e.what());
    }
    try {
        return parse_manifest(j, manifest_path.parent_path());
    } catch (const json::exception& e) {
        throw CaseError(CaseError::Kind::parse, manifest_path.string() + ": " + e.what());
    }
}

CaseBundle load_case(const fs::path& manifest_path) {
    CaseBundle b = load_case_unchecked(manifest_path);
    auto findings = validate_case(b);
    if (!findings.empty()) {
        throw CaseError(CaseError::Kind::validation, findings.front().field + ": " + findings.front().message);
    }
    return b;
}

// ---------------------------------------------------------------------------
// Saving

void save_case(const CaseBundle& b, const fs::path& dir) {
    fs::create_directories(dir);
    const auto& dc = b.data_centre;
    const auto& c = b.community;
    json j;
    j["format"] = "lecdc-case/1";
    j["name"] = b.name;
    j["grid"] = {{"step_hours", b.grid.step_hours},
                 {"period_count", b.grid.period_count},
                 {"start_index", b.grid.start_index}};
    j["scenario"] = {{"thermal_coupling", b.scenario.thermal_coupling},
                     {"job_pausing", b.scenario.job_pausing},
                     {"afrr", b.scenario.afrr}};
    j["data_centre"] = {{"rating", dc.rating},
                        {"resume_overhead", dc.resume_overhead},
                        {"heat_slope", dc.heat_slope},
                        {"heat_floor", dc.heat_floor},
                        {"exchanger_eff", dc.exchanger_eff},
                        {"upgrade_eff", dc.upgrade_eff},
                        {"max_delay", dc.max_delay},
                        {"big_m", dc.big_m}};
    j["battery"] = {{"rating", c.battery_rating},
                    {"eff_charge", c.battery_eff_charge},
                    {"eff_discharge", c.battery_eff_discharge},
                    {"soc_min", c.battery_soc_min},
                    {"soc_max", c.battery_soc_max},
                    {"soc_initial", c.battery_soc_initial}};
    j["households"] = json::array();
    for (const auto& h : c.households) {
        const auto& ev = h.ev;
        const auto& th = h.thermal;
        j["households"].push_back(
            {{"id", h.id},
             {"ev",
              {{"charger_rating", ev.charger_rating},
               {"eff_charge", ev.eff_charge},
               {"eff_discharge", ev.eff_discharge},
               {"soc_min", ev.soc_min},
               {"soc_max", ev.soc_max},
               {"soc_initial", ev.soc_initial},
               {"arrival", ev.arrival},
               {"departure", ev.departure}}},
             {"thermal",
              {{"resistance", th.resistance},
               {"capacitance", th.capacitance},
               {"temp_min", th.temp_min},
               {"temp_max", th.temp_max},
               {"temp_initial", th.temp_initial},
               {"heat_rating", th.heat_rating},
               {"cool_rating", th.cool_rating},
               {"cool_eff", th.cool_eff}}}});
    }
    j["series"] = {{"system", "system.csv"},       {"baseline_load", "baseline_load.csv"},
                   {"load_lower", "load_lower.csv"}, {"load_upper", "load_upper.csv"},
                   {"pv_gen", "pv_gen.csv"},         {"drive_power", "drive_power.csv"}};
    {
        std::ofstream out(dir / "case.json");
        if (!out) throw CaseError(CaseError::Kind::io, "cannot write " + (dir / "case.json").string());
        out << j.dump(2) << '\n';
    }

    const int T = b.grid.period_count;
    const auto& p = b.profiles;
    csv::Writer sys({"period", "day_ahead_price", "ppa_price", "afrr_price", "workload",
                     "mean_job_duration", "outdoor_temp", "wind_gen"});
    for (int t = 0; t < T; ++t) {
        sys.row(std::vector<double>{double(b.grid.start_index + t), p.day_ahead_price.at(t),
                                    p.ppa_price.at(t), p.afrr_price.at(t), p.workload.at(t),
                                    p.mean_job_duration.at(t), p.outdoor_temp.at(t), p.wind_gen.at(t)});
    }
    sys.save(dir / "system.csv");

    auto write_household = [&](const std::string& file, auto&& get) {
        std::vector<std::string> header{"period"};
        for (const auto& h : c.households) header.push_back(h.id);
        csv::Writer w(header);
        for (int t = 0; t < T; ++t) {
            std::vector<double> row{double(b.grid.start_index + t)};
            for (std::size_t h = 0; h < c.households.size(); ++h) row.push_back(get(h).at(t));
            w.row(row);
        }
        w.save(dir / file);
    };
    write_household("baseline_load.csv", [&](std::size_t h) -> const Series& { return c.households[h].baseline_load; });
    write_household("load_lower.csv", [&](std::size_t h) -> const Series& { return c.households[h].load_lower; });
    write_household("load_upper.csv", [&](std::size_t h) -> const Series& { return c.households[h].load_upper; });
    write_household("pv_gen.csv", [&](std::size_t h) -> const Series& { return p.pv_gen.at(h); });
    write_household("drive_power.csv", [&](std::size_t h) -> const Series& { return p.drive_power.at(h); });
}

// ---------------------------------------------------------------------------
// Validation

namespace {

class FindingSink {
public:
    void check(bool ok, std::string field, std::string message) {
        if (!ok) findings.push_back({std::move(field), std::move(message)});
    }
    std::vector<Finding> findings;
};

std::string indexed(const std::string& base, std::size_t i) {
    return base + "[" + std::to_string(i) + "]";
}

void check_series(FindingSink& sink, const Series& s, const std::string& field, int T, bool nonnegative) {
    if (static_cast<int>(s.size()) != T) {
        sink.check(false, field,
                   "has " + std::to_string(s.size()) + " entries, grid has " + std::to_string(T));
        return;
    }
    for (int t = 0; t < T; ++t) {
        if (!std::isfinite(s[t])) {
            sink.check(false, indexed(field, t), "must be finite");
            return;
        }
        if (nonnegative && s[t] < 0.0) {
            sink.check(false, indexed(field, t), "must be nonnegative");
            return;
        }
    }
}

bool in_unit_interval(double v) { return v > 0.0 && v <= 1.0; }

}  // namespace

std::vector<Finding> validate_case(const CaseBundle& b) {
    FindingSink sink;
    const auto& g = b.grid;
    const int T = g.period_count;
    sink.check(g.step_hours > 0.0, "grid.step_hours", "must be positive");
    sink.check(T >= 2, "grid.period_count", "must be at least 2");
    sink.check(g.start_index >= 0, "grid.start_index", "must be nonnegative");

    const auto& p = b.profiles;
    check_series(sink, p.day_ahead_price, "profiles.day_ahead_price", T, false);
    check_series(sink, p.ppa_price, "profiles.ppa_price", T, false);
    check_series(sink, p.afrr_price, "profiles.afrr_price", T, false);
    check_series(sink, p.workload, "profiles.workload", T, true);
    check_series(sink, p.mean_job_duration, "profiles.mean_job_duration", T, true);
    check_series(sink, p.outdoor_temp, "profiles.outdoor_temp", T, false);
    check_series(sink, p.wind_gen, "profiles.wind_gen", T, true);

    const auto& dc = b.data_centre;
    if (static_cast<int>(p.workload.size()) == T && static_cast<int>(p.mean_job_duration.size()) == T) {
        for (int t = 0; t < T; ++t) {
            if (p.workload[t] > 0.0 && !(p.mean_job_duration[t] > 0.0)) {
                sink.check(false, indexed("profiles.mean_job_duration", t),
                           "must be positive where workload is positive");
            }
            if (p.workload[t] > dc.rating) {
                sink.check(false, indexed("profiles.workload", t), "exceeds data_centre.rating");
            }
        }
    }

    sink.check(dc.rating > 0.0, "data_centre.rating", "must be positive");
    sink.check(dc.resume_overhead > 1.0, "data_centre.resume_overhead", "resume_overhead must exceed 1");
    sink.check(dc.heat_slope >= 0.0, "data_centre.heat_slope", "must be nonnegative");
    sink.check(dc.heat_floor >= 0.0, "data_centre.heat_floor", "must be nonnegative");
    sink.check(in_unit_interval(dc.exchanger_eff), "data_centre.exchanger_eff", "must lie in (0, 1]");
    sink.check(dc.upgrade_eff > 0.0, "data_centre.upgrade_eff", "must be positive");
    sink.check(dc.max_delay > 0.0, "data_centre.max_delay", "must be positive");
    sink.check(dc.big_m > 0.0, "data_centre.big_m", "must be positive");

    sink.check(!(b.scenario.afrr && !b.scenario.job_pausing), "scenario.afrr", "aFRR requires job_pausing");

    const auto& c = b.community;
    sink.check(!c.households.empty(), "community.households", "at least one household required");
    sink.check(c.battery_rating >= 0.0, "community.battery_rating", "must be nonnegative");
    sink.check(in_unit_interval(c.battery_eff_charge), "community.battery_eff_charge", "must lie in (0, 1]");
    sink.check(in_unit_interval(c.battery_eff_discharge), "community.battery_eff_discharge", "must lie in (0, 1]");
    sink.check(c.battery_soc_min <= c.battery_soc_max, "community.battery_soc_min", "must not exceed battery_soc_max");
    sink.check(c.battery_soc_min <= c.battery_soc_initial && c.battery_soc_initial <= c.battery_soc_max,
               "community.battery_soc_initial", "must lie within [battery_soc_min, battery_soc_max]");

    sink.check(p.pv_gen.size() == c.households.size(), "profiles.pv_gen", "needs one series per household");
    sink.check(p.drive_power.size() == c.households.size(), "profiles.drive_power",
               "needs one series per household");

    const int window_limit = std::min(T, g.periods_per_day());
    for (std::size_t h = 0; h < c.households.size(); ++h) {
        const auto& hh = c.households[h];
        const std::string base = indexed("community.households", h);
        check_series(sink, hh.baseline_load, base + ".baseline_load", T, true);
        check_series(sink, hh.load_lower, base + ".load_lower", T, true);
        check_series(sink, hh.load_upper, base + ".load_upper", T, true);
        if (h < p.pv_gen.size()) check_series(sink, p.pv_gen[h], indexed("profiles.pv_gen", h), T, true);
        if (h < p.drive_power.size())
            check_series(sink, p.drive_power[h], indexed("profiles.drive_power", h), T, true);
        if (static_cast<int>(hh.baseline_load.size()) == T && static_cast<int>(hh.load_lower.size()) == T &&
            static_cast<int>(hh.load_upper.size()) == T) {
            for (int t = 0; t < T; ++t) {
                if (!(hh.load_lower[t] <= hh.baseline_load[t] && hh.baseline_load[t] <= hh.load_upper[t])) {
                    sink.check(false, indexed(base + ".baseline_load", t),
                               "must lie within [load_lower, load_upper]");
                    break;
                }
            }
        }

        const auto& ev = hh.ev;
        sink.check(ev.charger_rating >= 0.0, base + ".ev.charger_rating", "must be nonnegative");
        sink.check(in_unit_interval(ev.eff_charge), base + ".ev.eff_charge", "must lie in (0, 1]");
        sink.check(in_unit_interval(ev.eff_discharge), base + ".ev.eff_discharge", "must lie in (0, 1]");
        sink.check(ev.soc_min <= ev.soc_max, base + ".ev.soc_min", "must not exceed soc_max");
        sink.check(ev.soc_min <= ev.soc_initial && ev.soc_initial <= ev.soc_max, base + ".ev.soc_initial",
                   "must lie within [soc_min, soc_max]");
        sink.check(ev.arrival >= 0 && ev.arrival < window_limit, base + ".ev.arrival",
                   "must lie in [0, " + std::to_string(window_limit) + ")");
        sink.check(ev.departure >= 0 && ev.departure < window_limit, base + ".ev.departure",
                   "must lie in [0, " + std::to_string(window_limit) + ")");

        const auto& th = hh.thermal;
        sink.check(th.resistance > 0.0, base + ".thermal.resistance", "must be positive");
        sink.check(th.capacitance > 0.0, base + ".thermal.capacitance", "must be positive");
        sink.check(th.temp_min <= th.temp_max, base + ".thermal.temp_min", "must not exceed temp_max");
        sink.check(th.temp_min <= th.temp_initial && th.temp_initial <= th.temp_max,
                   base + ".thermal.temp_initial", "must lie within [temp_min, temp_max]");
        sink.check(th.heat_rating >= 0.0, base + ".thermal.heat_rating", "must be nonnegative");
        sink.check(th.cool_rating >= 0.0, base + ".thermal.cool_rating", "must be nonnegative");
        sink.check(th.cool_eff >= 0.0, base + ".thermal.cool_eff", "must be nonnegative");
    }
    return std::move(sink.findings);
}

CaseBundle slice_case(const CaseBundle& b, int first, int count) {
    if (first < 0 || count < 1 || first + count > b.grid.period_count)
        throw std::out_of_range("slice_case: window outside the grid");
    auto cut = [&](const Series& s) { return Series(s.begin() + first, s.begin() + first + count); };
    CaseBundle out = b;
    out.grid.start_index = b.grid.start_index + first;
    out.grid.period_count = count;
    auto& p = out.profiles;
    const auto& src = b.profiles;
    p.day_ahead_price = cut(src.day_ahead_price);
    p.ppa_price = cut(src.ppa_price);
    p.afrr_price = cut(src.afrr_price);
    p.workload = cut(src.workload);
    p.mean_job_duration = cut(src.mean_job_duration);
    p.outdoor_temp = cut(src.outdoor_temp);
    p.wind_gen = cut(src.wind_gen);
    for (std::size_t h = 0; h < p.pv_gen.size(); ++h) p.pv_gen[h] = cut(src.pv_gen[h]);
    for (std::size_t h = 0; h < p.drive_power.size(); ++h) p.drive_power[h] = cut(src.drive_power[h]);
    for (std::size_t h = 0; h < out.community.households.size(); ++h) {
        auto& hh = out.community.households[h];
        const auto& sh = b.community.households[h];
        hh.baseline_load = cut(sh.baseline_load);
        hh.load_lower = cut(sh.load_lower);
        hh.load_upper = cut(sh.load_upper);
    }
    return out;
}

}  // namespace lecdc
