#pragma once

// Domain types for a Local Energy Community (LEC) co-operated with a Data
// Centre (DC), plus case loading, saving and validation.
//
// Units are fixed: kW, kWh, degC, EUR/kWh, hours.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace lecdc {

using Series = std::vector<double>;

struct TimeGrid {
    double step_hours = 1.0;
    int period_count = 24;
    int start_index = 0;

    /// Number of periods in one day, at least 1.
    int periods_per_day() const;
};

struct ExogenousProfiles {
    Series day_ahead_price;    // EUR/kWh
    Series ppa_price;          // EUR/kWh
    Series afrr_price;         // EUR/kWh
    Series workload;           // kW
    Series mean_job_duration;  // periods
    Series outdoor_temp;       // degC
    Series wind_gen;           // kW
    std::vector<Series> pv_gen;       // [household][period], kW
    std::vector<Series> drive_power;  // [household][period], kW
};

struct EvSpec {
    double charger_rating = 7.0;
    double eff_charge = 0.95;
    double eff_discharge = 0.95;
    double soc_min = 10.0;
    double soc_max = 50.0;
    double soc_initial = 30.0;
    int arrival = 18;    // within-day period index
    int departure = 7;   // within-day period index
};

struct ThermalSpec {
    double resistance = 5.0;    // degC/kW
    double capacitance = 3.0;   // kWh/degC
    double temp_min = 19.0;
    double temp_max = 23.0;
    double temp_initial = 21.0;
    double heat_rating = 6.0;   // kW thermal
    double cool_rating = 2.0;   // kW electric
    double cool_eff = 3.0;      // kW thermal per kW electric
};

struct HouseholdSpec {
    std::string id;
    Series baseline_load;
    Series load_lower;
    Series load_upper;
    EvSpec ev;
    ThermalSpec thermal;
};

struct CommunitySpec {
    std::vector<HouseholdSpec> households;
    double battery_rating = 20.0;
    double battery_eff_charge = 0.95;
    double battery_eff_discharge = 0.95;
    double battery_soc_min = 5.0;
    double battery_soc_max = 50.0;
    double battery_soc_initial = 25.0;
};

struct DataCentreSpec {
    double rating = 25.0;          // kW
    double resume_overhead = 1.1;  // K_S
    double heat_slope = 0.9;       // thermal kW per electric kW
    double heat_floor = 1.0;       // thermal kW
    double exchanger_eff = 0.8;
    double upgrade_eff = 1.0;      // auxiliary HVAC, thermal kW per electric kW
    double max_delay = 0.25;       // K_DELAY
    double big_m = 1.0e4;
};

struct ScenarioConfig {
    bool thermal_coupling = true;
    bool job_pausing = true;
    bool afrr = true;

    static ScenarioConfig nc() { return {false, false, false}; }
    static ScenarioConfig tc() { return {true, false, false}; }
    static ScenarioConfig tc_jp() { return {true, true, false}; }
    static ScenarioConfig tc_jp_afrr() { return {true, true, true}; }
};

/// Short scenario label: "nc", "tc", "tc-jp", "tc-jp-afrr"; anything else
/// is reported as "custom".
std::string scenario_name(const ScenarioConfig& s);
/// Inverse of scenario_name; throws std::invalid_argument on unknown names.
ScenarioConfig scenario_from_name(const std::string& name);

struct CaseBundle {
    std::string name;
    TimeGrid grid;
    CommunitySpec community;
    DataCentreSpec data_centre;
    ExogenousProfiles profiles;
    ScenarioConfig scenario;
};

/// One invariant violation. `field` is a dotted path, e.g.
/// "community.households[3].ev.arrival".
struct Finding {
    std::string field;
    std::string message;

    bool operator==(const Finding&) const = default;
};

class CaseError : public std::runtime_error {
public:
    enum class Kind { io, parse, validation, length_mismatch };

    CaseError(Kind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Reads a case manifest (JSON) and the series files it references. The
/// loaded bundle is validated; the first violation is thrown as a
/// CaseError of kind validation.
CaseBundle load_case(const std::filesystem::path& manifest_path);

/// Same as load_case but skips validation.
CaseBundle load_case_unchecked(const std::filesystem::path& manifest_path);

/// Writes `bundle` as manifest `case.json` plus series files into `dir`.
/// Only the grid's window is written; period labels keep start_index.
void save_case(const CaseBundle& bundle, const std::filesystem::path& dir);

std::vector<Finding> validate_case(const CaseBundle& bundle);

/// True if the EV of `ev` is plugged in at window period `t`. The
/// arrival/departure indices repeat every day; when arrival > departure
/// the window wraps across midnight.
bool ev_connected(const EvSpec& ev, const TimeGrid& grid, int t);

/// Copies periods [first, first + count) of `bundle` into a new bundle
/// whose grid starts at that offset. Initial states are left untouched.
CaseBundle slice_case(const CaseBundle& bundle, int first, int count);

}  // namespace lecdc
