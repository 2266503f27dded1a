#pragma once

// Long-run simulation as a chain of windows with state carryover, the
// household-count sensitivity sweep, and the summary metrics.

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "lecdc/coordinator.hpp"

namespace lecdc {

struct MetricsReport {
    std::string scenario;
    int households = 0;
    double op_cost = 0.0;              // kEUR
    double renewable_gen = 0.0;        // MWh
    double retailer_energy = 0.0;      // MWh
    double ac_ratio = 0.0;             // %
    double dc_re_consumption = 0.0;    // %
    double avg_job_delay = 0.0;        // % of mean job duration
    double heating = 0.0;              // MWh
    double power_to_hvac = 0.0;        // MWh
    double heat_recovery_ratio = 0.0;  // %
    double cost_per_household = 0.0;   // EUR
};

class MetricsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Aggregates all records, which must be optimal and tile `bundle`'s grid
/// consecutively (record k starting where record k-1 ended).
MetricsReport compute_metrics(const std::vector<SolutionRecord>& records, const CaseBundle& bundle,
                              const ScenarioConfig& scenario);

/// Storage and thermal state at a window boundary.
struct CarryState {
    double battery_soc = 0.0;
    std::vector<double> ev_soc;
    std::vector<double> temperature;

    bool operator==(const CarryState&) const = default;
};

CarryState initial_state(const CaseBundle& bundle);
/// State after the last period of an optimal record.
CarryState final_state(const SolutionRecord& record);
/// Copy of `bundle` whose initial conditions are `state`.
CaseBundle with_state(const CaseBundle& bundle, const CarryState& state);

class ChainError : public std::runtime_error {
public:
    ChainError(int window, const std::string& what, SolutionRecord record)
        : std::runtime_error(what), window_(window), record_(std::move(record)) {}

    int window() const { return window_; }
    const SolutionRecord& record() const { return record_; }

private:
    int window_;
    SolutionRecord record_;
};

struct ChainOptions {
    WindowOptions window;
    /// Called after each solved window (index from 0).
    std::function<void(int, const SolutionRecord&)> on_window;
};

struct ChainResult {
    std::vector<SolutionRecord> records;
    /// boundaries[k] is the initial state of window k; the last entry is the
    /// state after the final window.
    std::vector<CarryState> boundaries;
    MetricsReport report;
};

/// Splits the horizon into windows of `window_days` days and solves them in
/// order, feeding each window's final state into the next. Throws
/// std::invalid_argument when the window does not divide the horizon and
/// ChainError when a window is not solved to optimality.
ChainResult run_chain(const CaseBundle& bundle, const ScenarioConfig& scenario, int window_days,
                      milp::SolverAdapter& adapter, const ChainOptions& options = {});

/// A community of `count` households built from the bundle's households by
/// cyclic reuse. Copy k of template household j has its load band and
/// driving profile rotated by k days and id "<id>_<k>"; on a one-day horizon
/// copies are identical. PV and the EV window stay as in the template.
CaseBundle replicate_households(const CaseBundle& bundle, int count);

struct SensitivityRow {
    int count = 0;
    double demand_ratio = 0.0;  // net household draw from the community over DC consumption
    double avg_job_delay = 0.0;
    double dc_re_consumption = 0.0;
    double heat_recovery_ratio = 0.0;
    double cost_per_household = 0.0;
    double op_cost = 0.0;  // kEUR
};

struct SensitivityResult {
    std::vector<SensitivityRow> rows;
    std::vector<std::string> warnings;
};

/// Sorted, de-duplicated counts; duplicates produce a warning. Throws
/// std::invalid_argument for an empty list or any count below 1.
std::vector<int> normalize_counts(const std::vector<int>& counts, std::vector<std::string>* warnings = nullptr);

/// One chained run per count over the whole horizon, in windows of
/// `window_days` days (0: a single window).
SensitivityResult sensitivity_households(const CaseBundle& bundle, const std::vector<int>& counts,
                                         const ScenarioConfig& scenario, milp::SolverAdapter& adapter,
                                         int window_days = 0, const ChainOptions& options = {});

/// Table-style CSV (metric, unit, one column per report) and JSON summary.
void write_metrics_table(const std::vector<MetricsReport>& reports, const std::filesystem::path& path);
void write_metrics_json(const std::vector<MetricsReport>& reports, const std::filesystem::path& path);
void write_sensitivity_table(const SensitivityResult& result, const std::filesystem::path& path);

}  // namespace lecdc
