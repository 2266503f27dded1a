#pragma once

// Full single-window model: community energy balance, cost objective and
// all asset blocks, plus solving, decoding and post-hoc verification.

#include <filesystem>
#include <string>
#include <vector>

#include "lecdc/dc_flex.hpp"
#include "lecdc/lec_assets.hpp"
#include "lecdc/milp.hpp"
#include "lecdc/model_core.hpp"

namespace lecdc {

struct ModelStats {
    std::size_t variables = 0;
    std::size_t binaries = 0;
    std::size_t constraints = 0;
};

struct Assembly {
    milp::Model model;
    DcHandles dc;
    std::vector<HouseholdHandles> households;
    CommunityHandles community;
    std::vector<std::string> warnings;

    ModelStats stats() const;
};

/// Builds the window model for `scenario` (the bundle's own scenario flags
/// are ignored).
Assembly assemble(const CaseBundle& bundle, const ScenarioConfig& scenario, const AssetOptions& options = {});

struct HouseholdSeries {
    Series to_eoa, from_eoa, flex_load, flex_up, flex_down;
    Series ev_charge, ev_discharge, ev_soc;
    Series heat_in, cool_power, temperature;
};

struct SolutionRecord {
    milp::SolveStatus status = milp::SolveStatus::error;
    std::string scenario;
    int start_index = 0;
    double step_hours = 1.0;
    double objective_cost = 0.0;  // EUR over the window
    double solve_seconds = 0.0;
    double mip_gap = 0.0;
    ModelStats stats;
    std::vector<std::string> warnings;
    /// Constraint families whose removal restores feasibility (infeasible
    /// records only).
    std::vector<std::string> infeasible_families;
    /// "direct", "relaxed" (relaxed optimum was exclusive) or "fallback".
    std::string solve_path = "direct";

    Series retailer_buy, retailer_sell, wind_in;
    Series battery_charge, battery_discharge, battery_soc;
    Series hvac_power, heat_vent;
    Series dc_demand, dc_paused, dc_resumed, dc_heat;
    std::vector<HouseholdSeries> households;
    DelayMatrix delay_matrix;

    bool optimal() const { return status == milp::SolveStatus::optimal; }
    int periods() const { return static_cast<int>(retailer_buy.size()); }
};

class ConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Decodes every variable family from an optimal solution.
SolutionRecord decode(const Assembly& assembly, const milp::Solution& solution, const CaseBundle& bundle,
                      const ScenarioConfig& scenario);

/// Objective recomputed from the decoded series.
double record_cost(const SolutionRecord& record, const CaseBundle& bundle, const ScenarioConfig& scenario);

/// Checks balances, QoS logic, bands, exclusivity and the objective on a
/// decoded optimal record. Returns one message per violation.
std::vector<std::string> check_record(const SolutionRecord& record, const CaseBundle& bundle,
                                      const ScenarioConfig& scenario, const AssetOptions& options = {},
                                      double tol = milp::kFeasTol);

struct WindowOptions {
    milp::SolveOptions solve;
    AssetOptions assets;
    bool diagnose_infeasible = true;
    /// Solve first with the battery, EV and delay-indicator binaries
    /// relaxed. If the relaxed optimum never charges and discharges in the
    /// same period, those binaries are set from it and the full model is
    /// re-solved with all binaries fixed; otherwise the full MILP is solved.
    /// Either way the result is optimal for the full model.
    bool relax_exclusivity = true;
};

/// Assembles, solves and decodes one window. Optimal records are verified
/// with check_record and a ConsistencyError is thrown on any violation.
/// Infeasible records carry the families whose relaxation restores
/// feasibility.
SolutionRecord solve_window(const CaseBundle& bundle, const ScenarioConfig& scenario, milp::SolverAdapter& adapter,
                            const WindowOptions& options = {});

/// system_series.csv, household_series.csv, delay_matrix.csv and
/// summary.json. Timings are left out so outputs are reproducible.
void write_record(const SolutionRecord& record, const std::filesystem::path& dir);

}  // namespace lecdc
