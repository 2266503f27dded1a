#pragma once

// Energy-community blocks: per-household balance, flexible load, EV,
// first-order building thermal model; the shared battery and community
// flows; and the heat-recovery balance linking the DC to the households.

#include <vector>

#include "lecdc/dc_flex.hpp"
#include "lecdc/milp.hpp"
#include "lecdc/model_core.hpp"

namespace lecdc {

struct AssetOptions {
    /// Require storage SoC at the last period to be at least its initial
    /// value (battery and every EV).
    bool anchor_storage = true;
};

struct HouseholdHandles {
    std::vector<milp::Var> to_eoa;        // household -> community
    std::vector<milp::Var> from_eoa;      // community -> household
    std::vector<milp::Var> flex_load;
    std::vector<milp::Var> flex_up;
    std::vector<milp::Var> flex_down;
    std::vector<milp::Var> ev_charge;
    std::vector<milp::Var> ev_discharge;
    std::vector<milp::Var> ev_flag;       // 1 allows charging, 0 allows discharging
    std::vector<milp::Var> ev_soc;
    std::vector<milp::Var> heat_in;
    std::vector<milp::Var> cool_power;
    std::vector<milp::Var> temperature;
};

struct CommunityHandles {
    std::vector<milp::Var> battery_charge;
    std::vector<milp::Var> battery_discharge;
    std::vector<milp::Var> battery_flag;  // 1 allows charging, 0 allows discharging
    std::vector<milp::Var> battery_soc;
    std::vector<milp::Var> retailer_buy;
    std::vector<milp::Var> retailer_sell;
    std::vector<milp::Var> wind_in;
    std::vector<milp::Var> hvac_power;
    std::vector<milp::Var> heat_vent;
};

/// Household `index` of the community. Cooling power is drawn from the
/// household's own balance.
HouseholdHandles build_household_block(milp::Model& model, std::size_t index, const HouseholdSpec& household,
                                       const ExogenousProfiles& profiles, const TimeGrid& grid,
                                       const AssetOptions& options = {});

CommunityHandles build_community_block(milp::Model& model, const CommunitySpec& community,
                                       const ExogenousProfiles& profiles, const TimeGrid& grid,
                                       const AssetOptions& options = {});

/// Per period: exchanger_eff * q_DtC + upgrade_eff * p_A = sum of household
/// heat + vented heat. Without thermal coupling the DC term is dropped.
void build_heat_recovery(milp::Model& model, const DcHandles& dc, const std::vector<HouseholdHandles>& households,
                         const CommunityHandles& community, const DataCentreSpec& spec,
                         const ScenarioConfig& scenario);

}  // namespace lecdc
