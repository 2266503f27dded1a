#include "lecdc/lec_assets.hpp"

namespace lecdc {

using milp::LinExpr;
using milp::Sense;
using milp::Var;

namespace {

std::string name_of(const std::string& prefix, const char* what, int t) {
    return prefix + what + "_" + std::to_string(t);
}

}  // namespace

HouseholdHandles build_household_block(milp::Model& model, std::size_t index, const HouseholdSpec& hh,
                                       const ExogenousProfiles& profiles, const TimeGrid& grid,
                                       const AssetOptions& options) {
    const int T = grid.period_count;
    const double dt = grid.step_hours;
    const std::string p = "h" + std::to_string(index) + "_";
    const Series& pv = profiles.pv_gen.at(index);
    const Series& drive = profiles.drive_power.at(index);
    const auto& ev = hh.ev;
    const auto& th = hh.thermal;

    HouseholdHandles h;
    LinExpr net_flex;
    for (int t = 0; t < T; ++t) {
        h.to_eoa.push_back(model.continuous(name_of(p, "to_eoa", t)));
        h.from_eoa.push_back(model.continuous(name_of(p, "from_eoa", t)));
        h.flex_load.push_back(model.continuous(name_of(p, "flex", t), hh.load_lower.at(t), hh.load_upper.at(t)));
        h.flex_up.push_back(model.continuous(name_of(p, "flex_up", t)));
        h.flex_down.push_back(model.continuous(name_of(p, "flex_down", t)));
        h.ev_charge.push_back(model.continuous(name_of(p, "ev_ch", t), 0.0, ev.charger_rating));
        h.ev_discharge.push_back(model.continuous(name_of(p, "ev_dis", t), 0.0, ev.charger_rating));
        h.ev_flag.push_back(model.binary(name_of(p, "ev_z", t)));
        h.ev_soc.push_back(model.continuous(name_of(p, "ev_soc", t), -milp::kInf, milp::kInf));
        h.heat_in.push_back(model.continuous(name_of(p, "q_he", t), 0.0, th.heat_rating));
        h.cool_power.push_back(model.continuous(name_of(p, "p_co", t), 0.0, th.cool_rating));
        h.temperature.push_back(model.continuous(name_of(p, "temp", t), -milp::kInf, milp::kInf));

        // to_eoa + ev_charge + flex + cooling = from_eoa + ev_discharge + pv
        model.add_constraint(name_of(p, "balance", t),
                             LinExpr(h.to_eoa[t]) + h.ev_charge[t] + h.flex_load[t] + h.cool_power[t] -
                                 h.from_eoa[t] - h.ev_discharge[t],
                             Sense::eq, pv.at(t), "balance");

        model.add_constraint(name_of(p, "flex_def", t),
                             LinExpr(h.flex_load[t]) - h.flex_up[t] + h.flex_down[t], Sense::eq,
                             hh.baseline_load.at(t), "flex");
        net_flex += LinExpr(h.flex_up[t]) - h.flex_down[t];

        if (ev_connected(ev, grid, t)) {
            model.add_constraint(name_of(p, "ev_ch_gate", t),
                                 LinExpr(h.ev_charge[t]) - ev.charger_rating * LinExpr(h.ev_flag[t]), Sense::le,
                                 0.0, "ev");
            model.add_constraint(name_of(p, "ev_dis_gate", t),
                                 LinExpr(h.ev_discharge[t]) + ev.charger_rating * LinExpr(h.ev_flag[t]),
                                 Sense::le, ev.charger_rating, "ev");
        } else {
            model.fix(h.ev_charge[t], 0.0);
            model.fix(h.ev_discharge[t], 0.0);
            model.fix(h.ev_flag[t], 0.0);
        }

        // soc_t = soc_{t-1} + (ch * eff_ch - dis / eff_dis) dt - drive dt
        LinExpr soc = LinExpr(h.ev_soc[t]) - ev.eff_charge * dt * LinExpr(h.ev_charge[t]) +
                      (dt / ev.eff_discharge) * LinExpr(h.ev_discharge[t]);
        double rhs = -drive.at(t) * dt;
        if (t == 0) rhs += ev.soc_initial;
        else soc -= h.ev_soc[t - 1];
        model.add_constraint(name_of(p, "ev_soc_def", t), soc, Sense::eq, rhs, "soc");
        model.add_constraint(name_of(p, "ev_soc_min", t), h.ev_soc[t], Sense::ge, ev.soc_min, "soc");
        model.add_constraint(name_of(p, "ev_soc_max", t), h.ev_soc[t], Sense::le, ev.soc_max, "soc");

        // First-order RC model:
        // temp_t = temp_{t-1} + dt/(RC) (out_t - temp_{t-1}) + dt/C (q_he - p_co * eff_co)
        const double a = dt / (th.resistance * th.capacitance);
        LinExpr temp = LinExpr(h.temperature[t]) - (dt / th.capacitance) * LinExpr(h.heat_in[t]) +
                       (dt * th.cool_eff / th.capacitance) * LinExpr(h.cool_power[t]);
        double trhs = a * profiles.outdoor_temp.at(t);
        if (t == 0) trhs += (1.0 - a) * th.temp_initial;
        else temp -= (1.0 - a) * LinExpr(h.temperature[t - 1]);
        model.add_constraint(name_of(p, "temp_def", t), temp, Sense::eq, trhs, "thermal");
        model.add_constraint(name_of(p, "temp_min", t), h.temperature[t], Sense::ge, th.temp_min, "thermal");
        model.add_constraint(name_of(p, "temp_max", t), h.temperature[t], Sense::le, th.temp_max, "thermal");
    }
    model.add_constraint(p + "flex_total", net_flex, Sense::eq, 0.0, "flex");
    if (options.anchor_storage)
        model.add_constraint(p + "ev_soc_anchor", h.ev_soc[T - 1], Sense::ge, ev.soc_initial, "soc");
    return h;
}

CommunityHandles build_community_block(milp::Model& model, const CommunitySpec& c,
                                       const ExogenousProfiles& profiles, const TimeGrid& grid,
                                       const AssetOptions& options) {
    const int T = grid.period_count;
    const double dt = grid.step_hours;
    const double P = c.battery_rating;
    CommunityHandles h;
    for (int t = 0; t < T; ++t) {
        const std::string s = std::to_string(t);
        h.battery_charge.push_back(model.continuous("bat_ch_" + s, 0.0, P));
        h.battery_discharge.push_back(model.continuous("bat_dis_" + s, 0.0, P));
        h.battery_flag.push_back(model.binary("bat_z_" + s));
        h.battery_soc.push_back(model.continuous("bat_soc_" + s, -milp::kInf, milp::kInf));
        h.retailer_buy.push_back(model.continuous("buy_" + s));
        h.retailer_sell.push_back(model.continuous("sell_" + s));
        h.wind_in.push_back(model.continuous("wind_" + s, profiles.wind_gen.at(t), profiles.wind_gen.at(t)));
        h.hvac_power.push_back(model.continuous("hvac_" + s));
        h.heat_vent.push_back(model.continuous("vent_" + s));

        if (P > 0.0) {
            model.add_constraint("bat_ch_gate_" + s, LinExpr(h.battery_charge[t]) - P * LinExpr(h.battery_flag[t]),
                                 Sense::le, 0.0, "battery");
            model.add_constraint("bat_dis_gate_" + s,
                                 LinExpr(h.battery_discharge[t]) + P * LinExpr(h.battery_flag[t]), Sense::le, P,
                                 "battery");
        } else {
            model.fix(h.battery_flag[t], 0.0);
        }

        LinExpr soc = LinExpr(h.battery_soc[t]) - c.battery_eff_charge * dt * LinExpr(h.battery_charge[t]) +
                      (dt / c.battery_eff_discharge) * LinExpr(h.battery_discharge[t]);
        double rhs = 0.0;
        if (t == 0) rhs = c.battery_soc_initial;
        else soc -= h.battery_soc[t - 1];
        model.add_constraint("bat_soc_def_" + s, soc, Sense::eq, rhs, "soc");
        model.add_constraint("bat_soc_min_" + s, h.battery_soc[t], Sense::ge, c.battery_soc_min, "soc");
        model.add_constraint("bat_soc_max_" + s, h.battery_soc[t], Sense::le, c.battery_soc_max, "soc");
    }
    if (options.anchor_storage)
        model.add_constraint("bat_soc_anchor", h.battery_soc[T - 1], Sense::ge, c.battery_soc_initial, "soc");
    return h;
}

void build_heat_recovery(milp::Model& model, const DcHandles& dc, const std::vector<HouseholdHandles>& households,
                         const CommunityHandles& community, const DataCentreSpec& spec,
                         const ScenarioConfig& scenario) {
    const int T = static_cast<int>(community.hvac_power.size());
    for (int t = 0; t < T; ++t) {
        LinExpr balance = spec.upgrade_eff * LinExpr(community.hvac_power[t]) - community.heat_vent[t];
        if (scenario.thermal_coupling) balance += spec.exchanger_eff * LinExpr(dc.heat_out.at(t));
        for (const auto& h : households) balance -= h.heat_in.at(t);
        model.add_constraint("heat_balance_" + std::to_string(t), balance, Sense::eq, 0.0, "heat");
    }
}

}  // namespace lecdc
