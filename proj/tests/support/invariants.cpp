#include "invariants.hpp"

#include <algorithm>
#include <cmath>

namespace invariants {

using namespace lecdc;

Residuals residuals(const SolutionRecord& r, const CaseBundle& b, const ScenarioConfig& s) {
    Residuals out;
    const int T = r.periods();
    const auto& p = b.profiles;
    const auto& dc = b.data_centre;
    auto worse = [](double& slot, double v) { slot = std::max(slot, v); };

    for (int t = 0; t < T; ++t) {
        double supply = p.wind_gen[t] + r.battery_discharge[t] + r.retailer_buy[t];
        double use = r.retailer_sell[t] + r.battery_charge[t] + r.dc_demand[t] + r.hvac_power[t];
        double heat = r.heat_vent[t] - dc.upgrade_eff * r.hvac_power[t];
        if (s.thermal_coupling) heat -= dc.exchanger_eff * (dc.heat_slope * r.dc_demand[t] + dc.heat_floor);
        for (std::size_t h = 0; h < r.households.size(); ++h) {
            const auto& x = r.households[h];
            supply += x.to_eoa[t];
            use += x.from_eoa[t];
            double home = x.to_eoa[t] + x.ev_charge[t] + x.flex_load[t] + x.cool_power[t] - x.from_eoa[t] -
                          x.ev_discharge[t] - p.pv_gen[h][t];
            worse(out.household_balance, std::abs(home));
            heat += x.heat_in[t];
        }
        worse(out.eoa_balance, std::abs(supply - use));
        worse(out.heat_balance, std::abs(heat));
    }

    std::vector<double> sb(T), re(T);
    double a = 0.0, c = 0.0;
    for (int t = 0; t < T; ++t) {
        a += r.dc_paused[t];
        c += r.dc_resumed[t];
        sb[t] = a;
        re[t] = c;
        worse(out.resume_before_pause, re[t] - sb[t]);
    }
    if (T > 0) out.resume_all = std::abs(re[T - 1] - sb[T - 1]);
    const auto& mu = p.mean_job_duration;
    for (int t = 0; t < T; ++t) {
        if (!(mu[t] > 0.0)) continue;
        for (int l = t + 1; l < T; ++l) {
            if ((l - t) / mu[t] <= dc.max_delay + 1e-12) continue;
            worse(out.qos_cap, sb[t] - re[l]);
        }
    }
    const auto& m = r.delay_matrix;
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j)
            if (m.at(i, j) != 0.0) worse(out.delay_entry, m.at(i, j) - dc.max_delay);
    return out;
}

double worst_balance(const Residuals& r) { return std::max({r.eoa_balance, r.household_balance, r.heat_balance}); }

double worst_qos(const Residuals& r) {
    return std::max({r.resume_before_pause, r.resume_all, r.qos_cap, r.delay_entry});
}

}  // namespace invariants
