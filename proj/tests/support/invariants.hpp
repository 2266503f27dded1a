#pragma once

// Residuals of the physical and QoS relations on a decoded record,
// recomputed from the case data alone.

#include "lecdc/coordinator.hpp"

namespace invariants {

struct Residuals {
    double eoa_balance = 0.0;
    double household_balance = 0.0;
    double heat_balance = 0.0;
    double resume_before_pause = 0.0;  // max over t of cum_resumed - cum_paused
    double resume_all = 0.0;           // |cum_resumed - cum_paused| at the end
    double qos_cap = 0.0;              // work left beyond the allowed delay
    double delay_entry = 0.0;          // max delay-matrix entry above the cap
};

Residuals residuals(const lecdc::SolutionRecord& record, const lecdc::CaseBundle& bundle,
                    const lecdc::ScenarioConfig& scenario);

double worst_balance(const Residuals& r);
double worst_qos(const Residuals& r);

}  // namespace invariants
