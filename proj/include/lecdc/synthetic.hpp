#pragma once

// Deterministic synthetic community: hourly profiles for a 360-day year
// with seasonal temperature, prices, wind, PV, household loads, EV driving
// and DC workload. Same options, same bundle, on every platform.

#include <cstdint>
#include <string>

#include "lecdc/model_core.hpp"

namespace lecdc {

struct SyntheticOptions {
    std::string name = "desk10";
    int households = 10;
    int first_day = 0;  // day of the 360-day year the horizon starts on
    int days = 360;
    std::uint64_t seed = 20240601;
};

/// The profile of day d is the same whatever `first_day` and `days` are, so
/// a one-day case is a slice of the year.
CaseBundle generate_case(const SyntheticOptions& options);

}  // namespace lecdc
