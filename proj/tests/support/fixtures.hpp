#pragma once

// Small programmatic cases shared by the test executables.

#include <filesystem>
#include <random>
#include <string>

#include "lecdc/model_core.hpp"

namespace fixtures {

std::filesystem::path data_dir();
std::filesystem::path desk10_day();
std::filesystem::path desk10_10day();
std::filesystem::path desk10_year();

/// A fresh empty directory under the system temp directory.
std::filesystem::path scratch_dir(const std::string& tag);

/// Hand-sized consistent case: `T` hourly periods, `households` households,
/// flat series. Every validation rule holds.
lecdc::CaseBundle flat_case(int T = 6, int households = 1);

/// Random instance for the enumeration oracle: T in {2, 3, 4}, one
/// household, short EV window, random scenario. Components are switched off
/// until at most `max_free` binaries are free.
struct TinyInstance {
    lecdc::CaseBundle bundle;
    lecdc::ScenarioConfig scenario;
};
TinyInstance tiny_instance(std::mt19937_64& rng, int max_free = 9);

}  // namespace fixtures
