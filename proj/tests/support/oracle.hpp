#pragma once

// Reference solver used only by tests: a dense two-phase tableau simplex and
// exhaustive enumeration over binary assignments. Independent of any
// production solver code path except the Model container itself.

#include <cstdint>
#include <vector>

#include "lecdc/milp.hpp"

namespace oracle {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    double objective = 0.0;
    std::vector<double> x;  // indexed like the model's variables
};

/// Solves the LP relaxation of `model` with the variable bounds replaced by
/// `lower`/`upper` (same indexing as the model).
LpResult solve_lp(const lecdc::milp::Model& model, const std::vector<double>& lower, const std::vector<double>& upper);

/// LP relaxation with the model's own bounds.
LpResult solve_lp(const lecdc::milp::Model& model);

struct EnumResult {
    bool feasible = false;
    double objective = 0.0;
    std::vector<double> x;
    std::uint64_t assignments = 0;  // LPs solved
};

/// Minimum over every 0/1 assignment of the binaries that are not fixed by
/// their bounds. Throws std::length_error above `max_free` free binaries.
EnumResult enumerate(const lecdc::milp::Model& model, int max_free = 16);

/// Number of binaries whose bounds allow both 0 and 1.
int free_binaries(const lecdc::milp::Model& model);

}  // namespace oracle
