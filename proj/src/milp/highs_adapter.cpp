#include <chrono>
#include <cmath>
#include <cstdlib>

#include "Highs.h"
#include "lecdc/solvers.hpp"

namespace lecdc::milp {

namespace {

HighsLp to_highs(const Model& model) {
    HighsLp lp;
    const auto n = static_cast<HighsInt>(model.var_count());
    const auto m = static_cast<HighsInt>(model.constraint_count());
    lp.num_col_ = n;
    lp.num_row_ = m;
    lp.sense_ = ObjSense::kMinimize;
    lp.offset_ = model.objective().constant();
    lp.col_cost_.assign(n, 0.0);
    for (const auto& [index, coeff] : model.objective().terms()) lp.col_cost_[index] = coeff;

    bool integer = false;
    lp.integrality_.assign(n, HighsVarType::kContinuous);
    for (HighsInt j = 0; j < n; ++j) {
        const auto& v = model.var(j);
        lp.col_lower_.push_back(v.lower);
        lp.col_upper_.push_back(v.upper);
        lp.col_names_.push_back(lp_variable_name(v.name));
        if (v.kind == VarKind::binary) {
            lp.integrality_[j] = HighsVarType::kInteger;
            integer = true;
        }
    }
    if (!integer) lp.integrality_.clear();

    auto& a = lp.a_matrix_;
    a.format_ = MatrixFormat::kRowwise;
    a.num_col_ = n;
    a.num_row_ = m;
    a.start_.assign(1, 0);
    for (const auto& c : model.constraints()) {
        for (const auto& [index, coeff] : c.expr.terms()) {
            a.index_.push_back(index);
            a.value_.push_back(coeff);
        }
        a.start_.push_back(static_cast<HighsInt>(a.index_.size()));
        lp.row_names_.push_back(c.name);
        switch (c.sense) {
            case Sense::le:
                lp.row_lower_.push_back(-kHighsInf);
                lp.row_upper_.push_back(c.rhs);
                break;
            case Sense::ge:
                lp.row_lower_.push_back(c.rhs);
                lp.row_upper_.push_back(kHighsInf);
                break;
            case Sense::eq:
                lp.row_lower_.push_back(c.rhs);
                lp.row_upper_.push_back(c.rhs);
                break;
        }
    }
    lp.a_matrix_.ensureColwise();
    return lp;
}

SolveStatus map_status(HighsModelStatus s, bool has_values) {
    switch (s) {
        case HighsModelStatus::kOptimal:
        case HighsModelStatus::kModelEmpty:
            return SolveStatus::optimal;
        case HighsModelStatus::kInfeasible:
            return SolveStatus::infeasible;
        case HighsModelStatus::kUnbounded:
            return SolveStatus::unbounded;
        case HighsModelStatus::kUnboundedOrInfeasible:
            // Presolve cannot tell; the caller re-runs without presolve.
            return SolveStatus::error;
        case HighsModelStatus::kTimeLimit:
        case HighsModelStatus::kIterationLimit:
        case HighsModelStatus::kSolutionLimit:
        case HighsModelStatus::kObjectiveBound:
        case HighsModelStatus::kObjectiveTarget:
        case HighsModelStatus::kInterrupt:
        case HighsModelStatus::kMemoryLimit:
            return SolveStatus::limit;
        default:
            return has_values ? SolveStatus::limit : SolveStatus::error;
    }
}

void configure(Highs& highs, const SolveOptions& options) {
    highs.setOptionValue("output_flag", std::getenv("LECDC_HIGHS_LOG") != nullptr);
    highs.setOptionValue("threads", 1);
    highs.setOptionValue("random_seed", 0);
    highs.setOptionValue("mip_rel_gap", options.mip_gap);
    highs.setOptionValue("mip_feasibility_tolerance", 1e-7);
    highs.setOptionValue("primal_feasibility_tolerance", 1e-8);
    highs.setOptionValue("dual_feasibility_tolerance", 1e-8);
    if (std::isfinite(options.time_limit_s)) highs.setOptionValue("time_limit", options.time_limit_s);
}

}  // namespace

Solution HighsAdapter::run(const Model& model, const SolveOptions& options) {
    auto start = std::chrono::steady_clock::now();
    Solution sol;
    if (model.var_count() == 0) {
        sol.status = SolveStatus::optimal;
        sol.objective = model.objective().constant();
        return sol;
    }

    Highs highs;
    configure(highs, options);
    HighsLp lp = to_highs(model);
    const bool is_mip = !lp.integrality_.empty();
    if (highs.passModel(lp) == HighsStatus::kError) {
        sol.log = "HiGHS rejected the model";
        return sol;
    }
    if (const char* dump = std::getenv("LECDC_HIGHS_DUMP")) highs.writeModel(dump);
    highs.run();
    if (highs.getModelStatus() == HighsModelStatus::kUnboundedOrInfeasible) {
        highs.setOptionValue("presolve", "off");
        highs.run();
    }

    const auto status = highs.getModelStatus();
    const auto& hsol = highs.getSolution();
    sol.status = map_status(status, hsol.value_valid);
    sol.log = highs.modelStatusToString(status);
    if (hsol.value_valid) sol.values = hsol.col_value;
    sol.objective = highs.getInfo().objective_function_value;
    sol.mip_gap = is_mip ? highs.getInfo().mip_gap : 0.0;

    if (polish_ && is_mip && sol.has_values() &&
        (sol.status == SolveStatus::optimal || sol.status == SolveStatus::limit)) {
        // Fix binaries at their rounded values and re-solve the LP.
        HighsLp fixed = lp;
        for (HighsInt j = 0; j < lp.num_col_; ++j) {
            if (lp.integrality_[j] != HighsVarType::kInteger) continue;
            double v = std::round(sol.values[j]);
            fixed.col_lower_[j] = fixed.col_upper_[j] = v;
        }
        fixed.integrality_.clear();
        Highs lp_solver;
        configure(lp_solver, options);
        if (lp_solver.passModel(fixed) != HighsStatus::kError && lp_solver.run() != HighsStatus::kError &&
            lp_solver.getModelStatus() == HighsModelStatus::kOptimal) {
            sol.values = lp_solver.getSolution().col_value;
            sol.objective = lp_solver.getInfo().objective_function_value;
        }
    }
    sol.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return sol;
}

}  // namespace lecdc::milp
