#pragma once

// Concrete solver adapters.
//
//   highs  - HiGHS linked in-process (default).
//   cbc    - file exchange: the model is written as LP text, an external
//            CBC executable is run on it and its solution file is parsed.
//
// Adapter selection: explicit name, else $LECDC_SOLVER, else "highs".
// The CBC executable is taken from $LECDC_CBC_PATH, else "cbc" on PATH.

#include <filesystem>
#include <memory>
#include <string>

#include "lecdc/milp.hpp"

namespace lecdc::milp {

class HighsAdapter : public SolverAdapter {
public:
    /// When polishing, the binaries of the MIP optimum are rounded and fixed
    /// and the remaining LP is re-solved, so reported values satisfy the
    /// constraints with exact 0/1 binaries.
    explicit HighsAdapter(bool polish = true) : polish_(polish) {}

    std::string name() const override { return "highs"; }
    Solution run(const Model& model, const SolveOptions& options) override;

private:
    bool polish_;
};

/// Solution-file grammar (as written by CBC's `solu` command):
///
///   status-line   := STATUS " - objective value " NUMBER
///   STATUS        := "Optimal" | "Infeasible" | "Integer infeasible" |
///                    "Unbounded" | "Stopped on time" | "Stopped on ..." | ...
///   value-line    := ["**"] INDEX NAME VALUE [REDUCED_COST]
///
/// Variables missing from the file are zero. Names are matched against the
/// LP names of `model`.
Solution parse_cbc_solution(const std::string& text, const Model& model);

class CbcFileAdapter : public SolverAdapter {
public:
    /// `work_dir` receives model.lp, model.sol and cbc.log; a fresh
    /// temporary directory is used when empty.
    explicit CbcFileAdapter(std::filesystem::path executable, std::filesystem::path work_dir = {});

    std::string name() const override { return "cbc"; }
    Solution run(const Model& model, const SolveOptions& options) override;
    /// CBC prints eight significant digits.
    double value_precision() const override { return 1e-7; }

    /// True if the executable can be run.
    bool available() const;

private:
    std::filesystem::path executable_;
    std::filesystem::path work_dir_;
};

class SolverUnavailable : public SolverError {
public:
    using SolverError::SolverError;
};

/// Creates an adapter by name ("" means environment default). Throws
/// SolverUnavailable for unknown names or a missing executable.
std::unique_ptr<SolverAdapter> make_adapter(const std::string& name = "");

/// The LP name a model variable is written under.
std::string lp_variable_name(const std::string& name);

}  // namespace lecdc::milp
