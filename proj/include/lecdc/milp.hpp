#pragma once

// Solver-agnostic mixed-integer linear programs: variables, sparse linear
// expressions, constraints and a minimisation objective. Everything is kept
// in insertion order so that emitted files are reproducible.

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace lecdc::milp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
/// Feasibility and integrality tolerance used for all post-solve checks.
inline constexpr double kFeasTol = 1e-6;

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class VarKind { continuous, binary };
enum class Sense { le, eq, ge };

/// Opaque handle to a model variable.
struct Var {
    std::uint64_t model = 0;
    std::int32_t index = -1;

    bool valid() const { return index >= 0; }
    bool operator==(const Var&) const = default;
};

class LinExpr {
public:
    LinExpr() = default;
    LinExpr(double constant) : constant_(constant) {}  // NOLINT(implicit)
    LinExpr(Var v) { add(v, 1.0); }                    // NOLINT(implicit)

    LinExpr& add(Var v, double coeff);
    LinExpr& add(const LinExpr& other, double scale = 1.0);
    LinExpr& operator+=(const LinExpr& other) { return add(other, 1.0); }
    LinExpr& operator-=(const LinExpr& other) { return add(other, -1.0); }
    LinExpr& operator*=(double s);

    double constant() const { return constant_; }
    /// Terms keyed by variable index, ascending.
    const std::map<std::int32_t, double>& terms() const { return terms_; }
    std::uint64_t model() const { return model_; }
    bool empty() const { return terms_.empty(); }

    double evaluate(const std::vector<double>& values) const;

private:
    std::map<std::int32_t, double> terms_;
    double constant_ = 0.0;
    std::uint64_t model_ = 0;  // 0 until a variable is added
};

LinExpr operator+(LinExpr a, const LinExpr& b);
LinExpr operator-(LinExpr a, const LinExpr& b);
LinExpr operator-(LinExpr a);
LinExpr operator*(double s, LinExpr e);
LinExpr operator*(LinExpr e, double s);

struct VarInfo {
    std::string name;
    VarKind kind;
    double lower;
    double upper;
};

struct Constraint {
    std::string name;
    LinExpr expr;  // constant folded into rhs, always zero
    Sense sense;
    double rhs;
    std::string family;  // grouping tag used for infeasibility diagnosis
};

/// Handle to a registered constraint.
struct ConstraintRef {
    std::int32_t index = -1;
};

class Model {
public:
    /// Copies keep the id, so handles stay valid on copies.
    explicit Model(std::string name = "model");

    const std::string& name() const { return name_; }
    std::uint64_t id() const { return id_; }

    /// Binary variables are forced into [0, 1] intersected with the given
    /// bounds. Throws ModelError on duplicate names or inverted bounds.
    Var add_var(const std::string& name, VarKind kind, double lower, double upper);
    Var continuous(const std::string& name, double lower = 0.0, double upper = kInf) {
        return add_var(name, VarKind::continuous, lower, upper);
    }
    Var binary(const std::string& name) { return add_var(name, VarKind::binary, 0.0, 1.0); }

    /// Registers `expr sense rhs`; the expression constant moves to the rhs.
    ConstraintRef add_constraint(const std::string& name, const LinExpr& expr, Sense sense, double rhs,
                                 const std::string& family = "");

    /// Objective is always minimised.
    void set_objective(const LinExpr& expr);
    const LinExpr& objective() const { return objective_; }
    bool has_objective() const { return has_objective_; }

    void set_bounds(Var v, double lower, double upper);
    void fix(Var v, double value) { set_bounds(v, value, value); }
    /// Making a variable binary clips its bounds to [0, 1].
    void set_kind(Var v, VarKind kind);

    std::size_t var_count() const { return vars_.size(); }
    std::size_t binary_count() const;
    std::size_t constraint_count() const { return constraints_.size(); }
    const VarInfo& var(Var v) const;
    const VarInfo& var(std::int32_t index) const { return vars_.at(index); }
    const std::vector<VarInfo>& vars() const { return vars_; }
    const std::vector<Constraint>& constraints() const { return constraints_; }
    Var find(const std::string& name) const;
    Var handle(std::int32_t index) const { return Var{id_, index}; }

    /// Families present, in first-use order.
    std::vector<std::string> families() const;
    /// Copy of this model without the constraints of the given families.
    Model without_families(const std::set<std::string>& families) const;

    /// Largest bound or constraint violation of `values`.
    double max_violation(const std::vector<double>& values) const;
    /// Largest distance of a binary value from {0, 1}.
    double max_integrality_gap(const std::vector<double>& values) const;

private:
    void check_owned(const LinExpr& expr, const char* where) const;

    std::string name_;
    std::uint64_t id_;
    std::vector<VarInfo> vars_;
    std::unordered_map<std::string, std::int32_t> by_name_;
    std::vector<Constraint> constraints_;
    LinExpr objective_;
    bool has_objective_ = false;
};

enum class SolveStatus { optimal, infeasible, unbounded, limit, error };
std::string to_string(SolveStatus s);

struct Solution {
    SolveStatus status = SolveStatus::error;
    double objective = 0.0;
    std::vector<double> values;  // indexed by variable index
    double solve_seconds = 0.0;
    double mip_gap = 0.0;
    std::string log;  // short solver message or log excerpt

    bool optimal() const { return status == SolveStatus::optimal; }
    bool has_values() const { return !values.empty(); }
    double value(Var v) const { return values.at(v.index); }
};

struct SolveOptions {
    double time_limit_s = kInf;
    double mip_gap = 1e-6;
};

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Contract for a MILP engine: take the model, run, read values back.
class SolverAdapter {
public:
    virtual ~SolverAdapter() = default;
    virtual std::string name() const = 0;
    virtual Solution run(const Model& model, const SolveOptions& options) = 0;
    /// Relative precision of reported values (0 for full double precision).
    virtual double value_precision() const { return 0.0; }
};

/// Runs `adapter` and checks the result: for optimal solutions every
/// constraint must hold within kFeasTol (widened by the adapter's value
/// precision), binaries must be integral within kFeasTol, and the reported
/// objective must match the recomputed one. Throws SolverError otherwise.
Solution solve(const Model& model, SolverAdapter& adapter, const SolveOptions& options = {});

/// CPLEX LP text. Variables and constraints appear in insertion order. A
/// nonzero objective constant is written as a comment only.
std::string emit_lp(const Model& model);

}  // namespace lecdc::milp
