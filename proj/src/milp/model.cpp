#include <algorithm>
#include <atomic>
#include <cmath>

#include "lecdc/milp.hpp"

namespace lecdc::milp {

namespace {

std::atomic<std::uint64_t> next_model_id{1};

}  // namespace

// ---------------------------------------------------------------------------
// LinExpr

LinExpr& LinExpr::add(Var v, double coeff) {
    if (!v.valid()) throw ModelError("invalid variable handle in expression");
    if (model_ != 0 && v.model != model_) throw ModelError("expression mixes variables of different models");
    model_ = v.model;
    if (coeff == 0.0) return *this;
    auto [it, inserted] = terms_.try_emplace(v.index, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == 0.0) terms_.erase(it);
    }
    return *this;
}

LinExpr& LinExpr::add(const LinExpr& other, double scale) {
    constant_ += scale * other.constant_;
    if (other.model_ != 0) {
        if (model_ != 0 && other.model_ != model_)
            throw ModelError("expression mixes variables of different models");
        model_ = other.model_;
    }
    for (const auto& [index, coeff] : other.terms_) add(Var{other.model_, index}, scale * coeff);
    return *this;
}

LinExpr& LinExpr::operator*=(double s) {
    constant_ *= s;
    if (s == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto& [index, coeff] : terms_) coeff *= s;
    return *this;
}

double LinExpr::evaluate(const std::vector<double>& values) const {
    double sum = constant_;
    for (const auto& [index, coeff] : terms_) sum += coeff * values.at(index);
    return sum;
}

LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
LinExpr operator-(LinExpr a) { return a *= -1.0; }
LinExpr operator*(double s, LinExpr e) { return e *= s; }
LinExpr operator*(LinExpr e, double s) { return e *= s; }

// ---------------------------------------------------------------------------
// Model

Model::Model(std::string name) : name_(std::move(name)), id_(next_model_id++) {}

Var Model::add_var(const std::string& name, VarKind kind, double lower, double upper) {
    if (name.empty()) throw ModelError("variable name must not be empty");
    if (by_name_.count(name)) throw ModelError("duplicate variable name '" + name + "'");
    if (std::isnan(lower) || std::isnan(upper) || lower > upper)
        throw ModelError("inverted bounds for variable '" + name + "'");
    if (kind == VarKind::binary) {
        lower = std::max(lower, 0.0);
        upper = std::min(upper, 1.0);
        if (lower > upper) throw ModelError("binary variable '" + name + "' has empty domain");
    }
    auto index = static_cast<std::int32_t>(vars_.size());
    vars_.push_back({name, kind, lower, upper});
    by_name_.emplace(name, index);
    return Var{id_, index};
}

void Model::check_owned(const LinExpr& expr, const char* where) const {
    if (expr.model() != 0 && expr.model() != id_)
        throw ModelError(std::string(where) + ": expression references a variable of another model");
}

ConstraintRef Model::add_constraint(const std::string& name, const LinExpr& expr, Sense sense, double rhs,
                                    const std::string& family) {
    check_owned(expr, "add_constraint");
    if (std::isnan(rhs)) throw ModelError("constraint '" + name + "' has NaN rhs");
    Constraint c{name, expr, sense, rhs - expr.constant(), family};
    c.expr.add(LinExpr(-expr.constant()));
    constraints_.push_back(std::move(c));
    return ConstraintRef{static_cast<std::int32_t>(constraints_.size() - 1)};
}

void Model::set_objective(const LinExpr& expr) {
    check_owned(expr, "set_objective");
    objective_ = expr;
    has_objective_ = true;
}

void Model::set_bounds(Var v, double lower, double upper) {
    var(v);  // ownership check
    auto& info = vars_[v.index];
    if (std::isnan(lower) || std::isnan(upper) || lower > upper)
        throw ModelError("inverted bounds for variable '" + info.name + "'");
    info.lower = lower;
    info.upper = upper;
}

void Model::set_kind(Var v, VarKind kind) {
    var(v);
    auto& info = vars_[v.index];
    if (kind == VarKind::binary) {
        double lo = std::max(info.lower, 0.0), hi = std::min(info.upper, 1.0);
        if (lo > hi) throw ModelError("bounds of '" + info.name + "' exclude both 0 and 1");
        info.lower = lo;
        info.upper = hi;
    }
    info.kind = kind;
}

std::size_t Model::binary_count() const {
    return std::count_if(vars_.begin(), vars_.end(), [](const VarInfo& v) { return v.kind == VarKind::binary; });
}

const VarInfo& Model::var(Var v) const {
    if (v.model != id_ || v.index < 0 || v.index >= static_cast<std::int32_t>(vars_.size()))
        throw ModelError("variable handle does not belong to this model");
    return vars_[v.index];
}

Var Model::find(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return Var{};
    return Var{id_, it->second};
}

std::vector<std::string> Model::families() const {
    std::vector<std::string> out;
    for (const auto& c : constraints_)
        if (std::find(out.begin(), out.end(), c.family) == out.end()) out.push_back(c.family);
    return out;
}

Model Model::without_families(const std::set<std::string>& families) const {
    Model copy = *this;
    copy.constraints_.clear();
    for (const auto& c : constraints_)
        if (!families.count(c.family)) copy.constraints_.push_back(c);
    return copy;
}

namespace {

double row_violation(const Constraint& c, double activity) {
    switch (c.sense) {
        case Sense::le: return std::max(0.0, activity - c.rhs);
        case Sense::ge: return std::max(0.0, c.rhs - activity);
        case Sense::eq: return std::abs(activity - c.rhs);
    }
    return 0.0;
}

}  // namespace

double Model::max_violation(const std::vector<double>& values) const {
    if (values.size() != vars_.size()) throw ModelError("value vector size mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        worst = std::max(worst, vars_[i].lower - values[i]);
        worst = std::max(worst, values[i] - vars_[i].upper);
    }
    for (const auto& c : constraints_) worst = std::max(worst, row_violation(c, c.expr.evaluate(values)));
    return worst;
}

double Model::max_integrality_gap(const std::vector<double>& values) const {
    double worst = 0.0;
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].kind == VarKind::binary)
            worst = std::max(worst, std::abs(values.at(i) - std::round(values.at(i))));
    return worst;
}

// ---------------------------------------------------------------------------
// Solving

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::unbounded: return "unbounded";
        case SolveStatus::limit: return "limit";
        case SolveStatus::error: return "error";
    }
    return "error";
}

Solution solve(const Model& model, SolverAdapter& adapter, const SolveOptions& options) {
    if (!model.has_objective()) throw SolverError("model '" + model.name() + "' has no objective");
    Solution sol = adapter.run(model, options);
    if (sol.status == SolveStatus::error)
        throw SolverError(adapter.name() + " failed on '" + model.name() + "': " + sol.log);
    if (sol.has_values() && sol.values.size() != model.var_count())
        throw SolverError(adapter.name() + " returned " + std::to_string(sol.values.size()) +
                          " values for " + std::to_string(model.var_count()) + " variables");
    if (!sol.optimal()) return sol;

    // Residual check; values reported in text carry limited digits, so the
    // allowance grows with the magnitude of the row terms.
    const double prec = adapter.value_precision();
    const auto& vars = model.vars();
    for (std::size_t i = 0; i < vars.size(); ++i) {
        double allow = kFeasTol + prec * std::abs(sol.values[i]);
        if (vars[i].lower - sol.values[i] > allow || sol.values[i] - vars[i].upper > allow)
            throw SolverError(adapter.name() + ": variable '" + vars[i].name + "' violates its bounds");
    }
    for (const auto& c : model.constraints()) {
        double activity = 0.0, magnitude = 0.0;
        for (const auto& [index, coeff] : c.expr.terms()) {
            activity += coeff * sol.values[index];
            magnitude += std::abs(coeff * sol.values[index]);
        }
        if (row_violation(c, activity) > kFeasTol + prec * magnitude)
            throw SolverError(adapter.name() + ": constraint '" + c.name + "' violated by " +
                              std::to_string(row_violation(c, activity)));
    }
    if (model.max_integrality_gap(sol.values) > kFeasTol)
        throw SolverError(adapter.name() + ": binary values are not integral");

    double recomputed = model.objective().evaluate(sol.values);
    double scale = std::max(1.0, std::abs(recomputed));
    double magnitude = 0.0;
    for (const auto& [index, coeff] : model.objective().terms()) magnitude += std::abs(coeff * sol.values[index]);
    if (std::abs(recomputed - sol.objective) > 1e-6 * scale + prec * magnitude)
        throw SolverError(adapter.name() + ": reported objective " + std::to_string(sol.objective) +
                          " differs from recomputed " + std::to_string(recomputed));
    return sol;
}

}  // namespace lecdc::milp
