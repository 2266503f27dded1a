#include "oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace oracle {

using lecdc::milp::Model;
using lecdc::milp::Sense;
using lecdc::milp::VarKind;

namespace {

constexpr double kEps = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Dense tableau: rows 0..m-1 constraints, row m the reduced costs; last
// column the right-hand side.
class Tableau {
public:
    Tableau(int m, int n) : m_(m), n_(n), a_((m + 1) * (n + 1), 0.0), basis_(m, -1) {}

    double& at(int r, int c) { return a_[static_cast<std::size_t>(r) * (n_ + 1) + c]; }
    double& rhs(int r) { return at(r, n_); }
    int& basis(int r) { return basis_[r]; }

    void pivot(int r, int c) {
        const double p = at(r, c);
        for (int j = 0; j <= n_; ++j) at(r, j) /= p;
        for (int i = 0; i <= m_; ++i) {
            if (i == r) continue;
            const double f = at(i, c);
            if (f == 0.0) continue;
            for (int j = 0; j <= n_; ++j) at(i, j) -= f * at(r, j);
            at(i, c) = 0.0;
        }
        basis_[r] = c;
    }

    // Loads costs into the objective row and prices out the basis.
    void set_costs(const std::vector<double>& cost) {
        for (int j = 0; j <= n_; ++j) at(m_, j) = j < n_ ? cost[j] : 0.0;
        for (int r = 0; r < m_; ++r) {
            const double f = cost[basis_[r]];
            if (f == 0.0) continue;
            for (int j = 0; j <= n_; ++j) at(m_, j) -= f * at(r, j);
        }
    }

    // Minimises over columns with allowed[c]. Returns false if unbounded.
    bool run(const std::vector<char>& allowed) {
        const long long bland_after = 50LL * (m_ + n_);
        for (long long it = 0;; ++it) {
            const bool bland = it > bland_after;
            int enter = -1;
            double best = -kEps;
            for (int j = 0; j < n_; ++j) {
                if (!allowed[j]) continue;
                const double d = at(m_, j);
                if (d < best) {
                    enter = j;
                    if (bland) break;
                    best = d;
                }
            }
            if (enter < 0) return true;
            int leave = -1;
            double ratio = kInf;
            for (int r = 0; r < m_; ++r) {
                const double v = at(r, enter);
                if (v <= kEps) continue;
                const double q = rhs(r) / v;
                if (q < ratio - 1e-12 || (std::abs(q - ratio) <= 1e-12 && leave >= 0 && basis_[r] < basis_[leave])) {
                    ratio = q;
                    leave = r;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
    }

    int rows() const { return m_; }
    int cols() const { return n_; }

private:
    int m_, n_;
    std::vector<double> a_;
    std::vector<int> basis_;
};

// x_j = offset + sign * y_col (+ second column with opposite sign when free)
struct ColumnMap {
    double offset = 0.0;
    int col = -1;
    double sign = 1.0;
    int neg_col = -1;
};

}  // namespace

LpResult solve_lp(const Model& model, const std::vector<double>& lower, const std::vector<double>& upper) {
    const int n = static_cast<int>(model.var_count());
    LpResult result;

    std::vector<ColumnMap> map(n);
    int cols = 0;
    struct BoundRow {
        int col;
        double cap;
    };
    std::vector<BoundRow> bound_rows;
    for (int j = 0; j < n; ++j) {
        const double lo = lower[j], hi = upper[j];
        if (lo > hi + kEps) return result;  // infeasible bounds
        auto& mp = map[j];
        if (std::isfinite(lo) && std::isfinite(hi) && hi - lo <= kEps) {
            mp.offset = lo;
        } else if (std::isfinite(lo)) {
            mp.offset = lo;
            mp.col = cols++;
            if (std::isfinite(hi)) bound_rows.push_back({mp.col, hi - lo});
        } else if (std::isfinite(hi)) {
            mp.offset = hi;
            mp.col = cols++;
            mp.sign = -1.0;
        } else {
            mp.col = cols++;
            mp.neg_col = cols++;
        }
    }

    // Rows in structural columns: coefficients, sense, rhs.
    struct Row {
        std::vector<std::pair<int, double>> terms;
        Sense sense;
        double rhs;
    };
    std::vector<Row> rows;
    for (const auto& c : model.constraints()) {
        Row row{{}, c.sense, c.rhs};
        for (const auto& [j, a] : c.expr.terms()) {
            const auto& mp = map[j];
            row.rhs -= a * mp.offset;
            if (mp.col >= 0) row.terms.push_back({mp.col, a * mp.sign});
            if (mp.neg_col >= 0) row.terms.push_back({mp.neg_col, -a});
        }
        if (row.terms.empty()) {
            const bool ok = (c.sense == Sense::le && row.rhs >= -1e-7) || (c.sense == Sense::ge && row.rhs <= 1e-7) ||
                            (c.sense == Sense::eq && std::abs(row.rhs) <= 1e-7);
            if (!ok) return result;
            continue;
        }
        rows.push_back(std::move(row));
    }
    for (const auto& b : bound_rows) rows.push_back({{{b.col, 1.0}}, Sense::le, b.cap});

    const int m = static_cast<int>(rows.size());
    int slacks = 0;
    for (const auto& r : rows) slacks += r.sense != Sense::eq;
    const int total = cols + slacks + m;  // structural, slack, artificial
    Tableau tab(m, total);
    int s = cols;
    for (int i = 0; i < m; ++i) {
        const auto& r = rows[i];
        const double flip = r.rhs < 0.0 ? -1.0 : 1.0;
        for (const auto& [c, a] : r.terms) tab.at(i, c) += flip * a;
        if (r.sense == Sense::le) tab.at(i, s++) = flip;
        if (r.sense == Sense::ge) tab.at(i, s++) = -flip;
        tab.rhs(i) = flip * r.rhs;
        tab.at(i, cols + slacks + i) = 1.0;
        tab.basis(i) = cols + slacks + i;
    }

    // Phase I.
    std::vector<double> cost(total, 0.0);
    for (int i = 0; i < m; ++i) cost[cols + slacks + i] = 1.0;
    std::vector<char> allowed(total, 1);
    tab.set_costs(cost);
    tab.run(allowed);
    double infeas = 0.0;
    for (int i = 0; i < m; ++i)
        if (tab.basis(i) >= cols + slacks) infeas += tab.rhs(i);
    if (infeas > 1e-7) return result;

    // Drive zero-level artificials out where possible.
    for (int i = 0; i < m; ++i) {
        if (tab.basis(i) < cols + slacks) continue;
        for (int j = 0; j < cols + slacks; ++j) {
            if (std::abs(tab.at(i, j)) > 1e-7) {
                tab.pivot(i, j);
                break;
            }
        }
    }

    // Phase II.
    std::fill(cost.begin(), cost.end(), 0.0);
    for (const auto& [j, c] : model.objective().terms()) {
        const auto& mp = map[j];
        if (mp.col >= 0) cost[mp.col] += c * mp.sign;
        if (mp.neg_col >= 0) cost[mp.neg_col] -= c;
    }
    for (int j = cols + slacks; j < total; ++j) allowed[j] = 0;
    tab.set_costs(cost);
    if (!tab.run(allowed)) {
        result.status = LpStatus::unbounded;
        return result;
    }

    std::vector<double> y(total, 0.0);
    for (int i = 0; i < m; ++i) y[tab.basis(i)] = tab.rhs(i);
    result.x.assign(n, 0.0);
    double obj = model.objective().constant();
    for (int j = 0; j < n; ++j) {
        const auto& mp = map[j];
        double v = mp.offset;
        if (mp.col >= 0) v += mp.sign * y[mp.col];
        if (mp.neg_col >= 0) v -= y[mp.neg_col];
        result.x[j] = v;
    }
    for (const auto& [j, c] : model.objective().terms()) obj += c * result.x[j];
    result.objective = obj;
    result.status = LpStatus::optimal;
    return result;
}

LpResult solve_lp(const Model& model) {
    std::vector<double> lo, hi;
    for (const auto& v : model.vars()) {
        lo.push_back(v.lower);
        hi.push_back(v.upper);
    }
    return solve_lp(model, lo, hi);
}

int free_binaries(const Model& model) {
    int k = 0;
    for (const auto& v : model.vars()) k += v.kind == VarKind::binary && v.lower < 0.5 && v.upper > 0.5;
    return k;
}

EnumResult enumerate(const Model& model, int max_free) {
    std::vector<double> lo, hi;
    std::vector<int> free;
    for (std::size_t j = 0; j < model.var_count(); ++j) {
        const auto& v = model.var(static_cast<std::int32_t>(j));
        lo.push_back(v.lower);
        hi.push_back(v.upper);
        if (v.kind != VarKind::binary) continue;
        if (v.lower < 0.5 && v.upper > 0.5) {
            free.push_back(static_cast<int>(j));
        } else {
            lo.back() = hi.back() = v.lower > 0.5 ? 1.0 : 0.0;
        }
    }
    if (static_cast<int>(free.size()) > max_free) throw std::length_error("too many free binaries to enumerate");

    EnumResult best;
    const std::uint64_t count = 1ULL << free.size();
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        for (std::size_t k = 0; k < free.size(); ++k) {
            const double v = (mask >> k) & 1 ? 1.0 : 0.0;
            lo[free[k]] = hi[free[k]] = v;
        }
        auto r = solve_lp(model, lo, hi);
        ++best.assignments;
        if (r.status == LpStatus::unbounded) throw std::runtime_error("unbounded LP in enumeration");
        if (r.status != LpStatus::optimal) continue;
        if (!best.feasible || r.objective < best.objective) {
            best.feasible = true;
            best.objective = r.objective;
            best.x = std::move(r.x);
        }
    }
    return best;
}

}  // namespace oracle
