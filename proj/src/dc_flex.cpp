#include "lecdc/dc_flex.hpp"

#include <algorithm>
#include <cmath>

#include "csv.hpp"

namespace lecdc {

using milp::LinExpr;
using milp::Sense;
using milp::Var;

namespace {

constexpr double kDelayEps = 1e-12;

std::string idx(const char* base, int t) { return std::string(base) + "_" + std::to_string(t); }

}  // namespace

bool DelayPairSet::allowed(int pause, int later) const {
    if (later <= pause || pause < 0 || pause >= static_cast<int>(mean_job_duration.size())) return false;
    double mu = mean_job_duration[pause];
    if (!(mu > 0.0)) return false;
    return (later - pause) / mu <= cap + kDelayEps;
}

DelayPairSet admissible_delay_pairs(const TimeGrid& grid, const Series& mu, const Series& workload,
                                    double max_delay) {
    const int T = grid.period_count;
    if (static_cast<int>(mu.size()) != T || static_cast<int>(workload.size()) != T)
        throw std::invalid_argument("admissible_delay_pairs: series length differs from the grid");
    DelayPairSet set;
    set.cap = max_delay;
    set.mean_job_duration = mu;
    double mu_max = 0.0;
    for (int t = 0; t < T; ++t) {
        if (workload[t] > 0.0 && !(mu[t] > 0.0))
            throw std::invalid_argument("mean job duration must be positive at period " + std::to_string(t) +
                                        " where workload is positive");
        if (mu[t] > 0.0) mu_max = std::max(mu_max, mu[t]);
    }
    set.horizon = static_cast<int>(std::ceil(max_delay * mu_max - kDelayEps)) + 1;
    for (int t = 0; t < T; ++t) {
        if (!(mu[t] > 0.0)) continue;
        for (int later = t + 1; later < T && later - t <= set.horizon; ++later) {
            double d = (later - t) / mu[t];
            set.pairs.push_back({t, later, d, d > max_delay + kDelayEps});
        }
    }
    return set;
}

DcHandles build_dc_block(milp::Model& model, const DataCentreSpec& spec, const ExogenousProfiles& profiles,
                         const TimeGrid& grid, const ScenarioConfig& scenario) {
    if (!(spec.resume_overhead > 1.0)) throw std::invalid_argument("resume_overhead must exceed 1");
    const int T = grid.period_count;
    const auto& wkl = profiles.workload;
    if (static_cast<int>(wkl.size()) != T) throw std::invalid_argument("workload length differs from the grid");
    const double rating = spec.rating;

    DcHandles h;
    for (int t = 0; t < T; ++t) {
        h.demand.push_back(model.continuous(idx("dc_p_ed", t), 0.0, rating));
        h.paused.push_back(model.continuous(idx("dc_p_sb", t), 0.0, wkl[t]));
        h.resumed.push_back(model.continuous(idx("dc_p_re", t), 0.0, rating));
        h.pausing_flag.push_back(model.binary(idx("dc_z", t)));
        h.heat_out.push_back(model.continuous(idx("dc_q", t), 0.0, milp::kInf));

        if (!scenario.job_pausing) {
            model.fix(h.paused[t], 0.0);
            model.fix(h.resumed[t], 0.0);
            model.fix(h.pausing_flag[t], 0.0);
        }

        // p_ed = P_wkl - p_SB + K_S p_RE
        model.add_constraint(idx("dc_demand", t),
                             LinExpr(h.demand[t]) + h.paused[t] - spec.resume_overhead * LinExpr(h.resumed[t]),
                             Sense::eq, wkl[t], "dc");
        // q = C p_ed + C_MIN
        model.add_constraint(idx("dc_heat", t), LinExpr(h.heat_out[t]) - spec.heat_slope * LinExpr(h.demand[t]),
                             Sense::eq, spec.heat_floor, "dc");
        if (scenario.job_pausing) {
            model.add_constraint(idx("dc_pause_gate", t), LinExpr(h.paused[t]) - wkl[t] * LinExpr(h.pausing_flag[t]),
                                 Sense::le, 0.0, "dc");
            model.add_constraint(idx("dc_resume_gate", t), LinExpr(h.resumed[t]) + rating * LinExpr(h.pausing_flag[t]),
                                 Sense::le, rating, "dc");
        }
    }
    if (!scenario.job_pausing) return h;

    // Cumulative paused/resumed power; resumed never exceeds paused and the
    // two meet at the end of the horizon.
    for (int t = 0; t < T; ++t) {
        h.cum_paused.push_back(model.continuous(idx("dc_cum_sb", t)));
        h.cum_resumed.push_back(model.continuous(idx("dc_cum_re", t)));
        LinExpr sb = LinExpr(h.cum_paused[t]) - h.paused[t];
        LinExpr re = LinExpr(h.cum_resumed[t]) - h.resumed[t];
        if (t > 0) {
            sb -= h.cum_paused[t - 1];
            re -= h.cum_resumed[t - 1];
        }
        model.add_constraint(idx("dc_cum_sb_def", t), sb, Sense::eq, 0.0, "qos");
        model.add_constraint(idx("dc_cum_re_def", t), re, Sense::eq, 0.0, "qos");
        model.add_constraint(idx("dc_resume_after_pause", t), LinExpr(h.cum_resumed[t]) - h.cum_paused[t],
                             Sense::le, 0.0, "qos");
    }
    model.add_constraint("dc_resume_all", LinExpr(h.cum_resumed[T - 1]) - h.cum_paused[T - 1], Sense::eq, 0.0,
                         "qos");

    h.pair_set = admissible_delay_pairs(grid, profiles.mean_job_duration, wkl, spec.max_delay);
    const double M = spec.big_m;
    if (M < rating * T)
        throw CaseError(CaseError::Kind::validation,
                        "data_centre.big_m: " + csv::format_number(M) + " is below rating * period_count = " +
                            csv::format_number(rating * T) + " for this window");
    for (const auto& pair : h.pair_set.pairs) {
        const std::string tag = std::to_string(pair.pause) + "_" + std::to_string(pair.later);
        LinExpr gap = LinExpr(h.cum_resumed[pair.later]) - h.cum_paused[pair.pause];
        if (pair.forbidden) {
            // Indicator fixed to 0: everything paused up to `pause` is
            // resumed by `later`.
            model.add_constraint("dc_qos_cap_" + tag, gap, Sense::ge, 0.0, "qos");
            continue;
        }
        Var delta = model.binary("dc_delta_" + tag);
        model.add_constraint("dc_bigm_up_" + tag, gap + M * LinExpr(delta), Sense::le, M, "qos");
        model.add_constraint("dc_bigm_lo_" + tag, gap + M * LinExpr(delta), Sense::ge, 0.0, "qos");
        h.delay_flags.push_back({pair, delta});
    }
    return h;
}

double DelayMatrix::max_entry() const {
    return data_.empty() ? 0.0 : *std::max_element(data_.begin(), data_.end());
}

double DelayMatrix::row_max(int pause) const {
    double m = 0.0;
    for (int j = 0; j < n_; ++j) m = std::max(m, at(pause, j));
    return m;
}

void DelayMatrix::save_csv(const std::filesystem::path& path) const {
    std::vector<std::string> header{"pause_period"};
    for (int j = 0; j < n_; ++j) header.push_back(std::to_string(j));
    csv::Writer w(header);
    for (int i = 0; i < n_; ++i) {
        std::vector<double> row{double(i)};
        for (int j = 0; j < n_; ++j) row.push_back(at(i, j));
        w.row(row);
    }
    w.save(path);
}

DcSeries decode_dc(const milp::Solution& solution, const DcHandles& h) {
    if (!solution.optimal() || !solution.has_values())
        throw std::invalid_argument("decode_dc needs an optimal solution");
    const int T = static_cast<int>(h.demand.size());
    DcSeries out{{}, {}, {}, {}, DelayMatrix(T)};
    for (int t = 0; t < T; ++t) {
        out.demand.push_back(solution.value(h.demand[t]));
        out.paused.push_back(solution.value(h.paused[t]));
        out.resumed.push_back(solution.value(h.resumed[t]));
        out.heat.push_back(solution.value(h.heat_out[t]));
    }
    // At a tie (nothing outstanding) either indicator value is feasible;
    // ties decode as resumed. Rows without pausing stay empty: the work
    // still outstanding there belongs to earlier rows.
    for (const auto& f : h.delay_flags) {
        if (out.paused[f.pair.pause] <= milp::kFeasTol) continue;
        double outstanding = solution.value(h.cum_paused[f.pair.pause]) - solution.value(h.cum_resumed[f.pair.later]);
        if (solution.value(f.flag) > 0.5 && outstanding > milp::kFeasTol)
            out.delays.at(f.pair.pause, f.pair.later) = f.pair.delay;
    }
    return out;
}

}  // namespace lecdc
