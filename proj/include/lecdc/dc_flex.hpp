#pragma once

// Data Centre block: demand composition with job pausing and resumption,
// the QoS delay logic (Big-M indicator per pause/resume pair) and the
// waste-heat output.

#include <filesystem>
#include <vector>

#include "lecdc/milp.hpp"
#include "lecdc/model_core.hpp"

namespace lecdc {

/// One (pause period, later period) pair with its normalised delay
/// (later - pause) / mean_job_duration[pause].
struct DelayPair {
    int pause = 0;
    int later = 0;
    double delay = 0.0;
    bool forbidden = false;  // delay exceeds the cap, indicator forced to 0
};

struct DelayPairSet {
    /// Generated pairs, ordered by (pause, later). Rows whose duration is
    /// not positive (only allowed where workload is zero) are skipped.
    std::vector<DelayPair> pairs;
    /// Pairs are generated for later - pause <= horizon; every farther pair
    /// is forbidden.
    int horizon = 0;
    double cap = 0.0;
    Series mean_job_duration;

    /// Classifies any pair with later > pause, generated or not.
    bool allowed(int pause, int later) const;
};

/// Throws std::invalid_argument when the duration is not positive at a
/// period with positive workload, or on length mismatch.
DelayPairSet admissible_delay_pairs(const TimeGrid& grid, const Series& mean_job_duration,
                                    const Series& workload, double max_delay);

struct DelayFlag {
    DelayPair pair;
    milp::Var flag;  // 1 while jobs paused up to `pause` are still outstanding at `later`
};

struct DcHandles {
    std::vector<milp::Var> demand;        // p_ed
    std::vector<milp::Var> paused;        // p_SB
    std::vector<milp::Var> resumed;       // p_RE
    std::vector<milp::Var> pausing_flag;  // z_DtC
    std::vector<milp::Var> heat_out;      // q_DtC
    std::vector<milp::Var> cum_paused;    // empty without job pausing
    std::vector<milp::Var> cum_resumed;
    std::vector<DelayFlag> delay_flags;   // allowed pairs only
    DelayPairSet pair_set;
};

/// Adds variables and constraints of the DC block to `model`. Without job
/// pausing, paused/resumed/pausing_flag are fixed to zero and no delay
/// indicators are created.
DcHandles build_dc_block(milp::Model& model, const DataCentreSpec& spec, const ExogenousProfiles& profiles,
                         const TimeGrid& grid, const ScenarioConfig& scenario);

/// Dense T x T matrix of realised delays: entry (pause, later) holds the
/// normalised delay where the pair's indicator is 1, else 0.
class DelayMatrix {
public:
    explicit DelayMatrix(int periods = 0) : n_(periods), data_(static_cast<std::size_t>(periods) * periods, 0.0) {}

    int size() const { return n_; }
    double& at(int pause, int later) { return data_.at(static_cast<std::size_t>(pause) * n_ + later); }
    double at(int pause, int later) const { return data_.at(static_cast<std::size_t>(pause) * n_ + later); }
    double max_entry() const;
    /// Largest entry of row `pause`.
    double row_max(int pause) const;

    /// One row per pausing period, one column per later period.
    void save_csv(const std::filesystem::path& path) const;

private:
    int n_;
    std::vector<double> data_;
};

struct DcSeries {
    Series demand;
    Series paused;
    Series resumed;
    Series heat;
    DelayMatrix delays;
};

/// Throws std::invalid_argument for a solution without optimal status.
DcSeries decode_dc(const milp::Solution& solution, const DcHandles& handles);

}  // namespace lecdc
