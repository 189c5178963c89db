#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "berngt/decoders.hpp"
#include "berngt/design.hpp"

namespace berngt {

/// One sweep's worth of settings. All randomness derives from master_seed,
/// so a config replays bit-for-bit regardless of thread count.
struct ExperimentConfig {
    int n = 0;
    int k = 0;
    double p = 0.0;                 // resolved Bernoulli parameter
    std::optional<double> nu;       // if set, p was derived as 1 - e^(-nu/k)
    std::vector<Algorithm> decoders;
    std::vector<int> t_grid;
    int trials = 1;
    uint64_t master_seed = 0;
    int threads = 1;
    double delta = 0.5;             // sweep half-width as a fraction of the reference threshold
    uint64_t sss_node_budget = kDefaultSssNodeBudget;
    int sss_max_n = 30;
    std::size_t max_design_cells = kDefaultMaxDesignCells;
    bool record_oracle_diagnostics = false;

    bool has(Algorithm a) const;
    /// Empty when the config is usable; otherwise every problem found.
    std::vector<std::string> validate() const;
};

struct DecoderTrial {
    Algorithm algorithm{};
    int size = 0;
    bool success = false;
    bool not_unique = false;  // sss only
    bool truncated = false;   // sss only
};

struct TrialRecord {
    int T = 0;
    int trial_index = 0;
    uint64_t design_seed = 0;
    uint64_t defect_seed = 0;
    bool sole_defective = false;
    std::vector<DecoderTrial> decoders;                  // config order
    std::optional<uint64_t> satisfying_size_k_count;     // oracle-scale diagnostics only
};

struct WilsonInterval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Wilson 95% score interval; behaves sensibly at 0 and 1 where the
/// threshold experiments live.
WilsonInterval wilson95(long successes, long trials);

struct DecoderPointStats {
    Algorithm algorithm{};
    long trials = 0;      // trials counted toward the estimate (truncated excluded)
    long successes = 0;
    long size_gt_k = 0;
    long size_lt_k = 0;
    long not_unique = 0;
    long truncated = 0;

    double rate() const { return trials > 0 ? static_cast<double>(successes) / trials : 0.0; }
    WilsonInterval wilson() const { return wilson95(successes, trials); }
};

struct CurvePoint {
    int T = 0;
    long trials = 0;
    long sole_defective_count = 0;
    std::vector<DecoderPointStats> stats;  // config order

    const DecoderPointStats* find(Algorithm a) const;
};

struct SuccessCurve {
    ExperimentConfig config;
    std::vector<CurvePoint> points;
};

/// One seeded trial: draw a defective set and a design, run the enabled
/// decoders, score exact recovery. Deterministic in
/// (master_seed, T, trial_index).
TrialRecord run_trial(const ExperimentConfig& config, int T, int trial_index);

/// Aggregates `config.trials` trials at a fixed T, fanned out over
/// config.threads. If `records` is non-null it receives every TrialRecord
/// in trial order.
CurvePoint estimate_success(const ExperimentConfig& config, int T,
                            std::vector<TrialRecord>* records = nullptr);

SuccessCurve sweep_tests(const ExperimentConfig& config);

struct ThresholdEstimate {
    double T_cross = 0.0;
    int T_lo = 0;       // bracketing grid points
    int T_hi = 0;
    double rate_lo = 0.0;
    double rate_hi = 0.0;
};

/// First upward crossing of `level`, linearly interpolated; nullopt when
/// the curve never reaches it.
std::optional<ThresholdEstimate> estimate_threshold(const SuccessCurve& curve, Algorithm a,
                                                    double level);

struct Figure1Row {
    double theta = 0.0;
    double counting_bound = 1.0;
    double capacity = 0.0;
    double dd_rate = 0.0;
    double comp_rate = 0.0;
};

/// The four rate curves over a theta grid: counting bound, capacity, DD,
/// and COMP maximal rate.
std::vector<Figure1Row> figure1_data(const std::vector<double>& theta_grid);

} // namespace berngt
