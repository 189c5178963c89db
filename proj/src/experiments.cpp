#include "berngt/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "berngt/oracle.hpp"
#include "berngt/rates.hpp"
#include "berngt/rng.hpp"

namespace berngt {

namespace {

uint64_t stream_index(int T, int trial_index) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(T)) << 32) |
           static_cast<uint64_t>(static_cast<uint32_t>(trial_index));
}

} // namespace

bool ExperimentConfig::has(Algorithm a) const {
    return std::find(decoders.begin(), decoders.end(), a) != decoders.end();
}

std::vector<std::string> ExperimentConfig::validate() const {
    std::vector<std::string> errors;
    if (n < 1) errors.push_back("n must be >= 1");
    if (k < 0 || k > n) errors.push_back("k must satisfy 0 <= k <= n");
    if (!(p >= 0.0 && p <= 1.0)) errors.push_back("p must lie in [0,1]");
    if (nu.has_value() && !(*nu > 0.0)) errors.push_back("nu must be positive");
    if (trials < 1) errors.push_back("trials must be >= 1");
    if (threads < 1) errors.push_back("threads must be >= 1");
    if (decoders.empty()) errors.push_back("at least one decoder must be enabled");
    for (std::size_t i = 0; i + 1 < decoders.size(); ++i)
        for (std::size_t j = i + 1; j < decoders.size(); ++j)
            if (decoders[i] == decoders[j]) {
                errors.push_back("decoder list contains duplicates");
                i = decoders.size();
                break;
            }
    if (t_grid.empty()) errors.push_back("t_grid must be nonempty");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (t_grid[i] < 0) {
            errors.push_back("t_grid entries must be >= 0");
            break;
        }
        if (i > 0 && t_grid[i] <= t_grid[i - 1]) {
            errors.push_back("t_grid must be strictly increasing");
            break;
        }
    }
    if (has(Algorithm::sss) && n > sss_max_n)
        errors.push_back("sss decoder requires n <= " + std::to_string(sss_max_n) +
                         " (exact search budget)");
    if (!t_grid.empty()) {
        const std::size_t cells =
            static_cast<std::size_t>(n) * static_cast<std::size_t>(t_grid.back());
        if (cells > max_design_cells)
            errors.push_back("n * max(T) exceeds the design cell budget");
    }
    return errors;
}

WilsonInterval wilson95(long successes, long trials) {
    WilsonInterval w;
    if (trials <= 0) return w;
    constexpr double z = 1.959963984540054;  // 97.5% normal quantile
    const double nn = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (phat + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;
    w.lo = std::max(0.0, center - half);
    w.hi = std::min(1.0, center + half);
    return w;
}

const DecoderPointStats* CurvePoint::find(Algorithm a) const {
    for (const auto& s : stats)
        if (s.algorithm == a) return &s;
    return nullptr;
}

TrialRecord run_trial(const ExperimentConfig& config, int T, int trial_index) {
    TrialRecord rec;
    rec.T = T;
    rec.trial_index = trial_index;
    const uint64_t idx = stream_index(T, trial_index);
    rec.defect_seed = derive_seed(config.master_seed, SeedPurpose::defectives, idx);
    rec.design_seed = derive_seed(config.master_seed, SeedPurpose::design, idx);

    const DefectiveSet truth = sample_defective_set(config.n, config.k, rec.defect_seed);
    const TestDesign design =
        generate_design(config.n, T, config.p, rec.design_seed, config.max_design_cells);
    const OutcomeVector y = run_tests(design, truth);

    rec.sole_defective = sole_defective_indicator(design, truth);
    rec.decoders.reserve(config.decoders.size());
    for (Algorithm a : config.decoders) {
        DecoderTrial d;
        d.algorithm = a;
        switch (a) {
            case Algorithm::comp: {
                const DecodeResult r = comp_decode(design, y);
                d.size = r.size();
                d.success = r.estimate == truth;
                break;
            }
            case Algorithm::dd: {
                const DecodeResult r = dd_decode(design, y);
                d.size = r.size();
                d.success = r.estimate == truth;
                break;
            }
            case Algorithm::scomp: {
                const DecodeResult r = scomp_decode(design, y);
                d.size = r.size();
                d.success = r.estimate == truth;
                break;
            }
            case Algorithm::sss: {
                const SssResult r = sss_decode(design, y, config.sss_node_budget);
                d.size = r.result.size();
                d.truncated = r.status == SssStatus::truncated;
                d.not_unique = r.result.unique == Uniqueness::not_unique;
                // A tied minimum counts as an error even when the reported
                // set happens to match the truth.
                d.success = !d.truncated && !d.not_unique && r.result.estimate == truth;
                break;
            }
        }
        rec.decoders.push_back(d);
    }

    if (config.record_oracle_diagnostics) {
        EnumerationCaps caps;
        if (config.n <= caps.max_n_fixed_k) {
            rec.satisfying_size_k_count = enumerate_satisfying(design, y, config.k).d;
        }
    }
    return rec;
}

namespace {

struct Accumulator {
    long trials = 0;
    long sole = 0;
    std::vector<DecoderPointStats> stats;

    explicit Accumulator(const std::vector<Algorithm>& decoders) {
        stats.resize(decoders.size());
        for (std::size_t i = 0; i < decoders.size(); ++i) stats[i].algorithm = decoders[i];
    }

    void add(const TrialRecord& rec, int k) {
        ++trials;
        if (rec.sole_defective) ++sole;
        for (std::size_t i = 0; i < rec.decoders.size(); ++i) {
            const DecoderTrial& d = rec.decoders[i];
            DecoderPointStats& s = stats[i];
            if (d.truncated) {
                ++s.truncated;
                continue;
            }
            ++s.trials;
            if (d.success) ++s.successes;
            if (d.size > k) ++s.size_gt_k;
            if (d.size < k) ++s.size_lt_k;
            if (d.not_unique) ++s.not_unique;
        }
    }

    void merge(const Accumulator& o) {
        trials += o.trials;
        sole += o.sole;
        for (std::size_t i = 0; i < stats.size(); ++i) {
            stats[i].trials += o.stats[i].trials;
            stats[i].successes += o.stats[i].successes;
            stats[i].size_gt_k += o.stats[i].size_gt_k;
            stats[i].size_lt_k += o.stats[i].size_lt_k;
            stats[i].not_unique += o.stats[i].not_unique;
            stats[i].truncated += o.stats[i].truncated;
        }
    }
};

} // namespace

CurvePoint estimate_success(const ExperimentConfig& config, int T,
                            std::vector<TrialRecord>* records) {
    const int workers = std::max(1, std::min(config.threads, config.trials));
    if (records) records->resize(static_cast<std::size_t>(config.trials));

    std::vector<Accumulator> partial(static_cast<std::size_t>(workers),
                                     Accumulator(config.decoders));
    auto work = [&](int w) {
        Accumulator& acc = partial[static_cast<std::size_t>(w)];
        for (int i = w; i < config.trials; i += workers) {
            TrialRecord rec = run_trial(config, T, i);
            acc.add(rec, config.k);
            if (records) (*records)[static_cast<std::size_t>(i)] = std::move(rec);
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }

    // Counts are order-independent sums, so the merged point is identical
    // for every thread count.
    Accumulator total(config.decoders);
    for (const auto& acc : partial) total.merge(acc);

    CurvePoint point;
    point.T = T;
    point.trials = total.trials;
    point.sole_defective_count = total.sole;
    point.stats = std::move(total.stats);
    return point;
}

SuccessCurve sweep_tests(const ExperimentConfig& config) {
    SuccessCurve curve;
    curve.config = config;
    curve.points.reserve(config.t_grid.size());
    for (int T : config.t_grid) curve.points.push_back(estimate_success(config, T));
    return curve;
}

std::optional<ThresholdEstimate> estimate_threshold(const SuccessCurve& curve, Algorithm a,
                                                    double level) {
    const DecoderPointStats* prev = nullptr;
    int prev_T = 0;
    for (const CurvePoint& pt : curve.points) {
        const DecoderPointStats* s = pt.find(a);
        if (!s || s->trials == 0) continue;
        const double r = s->rate();
        if (r >= level) {
            ThresholdEstimate est;
            if (!prev) {
                est.T_cross = pt.T;
                est.T_lo = est.T_hi = pt.T;
                est.rate_lo = est.rate_hi = r;
                return est;
            }
            const double r0 = prev->rate();
            est.T_lo = prev_T;
            est.T_hi = pt.T;
            est.rate_lo = r0;
            est.rate_hi = r;
            const double span = r - r0;
            est.T_cross =
                span > 0.0 ? prev_T + (pt.T - prev_T) * (level - r0) / span : pt.T;
            return est;
        }
        prev = s;
        prev_T = pt.T;
    }
    return std::nullopt;
}

std::vector<Figure1Row> figure1_data(const std::vector<double>& theta_grid) {
    std::vector<Figure1Row> rows;
    rows.reserve(theta_grid.size());
    for (double theta : theta_grid) {
        Figure1Row row;
        row.theta = theta;
        row.counting_bound = 1.0;
        row.capacity = capacity(theta).value;
        row.dd_rate = dd_rate(theta).value;
        row.comp_rate = comp_max_rate(theta).value;
        rows.push_back(row);
    }
    return rows;
}

} // namespace berngt
