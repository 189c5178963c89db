#include <doctest.h>

#include <cmath>

#include "berngt/exact.hpp"
#include "berngt/experiments.hpp"
#include "berngt/rates.hpp"

using namespace berngt;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.n = 60;
    c.k = 3;
    c.p = nu_to_p(1.0, 3);
    c.nu = 1.0;
    c.decoders = {Algorithm::comp, Algorithm::dd, Algorithm::scomp};
    c.t_grid = {20, 40, 60};
    c.trials = 400;
    c.master_seed = 99;
    return c;
}

} // namespace

TEST_SUITE_BEGIN("experiments");

TEST_CASE("config validation reports every problem at once") {
    ExperimentConfig c;
    c.n = 0;
    c.k = -1;
    c.p = 2.0;
    c.trials = 0;
    c.t_grid = {30, 30};
    c.decoders = {Algorithm::comp, Algorithm::comp};
    const auto errors = c.validate();
    CHECK(errors.size() >= 5);

    ExperimentConfig sss_big = small_config();
    sss_big.n = 100000;
    sss_big.t_grid = {10};
    sss_big.decoders = {Algorithm::sss};
    bool found = false;
    for (const auto& e : sss_big.validate()) found = found || e.find("sss") != std::string::npos;
    CHECK(found);

    CHECK(small_config().validate().empty());
}

TEST_CASE("run_trial with T = 0 fails every decoder") {
    ExperimentConfig c = small_config();
    c.decoders = {Algorithm::comp, Algorithm::dd, Algorithm::scomp, Algorithm::sss};
    c.n = 12;
    c.k = 2;
    c.p = 0.2;
    const TrialRecord rec = run_trial(c, 0, 0);
    for (const DecoderTrial& d : rec.decoders) CHECK(!d.success);
}

TEST_CASE("run_trial with k = 0 succeeds once every item is tested") {
    ExperimentConfig c = small_config();
    c.n = 10;
    c.k = 0;
    c.p = 0.3;
    // P(some item misses all 60 tests) ~ 10 * 0.7^60 ~ 5e-9
    const TrialRecord rec = run_trial(c, 60, 1);
    for (const DecoderTrial& d : rec.decoders) {
        CHECK(d.size == 0);
        CHECK(d.success);
    }
}

TEST_CASE("trials replay byte-identically") {
    const ExperimentConfig c = small_config();
    const TrialRecord a = run_trial(c, 40, 17);
    const TrialRecord b = run_trial(c, 40, 17);
    CHECK(a.design_seed == b.design_seed);
    CHECK(a.defect_seed == b.defect_seed);
    CHECK(a.sole_defective == b.sole_defective);
    REQUIRE(a.decoders.size() == b.decoders.size());
    for (std::size_t i = 0; i < a.decoders.size(); ++i) {
        CHECK(a.decoders[i].size == b.decoders[i].size);
        CHECK(a.decoders[i].success == b.decoders[i].success);
    }
    // distinct trials use distinct streams
    const TrialRecord other = run_trial(c, 40, 18);
    CHECK(other.design_seed != a.design_seed);
    CHECK(other.defect_seed != a.defect_seed);
}

TEST_CASE("thread count never changes the estimates") {
    ExperimentConfig c = small_config();
    c.trials = 300;
    const CurvePoint single = estimate_success(c, 40);
    c.threads = 4;
    const CurvePoint pooled = estimate_success(c, 40);
    REQUIRE(single.stats.size() == pooled.stats.size());
    CHECK(single.trials == pooled.trials);
    CHECK(single.sole_defective_count == pooled.sole_defective_count);
    for (std::size_t i = 0; i < single.stats.size(); ++i) {
        CHECK(single.stats[i].successes == pooled.stats[i].successes);
        CHECK(single.stats[i].size_gt_k == pooled.stats[i].size_gt_k);
        CHECK(single.stats[i].size_lt_k == pooled.stats[i].size_lt_k);
    }
}

TEST_CASE("records come back in trial order when requested") {
    ExperimentConfig c = small_config();
    c.trials = 50;
    c.threads = 3;
    std::vector<TrialRecord> records;
    estimate_success(c, 20, &records);
    REQUIRE(records.size() == 50);
    for (int i = 0; i < 50; ++i) CHECK(records[static_cast<std::size_t>(i)].trial_index == i);
}

TEST_CASE("wilson interval reference values and edge behaviour") {
    const WilsonInterval mid = wilson95(50, 100);
    CHECK(mid.lo == doctest::Approx(0.4038).epsilon(1e-3));
    CHECK(mid.hi == doctest::Approx(0.5962).epsilon(1e-3));
    // zero successes: upper bound is z^2/(n + z^2) < 3.7/n at n >= 100
    const WilsonInterval zero = wilson95(0, 100);
    CHECK(zero.lo == 0.0);
    CHECK(zero.hi < 3.7 / 100.0);
    CHECK(zero.hi > 0.0);
    const WilsonInterval ones = wilson95(100, 100);
    CHECK(ones.hi == 1.0);
    CHECK(ones.lo > 1.0 - 3.7 / 100.0 - 1e-12);
    // intervals always contain the point estimate
    for (long s : {0L, 3L, 77L, 100L}) {
        const WilsonInterval w = wilson95(s, 100);
        const double phat = s / 100.0;
        CHECK(w.lo <= phat + 1e-12);
        CHECK(w.hi >= phat - 1e-12);
    }
}

TEST_CASE("an always-failing decoder estimates zero with a tight interval") {
    ExperimentConfig c = small_config();
    c.n = 30;
    c.k = 2;
    c.trials = 150;
    c.t_grid = {0};
    // T = 0 carries no information, so comp cannot succeed (n > k)
    const CurvePoint pt = estimate_success(c, 0);
    const DecoderPointStats* comp = pt.find(Algorithm::comp);
    REQUIRE(comp != nullptr);
    CHECK(comp->successes == 0);
    CHECK(comp->wilson().hi < 3.7 / 150.0);
}

TEST_CASE("comp estimate tracks the exact formula within 3 sigma") {
    ExperimentConfig c = small_config();
    c.n = 60;
    c.k = 3;
    c.p = nu_to_p(1.0, 3);
    c.trials = 4000;
    const int T = 40;
    const CurvePoint pt = estimate_success(c, T);
    const double exact = exact_comp_success(c.n, c.k, T, c.p);
    const double sigma = std::sqrt(exact * (1 - exact) / c.trials);
    CHECK(std::abs(pt.find(Algorithm::comp)->rate() - exact) < 3 * sigma);
    // sole-defective frequency against its own exact formula
    const double exact_sole = exact_sole_defective_success(c.k, T, c.p);
    const double sole_rate = static_cast<double>(pt.sole_defective_count) / pt.trials;
    CHECK(std::abs(sole_rate - exact_sole) <
          3 * std::sqrt(exact_sole * (1 - exact_sole) / c.trials));
}

TEST_CASE("dd success implies comp sizes agree at k") {
    ExperimentConfig c = small_config();
    c.trials = 500;
    std::vector<TrialRecord> records;
    estimate_success(c, 45, &records);
    for (const TrialRecord& rec : records) {
        const DecoderTrial& comp = rec.decoders[0];
        const DecoderTrial& dd = rec.decoders[1];
        if (dd.success && comp.size == c.k) CHECK(comp.success);
        if (dd.success) CHECK(dd.size == c.k);
    }
}

TEST_CASE("sweep produces a curve that rises with T") {
    ExperimentConfig c = small_config();
    c.trials = 800;
    c.t_grid = {10, 30, 50, 70};
    const SuccessCurve curve = sweep_tests(c);
    REQUIRE(curve.points.size() == 4);
    const double first = curve.points.front().find(Algorithm::comp)->rate();
    const double last = curve.points.back().find(Algorithm::comp)->rate();
    CHECK(last > first);
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        const double prev = curve.points[i - 1].find(Algorithm::comp)->rate();
        const double cur = curve.points[i].find(Algorithm::comp)->rate();
        CHECK(cur >= prev - 0.1);  // monotone up to Monte Carlo noise
    }
}

TEST_CASE("threshold estimation on crafted curves") {
    SuccessCurve curve;
    curve.config = small_config();
    auto add_point = [&](int T, long hits, long total) {
        CurvePoint pt;
        pt.T = T;
        pt.trials = total;
        DecoderPointStats s;
        s.algorithm = Algorithm::comp;
        s.trials = total;
        s.successes = hits;
        pt.stats.push_back(s);
        curve.points.push_back(pt);
    };
    SUBCASE("sharp step lands on the step") {
        add_point(100, 0, 1000);
        add_point(200, 0, 1000);
        add_point(300, 1000, 1000);
        const auto est = estimate_threshold(curve, Algorithm::comp, 0.5);
        REQUIRE(est.has_value());
        CHECK(est->T_lo == 200);
        CHECK(est->T_hi == 300);
        CHECK(est->T_cross == doctest::Approx(250.0));  // midpoint of the 0 -> 1 jump
    }
    SUBCASE("linear ramp interpolates exactly") {
        add_point(100, 200, 1000);
        add_point(200, 600, 1000);
        const auto est = estimate_threshold(curve, Algorithm::comp, 0.5);
        REQUIRE(est.has_value());
        CHECK(est->T_cross == doctest::Approx(175.0).epsilon(1e-12));
    }
    SUBCASE("no crossing reports absence") {
        add_point(100, 10, 1000);
        add_point(200, 20, 1000);
        CHECK(!estimate_threshold(curve, Algorithm::comp, 0.5).has_value());
    }
}

TEST_CASE("figure1 rows keep the curve ordering and anchors") {
    std::vector<double> grid;
    for (int i = 1; i <= 99; ++i) grid.push_back(i / 100.0);
    const auto rows = figure1_data(grid);
    REQUIRE(rows.size() == 99);
    for (const Figure1Row& r : rows) {
        CHECK(r.counting_bound == 1.0);
        CHECK(r.comp_rate <= r.dd_rate + 1e-12);
        CHECK(r.dd_rate <= r.capacity + 1e-12);
        CHECK(r.capacity <= 1.0);
        if (r.theta >= 0.5) CHECK(r.dd_rate == doctest::Approx(r.capacity).epsilon(1e-12));
        if (r.theta <= 1.0 / 3.0) CHECK(r.capacity == 1.0);
    }
    CHECK(rows[19].theta == doctest::Approx(0.2));
    CHECK(rows[19].dd_rate == doctest::Approx(0.530738).epsilon(1e-6));
    CHECK(rows[19].comp_rate == doctest::Approx(0.424590).epsilon(1e-6));
    CHECK(rows[49].capacity == doctest::Approx(0.531).epsilon(1e-3));
}

TEST_CASE("oracle diagnostics attach at desk scale") {
    ExperimentConfig c = small_config();
    c.n = 12;
    c.k = 2;
    c.record_oracle_diagnostics = true;
    const TrialRecord rec = run_trial(c, 25, 3);
    REQUIRE(rec.satisfying_size_k_count.has_value());
    CHECK(*rec.satisfying_size_k_count >= 1);
}

TEST_SUITE_END();
