#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "berngt/rates.hpp"

using namespace berngt;

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kE = 2.718281828459045;

// Exact C(n,k) in 128-bit integer arithmetic; the independent oracle for
// log_binom wherever the product fits (plenty for the cases below).
long double log2_binom_bigint(int n, int k) {
    if (k > n - k) k = n - k;
    unsigned __int128 r = 1;
    for (int i = 1; i <= k; ++i)
        r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    const auto hi = static_cast<uint64_t>(r >> 64);
    const auto lo = static_cast<uint64_t>(r);
    const long double v = std::ldexp(static_cast<long double>(hi), 64) + static_cast<long double>(lo);
    return std::log2(v);
}

// Plain dense grid over nu, the validation oracle for the max-min solvers.
double capacity_grid_oracle(double theta, double step) {
    const double c = (1.0 - theta) / theta;
    double best = -1.0;
    for (double nu = 1e-3; nu <= 10.0; nu += step) {
        const double t1 = (nu * std::exp(-nu) / kLn2) * c;
        const double t2 = binary_entropy(std::exp(-nu));
        best = std::max(best, std::min(t1, t2));
    }
    return best;
}

double t_star_grid_oracle(int n, int k, double step) {
    const double a = k > 1 ? k * std::log(static_cast<double>(k)) : 0.0;
    const double L = log_binom(n, k);
    double best = 1e300;
    for (double nu = 1e-3; nu <= 10.0; nu += step) {
        const double f1 = a / (nu * std::exp(-nu));
        const double f2 = L / binary_entropy(std::exp(-nu));
        best = std::min(best, std::max(f1, f2));
    }
    return best;
}

} // namespace

TEST_SUITE_BEGIN("rates");

TEST_CASE("binary entropy endpoints, symmetry, known values") {
    CHECK(binary_entropy(0.5) == 1.0);
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    // h(e^-1), high-precision value 0.94902994464016949...
    CHECK(binary_entropy(std::exp(-1.0)) == doctest::Approx(0.9490299446401695).epsilon(1e-12));
    for (double x : {0.017, 0.2, 0.31, 0.44, 0.5, 0.77, 0.93}) {
        CHECK(binary_entropy(x) == doctest::Approx(binary_entropy(1.0 - x)).epsilon(1e-14));
        CHECK(binary_entropy(x) <= 1.0);
    }
    CHECK_THROWS_AS(binary_entropy(-0.01), std::domain_error);
    CHECK_THROWS_AS(binary_entropy(1.01), std::domain_error);
}

TEST_CASE("log_binom exact values and big-integer oracle") {
    CHECK(log_binom(4, 2) == doctest::Approx(std::log2(6.0)).epsilon(1e-15));
    CHECK(log_binom(10, 0) == 0.0);
    CHECK(log_binom(10, 10) == 0.0);
    // frozen from the exact integer C(500,10) = 245810588801891098700
    CHECK(log_binom(500, 10) == doctest::Approx(67.73610896188313).epsilon(1e-9));
    CHECK(log_binom(500, 10) ==
          doctest::Approx(static_cast<double>(log2_binom_bigint(500, 10))).epsilon(1e-9));
    CHECK(log_binom(200, 20) ==
          doctest::Approx(static_cast<double>(log2_binom_bigint(200, 20))).epsilon(1e-9));
    CHECK_THROWS_AS(log_binom(4, 5), std::domain_error);
    CHECK_THROWS_AS(log_binom(-1, 0), std::domain_error);
}

TEST_CASE("log_binom integer and lgamma paths agree on the overlap") {
    for (int n = 2; n <= 64; n += 3) {
        for (int k = 1; k < n; k += std::max(1, n / 7)) {
            const double exact = static_cast<double>(log2_binom_bigint(n, k));
            const double lg = (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                               std::lgamma(n - k + 1.0)) / kLn2;
            CHECK(log_binom(n, k) == doctest::Approx(exact).epsilon(1e-12));
            CHECK(lg == doctest::Approx(exact).epsilon(1e-9));
        }
    }
}

TEST_CASE("nu/p conversions and round trips") {
    CHECK(nu_to_p(kLn2, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(nu_to_p(1.0, 100) == doctest::Approx(0.009950166250831946).epsilon(1e-12));
    for (int k : {1, 7, 100}) {
        // nu = ln 2 balances the test outcomes: (1-p)^k = 1/2
        const double p = nu_to_p(kLn2, k);
        CHECK(std::pow(1.0 - p, k) == doctest::Approx(0.5).epsilon(1e-12));
    }
    for (double nu : {0.01, 0.3, 1.0, 3.0, 10.0}) {
        for (int k : {1, 10, 1000}) {
            const double p = nu_to_p(nu, k);
            CHECK(p_to_nu(p, k) == doctest::Approx(nu).epsilon(1e-12));
            CHECK(std::exp(k * std::log1p(-p)) == doctest::Approx(std::exp(-nu)).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(nu_to_p(0.0, 10), std::domain_error);
    CHECK_THROWS_AS(p_to_nu(1.0, 10), std::domain_error);
}

TEST_CASE("theta_star value and crossover property") {
    const double ts = theta_star();
    CHECK(ts == doctest::Approx(0.35866292602596183).epsilon(1e-12));
    // at theta*, the two capacity terms evaluated at nu = 1 coincide
    const double c = (1.0 - ts) / ts;
    const double t1 = (std::exp(-1.0) / kLn2) * c;
    const double t2 = binary_entropy(std::exp(-1.0));
    CHECK(t1 == doctest::Approx(t2).epsilon(1e-12));
    // the two closed-form regimes agree at theta* to 1e-9
    CHECK(capacity(ts).value == doctest::Approx(t2).epsilon(1e-9));
}

TEST_CASE("capacity regimes") {
    SUBCASE("theta <= 1/3 gives C = 1 at nu = ln 2") {
        for (double theta : {0.05, 0.15, 0.25, 1.0 / 3.0}) {
            const RateBound c = capacity(theta);
            CHECK(c.value == 1.0);
            CHECK(*c.optimal_nu == doctest::Approx(kLn2).epsilon(1e-12));
        }
    }
    SUBCASE("theta >= theta* gives the nu = 1 closed form") {
        const RateBound c = capacity(0.5);
        CHECK(c.value == doctest::Approx(1.0 / (kE * kLn2)).epsilon(1e-12));
        CHECK(*c.optimal_nu == 1.0);
        const RateBound c9 = capacity(0.9);
        CHECK(c9.value == doctest::Approx((1.0 / 9.0) / (kE * kLn2)).epsilon(1e-12));
    }
    SUBCASE("crossover value frozen from the dense-grid oracle") {
        const RateBound c = capacity(0.35);
        CHECK(c.value == doctest::Approx(0.9783452630166182).epsilon(1e-9));
        CHECK(*c.optimal_nu == doctest::Approx(0.8828891773767806).epsilon(1e-6));
        // strictly below both single-regime formulas: neither applies here
        CHECK(c.value < 1.0);
        CHECK(c.value < (1.0 / (kE * kLn2)) * (1.0 - 0.35) / 0.35);
    }
    SUBCASE("theta = 0 resolves to the counting bound with a regime tag") {
        const RateBound c = capacity(0.0);
        CHECK(c.value == 1.0);
        CHECK(c.regime == CapacityRegime::bounded_k);
    }
    CHECK_THROWS_AS(capacity(1.0), std::domain_error);
    CHECK_THROWS_AS(capacity(-0.1), std::domain_error);
}

TEST_CASE("capacity equals a dense nu-grid oracle") {
    // unit-scale oracle: 1e-4 step keeps this fast; the acceptance suite
    // runs the full 1e-6 grid
    for (double theta : {0.05, 0.2, 1.0 / 3.0, 0.34, 0.35, 0.358, 0.37, 0.5, 0.75, 0.95}) {
        CHECK(capacity(theta).value ==
              doctest::Approx(capacity_grid_oracle(theta, 1e-4)).epsilon(5e-7));
    }
}

TEST_CASE("capacity is non-increasing and its nu moves monotonically ln2 -> 1") {
    double prev_value = 1.0 + 1e-12;
    double prev_nu = kLn2 - 1e-12;
    for (int i = 1; i < 1000; ++i) {
        const double theta = i / 1000.0;
        const RateBound c = capacity(theta);
        CHECK(c.value <= prev_value + 1e-12);
        CHECK(*c.optimal_nu >= prev_nu - 1e-4);
        CHECK(*c.optimal_nu <= 1.0 + 1e-12);
        if (theta <= 1.0 / 3.0) CHECK(c.value == 1.0);
        if (theta >= theta_star())
            CHECK(c.value ==
                  doctest::Approx((1.0 / (kE * kLn2)) * (1.0 - theta) / theta).epsilon(1e-9));
        prev_value = c.value;
        prev_nu = *c.optimal_nu;
    }
}

TEST_CASE("t_star matches the grid oracle and the regime anchors") {
    SUBCASE("first term dominates at theta = 1/2") {
        const RateBound ts = t_star(1000000, 1000);
        CHECK(ts.value == doctest::Approx(18777.225650299186).epsilon(1e-9));
        CHECK(ts.value == doctest::Approx(kE * 1000 * std::log(1000.0)).epsilon(1e-12));
        CHECK(*ts.optimal_nu == doctest::Approx(1.0).epsilon(1e-7));
    }
    SUBCASE("k = 1 reduces to log2 n at nu = ln 2") {
        const RateBound ts = t_star(1000000, 1);
        CHECK(ts.value == doctest::Approx(std::log2(1e6)).epsilon(1e-12));
        CHECK(*ts.optimal_nu == doctest::Approx(kLn2).epsilon(1e-7));
    }
    SUBCASE("second term dominates near theta = 1/3") {
        const RateBound ts = t_star(10000, 21);
        CHECK(ts.value == doctest::Approx(log_binom(10000, 21)).epsilon(1e-12));
        CHECK(*ts.optimal_nu == doctest::Approx(kLn2).epsilon(1e-7));
    }
    SUBCASE("grid oracle agreement at mixed scales") {
        for (auto [n, k] : std::vector<std::pair<int, int>>{
                 {100, 5}, {1000, 12}, {1000, 40}, {10000, 35}, {10000, 300}}) {
            const double oracle = t_star_grid_oracle(n, k, 1e-5);
            CHECK(t_star(n, k).value ==
                  doctest::Approx(oracle).epsilon(1e-7));  // relative: values span decades
        }
    }
    CHECK_THROWS_AS(t_star(10, 0), std::domain_error);
}

TEST_CASE("t_sss uses the asymptotic term and tracks t_star at scale") {
    const RateBound a = t_sss(1000000, 1000);
    const RateBound b = t_star(1000000, 1000);
    CHECK(std::abs(a.value - b.value) / b.value < 0.02);
    // ratio tends to 1 as n grows with k = sqrt(n)
    double prev_ratio_err = 1e9;
    for (int e = 3; e <= 6; ++e) {
        const int n = static_cast<int>(std::pow(10.0, e));
        const int k = static_cast<int>(std::round(std::sqrt(static_cast<double>(n))));
        const double ratio = t_sss(n, k).value / t_star(n, k).value;
        const double err = std::abs(ratio - 1.0);
        CHECK(err <= prev_ratio_err + 1e-12);
        prev_ratio_err = err;
    }
    CHECK_THROWS_AS(t_sss(10, 1), std::domain_error);
}

TEST_CASE("t_typ values and counting-bound recovery") {
    // (0.8)^10 = 0.1073741824, h = 0.49194453794701548
    const RateBound tt = t_typ(100, 10, 0.2);
    CHECK(tt.value == doctest::Approx(89.3936071189181).epsilon(1e-9));
    for (auto [n, k] : std::vector<std::pair<int, int>>{{50, 3}, {100, 10}, {2000, 14}}) {
        // p = 1 - 2^(-1/k) makes tests 50:50 and recovers the counting bound
        const double p = 1.0 - std::pow(2.0, -1.0 / k);
        CHECK(t_typ(n, k, p).value == doctest::Approx(log_binom(n, k)).epsilon(1e-9));
        for (double q : {0.03, 0.1, 0.31}) {
            CHECK(t_typ(n, k, q).value >= log_binom(n, k) - 1e-9);
        }
    }
    CHECK_THROWS_AS(t_typ(100, 10, 0.0), std::domain_error);
    // (1-p)^k underflows to 0: degenerate entropy denominator
    CHECK_THROWS_AS(t_typ(100000, 100000, 0.999999), std::domain_error);
}

TEST_CASE("t_comp closed form") {
    CHECK(t_comp(10000, 100).value == doctest::Approx(2503.6300867065581).epsilon(1e-12));
    CHECK(t_comp(3, 1).value == doctest::Approx(kE * std::log(3.0)).epsilon(1e-12));
    // rate form approaches (1-theta)/(e ln 2) for large n at theta = 1/2
    const int n = 1000000, k = 1000;
    const double r = log_binom(n, k) / t_comp(n, k).value;
    CHECK(r == doctest::Approx(0.5 / (kE * kLn2)).epsilon(0.08));
    CHECK_THROWS_AS(t_comp(1, 1), std::domain_error);
}

TEST_CASE("comp and dd closed-form rates and the curve ordering") {
    CHECK(comp_max_rate(0.0).value == doctest::Approx(1.0 / (kE * kLn2)).epsilon(1e-12));
    CHECK(dd_rate(0.5).value == doctest::Approx(capacity(0.5).value).epsilon(1e-12));
    for (int i = 0; i < 1000; ++i) {
        const double theta = i / 1000.0;
        const double comp = comp_max_rate(theta).value;
        const double dd = dd_rate(theta).value;
        const double cap = capacity(theta).value;
        CHECK(comp <= dd + 1e-12);
        CHECK(dd <= cap + 1e-12);
        CHECK(cap <= 1.0);
    }
}

TEST_CASE("rate composes log_binom") {
    CHECK(rate(4, 2, 3) == doctest::Approx(std::log2(6.0) / 3.0).epsilon(1e-15));
    const int T = static_cast<int>(std::ceil(log_binom(1000, 30)));
    CHECK(rate(1000, 30, T) <= 1.0);
    // theta = 1/2 instance near the COMP threshold
    const double r = rate(10000, 100, static_cast<int>(std::ceil(t_comp(10000, 100).value)));
    CHECK(r == doctest::Approx(0.5 * 0.531).epsilon(0.25));
    CHECK_THROWS_AS(rate(4, 2, 0), std::domain_error);
}

TEST_SUITE_END();
