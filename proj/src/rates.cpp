#include "berngt/rates.hpp"

#include <cmath>
#include <stdexcept>

namespace berngt {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kE = 2.718281828459045;

void require(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

/// Minimizes a unimodal function by golden-section search, starting from a
/// coarse bracket and stopping at the given interval width.
template <typename F>
double golden_min(F f, double lo, double hi, double tol = 1e-9) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

/// Coarse scan over [lo, hi] to bracket the minimizer of f, then golden
/// refinement inside the bracketing neighbours.
template <typename F>
double bracketed_min(F f, double lo, double hi, int coarse_points = 200) {
    int best = 0;
    double best_val = f(lo);
    const double step = (hi - lo) / (coarse_points - 1);
    for (int i = 1; i < coarse_points; ++i) {
        const double v = f(lo + i * step);
        if (v < best_val) { best_val = v; best = i; }
    }
    const double a = lo + step * (best > 0 ? best - 1 : 0);
    const double b = lo + step * (best < coarse_points - 1 ? best + 1 : coarse_points - 1);
    return golden_min(f, a, b);
}

/// Exact C(n,k) for n <= 64; C(64,32) still fits in 64 bits and the
/// 128-bit intermediate keeps the running product exact.
uint64_t binom_u64(int n, int k) {
    if (k > n - k) k = n - k;
    unsigned __int128 r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    }
    return static_cast<uint64_t>(r);
}

/// Shared max-min threshold solver for t_star / t_sss: second_term_bits is
/// the information requirement (log2 C(n,k) or k log2(n/k)).
RateBound threshold_maxmin(int n, int k, double second_term_bits, RateKind kind) {
    const double klnk = k > 1 ? k * std::log(static_cast<double>(k)) : 0.0;
    auto objective = [&](double nu) {
        const double first = klnk > 0.0 ? klnk / (nu * std::exp(-nu))
                                        : 0.0;
        const double second = second_term_bits / binary_entropy(std::exp(-nu));
        return first > second ? first : second;
    };
    const double nu = bracketed_min(objective, 1e-3, 10.0);
    RateBound out;
    out.kind = kind;
    out.value = objective(nu);
    out.context = ProblemScale{n, k, ProblemScale::theta_of(n, k)};
    out.optimal_nu = nu;
    return out;
}

} // namespace

double ProblemScale::theta_of(int n, int k) {
    if (n <= 1 || k < 1) return 0.0;
    return std::log(static_cast<double>(k)) / std::log(static_cast<double>(n));
}

double binary_entropy(double x) {
    require(x >= 0.0 && x <= 1.0, "binary_entropy: x outside [0,1]");
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double log_binom(int n, int k) {
    require(n >= 0 && k >= 0 && k <= n, "log_binom: need 0 <= k <= n");
    if (k == 0 || k == n) return 0.0;
    if (n <= 64) {
        return std::log2(static_cast<long double>(binom_u64(n, k)));
    }
    const double ln = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    return ln / kLn2;
}

double rate(int n, int k, int T) {
    require(T >= 1, "rate: T must be >= 1");
    return log_binom(n, k) / T;
}

double nu_to_p(double nu, int k) {
    require(nu > 0.0, "nu_to_p: nu must be positive");
    require(k >= 1, "nu_to_p: k must be >= 1");
    return -std::expm1(-nu / k);
}

double p_to_nu(double p, int k) {
    require(p > 0.0 && p < 1.0, "p_to_nu: p must be in (0,1)");
    require(k >= 1, "p_to_nu: k must be >= 1");
    return -static_cast<double>(k) * std::log1p(-p);
}

double theta_star() {
    return 1.0 / (1.0 + binary_entropy(std::exp(-1.0)) * kE * kLn2);
}

RateBound capacity(double theta) {
    require(theta >= 0.0 && theta < 1.0, "capacity: theta outside [0,1)");
    RateBound out;
    out.kind = RateKind::capacity;
    out.context = ProblemScale{std::nullopt, std::nullopt, theta};

    if (theta == 0.0) {
        // Bounded k: achievability at rate 1 plus the counting bound settle
        // this case without the (1-theta)/theta term.
        out.value = 1.0;
        out.optimal_nu = kLn2;
        out.regime = CapacityRegime::bounded_k;
        return out;
    }
    if (theta <= 1.0 / 3.0) {
        out.value = 1.0;
        out.optimal_nu = kLn2;
        out.regime = CapacityRegime::nu_ln2;
        return out;
    }
    const double ts = theta_star();
    const double ratio = (1.0 - theta) / theta;
    if (theta >= ts) {
        out.value = ratio / (kE * kLn2);
        out.optimal_nu = 1.0;
        out.regime = CapacityRegime::nu_one;
        return out;
    }
    // Crossover regime: the optimum sits where the increasing first term
    // meets the decreasing entropy term, somewhere in (ln 2, 1).
    auto neg_min = [&](double nu) {
        const double t1 = (nu * std::exp(-nu) / kLn2) * ratio;
        const double t2 = binary_entropy(std::exp(-nu));
        return -(t1 < t2 ? t1 : t2);
    };
    const double nu = golden_min(neg_min, kLn2, 1.0);
    out.value = -neg_min(nu);
    out.optimal_nu = nu;
    out.regime = CapacityRegime::crossover;
    return out;
}

RateBound t_star(int n, int k) {
    require(k >= 1 && k < n, "t_star: need 1 <= k < n");
    return threshold_maxmin(n, k, log_binom(n, k), RateKind::t_star);
}

RateBound t_sss(int n, int k) {
    require(k >= 2 && k < n, "t_sss: need 2 <= k < n");
    const double bits = k * std::log2(static_cast<double>(n) / k);
    return threshold_maxmin(n, k, bits, RateKind::t_sss);
}

RateBound t_typ(int n, int k, double p) {
    require(k >= 1 && k <= n, "t_typ: need 1 <= k <= n");
    require(p > 0.0 && p < 1.0, "t_typ: p must be in (0,1)");
    const double neg = std::exp(k * std::log1p(-p));
    if (neg <= 0.0 || neg >= 1.0)
        throw std::domain_error("t_typ: (1-p)^k degenerate, entropy denominator is 0");
    RateBound out;
    out.kind = RateKind::t_typ;
    out.value = log_binom(n, k) / binary_entropy(neg);
    out.context = ProblemScale{n, k, ProblemScale::theta_of(n, k)};
    return out;
}

RateBound t_comp(int n, int k) {
    require(n >= 2 && k >= 1, "t_comp: need n >= 2, k >= 1");
    RateBound out;
    out.kind = RateKind::t_comp;
    out.value = kE * k * std::log(static_cast<double>(n));
    out.context = ProblemScale{n, k, ProblemScale::theta_of(n, k)};
    out.optimal_nu = 1.0;
    return out;
}

RateBound comp_max_rate(double theta) {
    require(theta >= 0.0 && theta < 1.0, "comp_max_rate: theta outside [0,1)");
    RateBound out;
    out.kind = RateKind::comp_rate;
    out.value = (1.0 - theta) / (kE * kLn2);
    out.context = ProblemScale{std::nullopt, std::nullopt, theta};
    out.optimal_nu = 1.0;
    return out;
}

RateBound dd_rate(double theta) {
    require(theta >= 0.0 && theta < 1.0, "dd_rate: theta outside [0,1)");
    RateBound out;
    out.kind = RateKind::dd_rate;
    const double ratio = theta > 0.0 ? (1.0 - theta) / theta : 2.0;
    out.value = (ratio < 1.0 ? ratio : 1.0) / (kE * kLn2);
    out.context = ProblemScale{std::nullopt, std::nullopt, theta};
    return out;
}

std::string to_string(RateKind kind) {
    switch (kind) {
        case RateKind::capacity: return "capacity";
        case RateKind::counting_bound: return "counting_bound";
        case RateKind::comp_rate: return "comp_rate";
        case RateKind::dd_rate: return "dd_rate";
        case RateKind::t_star: return "t_star";
        case RateKind::t_typ: return "t_typ";
        case RateKind::t_comp: return "t_comp";
        case RateKind::t_sss: return "t_sss";
    }
    return "unknown";
}

} // namespace berngt
