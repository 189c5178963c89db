#include "berngt/exact.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace berngt {

namespace {

long double log_binom_ld(int n, int k) {
    return std::lgamma(static_cast<long double>(n) + 1) -
           std::lgamma(static_cast<long double>(k) + 1) -
           std::lgamma(static_cast<long double>(n - k) + 1);
}

/// P(every state advanced) for T independent steps where, with j of k
/// markers already hit, the next step hits a new one with probability
/// (k-j)s. Mathematically identical to the inclusion-exclusion sum but
/// uses only non-negative adds and multiplies.
long double sole_defective_chain(int k, int T, long double s) {
    std::vector<long double> state(static_cast<std::size_t>(k) + 1, 0.0L);
    state[0] = 1.0L;
    for (int t = 0; t < T; ++t) {
        for (int j = k - 1; j >= 0; --j) {
            const long double advance = static_cast<long double>(k - j) * s;
            state[static_cast<std::size_t>(j) + 1] += state[static_cast<std::size_t>(j)] * advance;
            state[static_cast<std::size_t>(j)] *= 1.0L - advance;
        }
    }
    return state[static_cast<std::size_t>(k)];
}

} // namespace

double exact_comp_success(int n, int k, int T, double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("exact_comp_success: p outside (0,1)");
    if (T < 0) throw std::domain_error("exact_comp_success: T must be >= 0");
    if (k < 0 || k > n) throw std::domain_error("exact_comp_success: need 0 <= k <= n");
    if (n == k) return 1.0;

    const long double ln_q = std::log1p(-static_cast<long double>(p));
    const long double ln_qk = static_cast<long double>(k) * ln_q;       // ln q^k
    const long double ln_1mqk = std::log1p(-std::exp(ln_qk));        // ln (1 - q^k)
    const long double nk = static_cast<long double>(n - k);

    // m = 0 contributes (1 - q^0)^(n-k) = 0; all other terms are positive
    // and at most 1, so summing their exponentials cannot overflow.
    long double sum = 0.0L, comp = 0.0L;
    for (int m = 1; m <= T; ++m) {
        const long double ln_pmf = log_binom_ld(T, m) + m * ln_qk + (T - m) * ln_1mqk;
        const long double ln_hit = nk * std::log1p(-std::exp(m * ln_q));
        const long double term = std::exp(ln_pmf + ln_hit);
        const long double y = term - comp;
        const long double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    if (sum < 0.0L) sum = 0.0L;
    if (sum > 1.0L) sum = 1.0L;
    return static_cast<double>(sum);
}

SoleDefectiveDetail exact_sole_defective_detail(int k, int T, double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("exact_sole_defective_success: p outside (0,1)");
    if (k < 1) throw std::domain_error("exact_sole_defective_success: k must be >= 1");
    if (T < 0) throw std::domain_error("exact_sole_defective_success: T must be >= 0");

    SoleDefectiveDetail out;
    // s = p(1-p)^(k-1): chance a given defective is the sole defective of
    // one test. ks <= (1-1/k)^(k-1) < 1, so all bases below stay positive.
    const long double s =
        static_cast<long double>(p) *
        std::exp(static_cast<long double>(k - 1) * std::log1p(-static_cast<long double>(p)));

    long double sum = 0.0L, comp = 0.0L;
    long double max_partial = 0.0L;
    for (int j = 0; j <= k; ++j) {
        const long double base_pow =
            std::exp(static_cast<long double>(T) * std::log1p(-static_cast<long double>(j) * s));
        const long double magnitude = std::exp(log_binom_ld(k, j)) * base_pow;
        const long double term = (j & 1) ? -magnitude : magnitude;
        const long double y = term - comp;
        const long double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        const long double a = sum < 0 ? -sum : sum;
        if (a > max_partial) max_partial = a;
        if (magnitude > max_partial) max_partial = magnitude;
    }

    const long double result_scale = sum < 0 ? -sum : sum;
    out.cancellation = static_cast<double>(
        max_partial / (result_scale > 1e-300L ? result_scale : 1e-300L));

    // Losing more than 1e-8 of the result to cancellation: recompute on
    // the all-positive route.
    if (!(out.cancellation < 1e8) || sum < 0.0L) {
        out.used_stable_path = true;
        sum = sole_defective_chain(k, T, s);
    }
    if (sum < 0.0L) sum = 0.0L;
    if (sum > 1.0L) sum = 1.0L;
    out.value = static_cast<double>(sum);
    return out;
}

double exact_sole_defective_success(int k, int T, double p) {
    return exact_sole_defective_detail(k, T, p).value;
}

} // namespace berngt
