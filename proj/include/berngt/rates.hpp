#pragma once

#include <optional>
#include <string>

namespace berngt {

/// Problem size descriptor. n and k are one parameterization, theta the
/// other (k ~ n^theta); callers pick whichever a formula needs, the two
/// are never forced to agree.
struct ProblemScale {
    std::optional<int> n;
    std::optional<int> k;
    std::optional<double> theta;

    /// theta = ln k / ln n when both are present and meaningful.
    static double theta_of(int n, int k);
};

/// Design-density parameter nu and the Bernoulli probability it induces,
/// p = 1 - e^(-nu/k), so that (1-p)^k = e^(-nu).
struct NuParam {
    double nu = 0.0;
    double p = 0.0;
};

double nu_to_p(double nu, int k);
double p_to_nu(double p, int k);

enum class RateKind {
    capacity,
    counting_bound,
    comp_rate,
    dd_rate,
    t_star,
    t_typ,
    t_comp,
    t_sss,
};

/// Which branch of the capacity max-min produced a value.
enum class CapacityRegime {
    bounded_k,   // theta = 0, resolved separately from the formula
    nu_ln2,      // theta <= 1/3: second term at its peak, C = 1
    crossover,   // 1/3 < theta < theta*: terms equal at the optimum
    nu_one,      // theta >= theta*: first term at its peak
};

/// A named rate (bits per test) or test-count bound together with the
/// context that produced it.
struct RateBound {
    RateKind kind;
    double value = 0.0;
    ProblemScale context;
    std::optional<double> optimal_nu;
    std::optional<CapacityRegime> regime;
};

/// Binary entropy in bits, h(0) = h(1) = 0.
double binary_entropy(double x);

/// log2 of the binomial coefficient; exact 128-bit integer arithmetic for
/// n <= 64, log-gamma beyond.
double log_binom(int n, int k);

/// R = log2 C(n,k) / T, the bits of defective-set identity learned per test.
double rate(int n, int k, int T);

double theta_star();

/// Capacity of Bernoulli nonadaptive testing at sparsity theta:
/// max over nu of min{ (nu e^-nu / ln 2)(1-theta)/theta, h(e^-nu) }.
RateBound capacity(double theta);

/// Test-count threshold: min over nu of
/// max{ k ln k / (nu e^-nu), log2 C(n,k) / h(e^-nu) }.
RateBound t_star(int n, int k);

/// Typicality bound log2 C(n,k) / h((1-p)^k).
RateBound t_typ(int n, int k, double p);

/// COMP threshold e * k * ln n.
RateBound t_comp(int n, int k);

/// Same max-min as t_star but with the asymptotic k log2(n/k) in place of
/// the exact binomial term.
RateBound t_sss(int n, int k);

/// (1-theta) / (e ln 2).
RateBound comp_max_rate(double theta);

/// (1 / (e ln 2)) min{ (1-theta)/theta, 1 }.
RateBound dd_rate(double theta);

std::string to_string(RateKind kind);

} // namespace berngt
