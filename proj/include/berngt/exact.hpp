#pragma once

namespace berngt {

/// Exact COMP success probability for a Bernoulli(p) design:
/// with q = 1-p and M ~ Bin(T, q^k) the number of negative tests,
///   P(success) = E[(1 - q^M)^(n-k)]
///              = sum_m C(T,m) (q^k)^m (1-q^k)^(T-m) (1-q^m)^(n-k).
/// Every term is evaluated in log space; the sum is compensated.
double exact_comp_success(int n, int k, int T, double p);

/// Exact probability that each of k defectives is the sole defective in
/// at least one of T tests (the condition SSS needs to output size k):
///   sum_{j=0..k} (-1)^j C(k,j) (1 - j p (1-p)^(k-1))^T.
/// The alternating sum cancels catastrophically for larger k, so the
/// evaluation switches to an equivalent all-positive recurrence when the
/// detected cancellation would cost more than 1e-8 of the result.
double exact_sole_defective_success(int k, int T, double p);

struct SoleDefectiveDetail {
    double value = 0.0;
    /// max partial-sum magnitude relative to the result; large means the
    /// inclusion-exclusion route lost digits.
    double cancellation = 0.0;
    bool used_stable_path = false;
};

SoleDefectiveDetail exact_sole_defective_detail(int k, int T, double p);

} // namespace berngt
