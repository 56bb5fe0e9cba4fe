#pragma once

#include <stdexcept>

namespace olla {

// Parameters of the target-success exploration: beta is the desired ACK
// probability (1 - target BLER), epsilon the half-width of the acceptance
// band around beta, delta the total failure budget, and big_l the offset
// half-range (candidate offsets run from -big_l to +big_l).
struct ExplorationParams {
    double beta = 0.9;
    double epsilon = 0.05;
    double delta = 0.05;
    int big_l = 3;

    int num_arms() const { return 2 * big_l + 1; }

    // Throws std::invalid_argument naming the violated constraint.
    void validate() const;
};

struct ConfidenceInterval {
    double lower = 0.0;
    double upper = 1.0;
    double level = 0.0;  // coverage, 1 - delta1
};

// KL divergence between Bernoulli(p) and Bernoulli(q), with the 0*ln(0)=0
// convention. Throws std::domain_error when q is 0 or 1 with p != q.
double kl_bernoulli(double p, double q);

// Chernoff bound on P(S/n >= beta) for S ~ Binomial(n, beta_l), valid for
// beta > beta_l. Requires beta > beta_l, 0 < beta_l < 1.
double right_tail_bound(long n, double beta, double beta_l);

// Chernoff bound on P(S/n <= beta) for S ~ Binomial(n, beta_l), valid for
// beta < beta_l.
double left_tail_bound(long n, double beta, double beta_l);

// Failure probability allotted to each elimination step so the whole
// search fails with probability at most delta: delta / log2(2L+1).
// Convention: big_l == 0 (single arm, nothing to eliminate) returns delta.
double per_step_failure_budget(const ExplorationParams& params);

// Per-arm sample count that keeps every elimination step inside its
// failure budget: ceil of the larger of ln(1/delta1)/kl(beta, beta-eps)
// and ln(1/delta1)/kl(beta, beta+eps).
long required_samples(const ExplorationParams& params);

// Worst-case number of distinct arms a halving search can visit,
// ceil(log2(2L+1)).
int max_distinct_arms(const ExplorationParams& params);

// Wald normal-approximation interval beta_hat +/- z*sqrt(beta_hat(1-beta_hat)/n)
// clamped to [0,1], where z is the standard-normal upper quantile at tail
// mass delta1. Degenerates to a point at beta_hat in {0,1}.
ConfidenceInterval wald_interval(double beta_hat, long n, double delta1);

// z such that P(StandardNormal > z) == tail. Accurate to ~1e-9 absolute
// over tail in [1e-9, 1-1e-9].
double normal_upper_quantile(double tail);

enum class TailSide { right, left };

// Exact binomial tail P(S >= k) (right) or P(S <= k) (left) for
// S ~ Binomial(n, p), summed in log space. Test oracle for the Chernoff
// bounds above.
double exact_binomial_tail(long n, double p, long k, TailSide side);

}  // namespace olla
