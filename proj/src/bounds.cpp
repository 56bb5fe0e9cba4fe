#include "olla/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace olla {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

// Rational approximation of the inverse standard-normal CDF (Acklam),
// refined below with Newton steps against erfc.
double inverse_normal_cdf_estimate(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;
    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - p_low) {
        double q = p - 0.5;
        double r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

double upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace

void ExplorationParams::validate() const {
    require(beta > 0.0 && beta < 1.0, "exploration.beta must lie in (0, 1)");
    require(epsilon > 0.0, "exploration.epsilon must be > 0");
    require(epsilon < std::min(beta, 1.0 - beta),
            "exploration.epsilon must be < min(beta, 1-beta)");
    require(delta > 0.0 && delta < 1.0, "exploration.delta must lie in (0, 1)");
    require(big_l >= 0, "exploration.big_l must be >= 0");
}

double kl_bernoulli(double p, double q) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("kl_bernoulli: p outside [0, 1]");
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("kl_bernoulli: q outside [0, 1]");
    if (p == q) return 0.0;
    if (q <= 0.0 || q >= 1.0)
        throw std::domain_error("kl_bernoulli: divergence is infinite for q in {0, 1} with p != q");
    double out = 0.0;
    if (p > 0.0) out += p * std::log(p / q);
    if (p < 1.0) out += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
    return out;
}

double right_tail_bound(long n, double beta, double beta_l) {
    require(n >= 1, "right_tail_bound: n must be >= 1");
    require(beta_l > 0.0 && beta_l < 1.0, "right_tail_bound: beta_l must lie in (0, 1)");
    require(beta > beta_l, "right_tail_bound: requires beta > beta_l");
    return std::exp(-static_cast<double>(n) * kl_bernoulli(beta, beta_l));
}

double left_tail_bound(long n, double beta, double beta_l) {
    require(n >= 1, "left_tail_bound: n must be >= 1");
    require(beta_l > 0.0 && beta_l < 1.0, "left_tail_bound: beta_l must lie in (0, 1)");
    require(beta < beta_l, "left_tail_bound: requires beta < beta_l");
    return std::exp(-static_cast<double>(n) * kl_bernoulli(beta, beta_l));
}

double per_step_failure_budget(const ExplorationParams& params) {
    params.validate();
    if (params.big_l == 0) return params.delta;
    return params.delta / std::log2(2.0 * params.big_l + 1.0);
}

long required_samples(const ExplorationParams& params) {
    params.validate();
    double delta1 = per_step_failure_budget(params);
    double numerator = std::log(1.0 / delta1);
    double below = kl_bernoulli(params.beta, params.beta - params.epsilon);
    double above = kl_bernoulli(params.beta, params.beta + params.epsilon);
    double n = std::max(numerator / below, numerator / above);
    return static_cast<long>(std::ceil(n));
}

int max_distinct_arms(const ExplorationParams& params) {
    params.validate();
    if (params.big_l == 0) return 0;
    return static_cast<int>(std::ceil(std::log2(2.0 * params.big_l + 1.0)));
}

ConfidenceInterval wald_interval(double beta_hat, long n, double delta1) {
    require(n >= 1, "wald_interval: n must be >= 1");
    require(beta_hat >= 0.0 && beta_hat <= 1.0, "wald_interval: beta_hat outside [0, 1]");
    require(delta1 > 0.0 && delta1 < 0.5, "wald_interval: delta1 must lie in (0, 0.5)");
    double z = normal_upper_quantile(delta1);
    double half = z * std::sqrt(beta_hat * (1.0 - beta_hat) / static_cast<double>(n));
    ConfidenceInterval ci;
    ci.lower = std::max(0.0, beta_hat - half);
    ci.upper = std::min(1.0, beta_hat + half);
    ci.level = 1.0 - delta1;
    return ci;
}

double normal_upper_quantile(double tail) {
    require(tail > 0.0 && tail < 1.0, "normal_upper_quantile: tail must lie in (0, 1)");
    // upper quantile at tail == negated lower quantile at tail
    double z = -inverse_normal_cdf_estimate(tail);
    // Newton on f(z) = upper_tail(z) - tail, f'(z) = -pdf(z)
    for (int i = 0; i < 2; ++i) {
        double err = upper_tail(z) - tail;
        double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi);
        if (pdf <= 0.0) break;
        z += err / pdf;
    }
    return z;
}

double exact_binomial_tail(long n, double p, long k, TailSide side) {
    require(n >= 1, "exact_binomial_tail: n must be >= 1");
    require(k >= 0 && k <= n, "exact_binomial_tail: k outside [0, n]");
    require(p >= 0.0 && p <= 1.0, "exact_binomial_tail: p outside [0, 1]");
    if (p == 0.0) return side == TailSide::right ? (k == 0 ? 1.0 : 0.0) : 1.0;
    if (p == 1.0) return side == TailSide::right ? 1.0 : (k == n ? 1.0 : 0.0);

    long lo = side == TailSide::right ? k : 0;
    long hi = side == TailSide::right ? n : k;
    double log_p = std::log(p);
    double log_q = std::log1p(-p);
    double sum = 0.0;
    for (long i = lo; i <= hi; ++i) {
        double log_pmf = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) -
                         std::lgamma(n - i + 1.0) + i * log_p + (n - i) * log_q;
        sum += std::exp(log_pmf);
    }
    return std::min(1.0, sum);
}

}  // namespace olla
