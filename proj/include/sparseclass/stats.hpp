#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace sparseclass {

// Neumaier compensated accumulator. Cancellation between nearly equal
// magnitudes is the dominant hazard in the O(1/m)-scale statistics, so
// all such reductions go through this instead of a bare double.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct ConfidenceInterval {
    double low = 0.0;
    double high = 1.0;
};

// Inverse standard normal CDF (Acklam's rational approximation,
// |relative error| < 1.2e-9 over (0, 1)).
double probit(double p);

// Two-sided z value for a given confidence level, e.g. 0.95 -> 1.95996.
double z_for_confidence(double level);

// Wilson score interval for `successes` out of `n` Bernoulli trials.
ConfidenceInterval wilson_interval(std::uint64_t successes, std::uint64_t n, double confidence);

// log(k!) via lgamma.
double log_factorial(std::uint64_t k);

// log C(n, k); -inf when k > n.
double log_choose(std::uint64_t n, std::uint64_t k);

// log Binomial(n, p) pmf at k.
double log_binomial_pmf(std::uint64_t k, std::uint64_t n, double p);

// log(exp(a) + exp(b)) without overflow; handles -inf operands.
double log_add_exp(double a, double b);

// Chi-square test statistic against expected counts (expected > 0 required).
double chi_square_statistic(const std::vector<double>& observed, const std::vector<double>& expected);

}  // namespace sparseclass
