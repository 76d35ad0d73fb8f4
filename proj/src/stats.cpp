#include "sparseclass/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sparseclass {

double probit(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("probit: p must lie strictly in (0, 1)");
    }

    // Coefficients from Acklam's algorithm.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    static constexpr double p_low = 0.02425;

    double q, r, x;
    if (p < p_low) {
        q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        q = p - 0.5;
        r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    return x;
}

double z_for_confidence(double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("confidence level must lie strictly in (0, 1)");
    }
    return probit(0.5 * (1.0 + level));
}

ConfidenceInterval wilson_interval(std::uint64_t successes, std::uint64_t n, double confidence) {
    if (n == 0) throw std::invalid_argument("wilson_interval: n must be positive");
    if (successes > n) throw std::invalid_argument("wilson_interval: successes > n");
    const double z = z_for_confidence(confidence);
    const double nn = static_cast<double>(n);
    const double phat = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (phat + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;
    ConfidenceInterval ci;
    ci.low = successes == 0 ? 0.0 : std::max(0.0, center - half);
    ci.high = successes == n ? 1.0 : std::min(1.0, center + half);
    return ci;
}

double log_factorial(std::uint64_t k) {
    return std::lgamma(static_cast<double>(k) + 1.0);
}

double log_choose(std::uint64_t n, std::uint64_t k) {
    if (k > n) return -std::numeric_limits<double>::infinity();
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double log_binomial_pmf(std::uint64_t k, std::uint64_t n, double p) {
    if (k > n) return -std::numeric_limits<double>::infinity();
    if (p <= 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    if (p >= 1.0) return k == n ? 0.0 : -std::numeric_limits<double>::infinity();
    const double kk = static_cast<double>(k);
    const double nk = static_cast<double>(n - k);
    return log_choose(n, k) + kk * std::log(p) + nk * std::log1p(-p);
}

double log_add_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

double chi_square_statistic(const std::vector<double>& observed, const std::vector<double>& expected) {
    if (observed.size() != expected.size()) {
        throw std::invalid_argument("chi_square_statistic: size mismatch");
    }
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (!(expected[i] > 0.0)) {
            throw std::invalid_argument("chi_square_statistic: expected counts must be positive");
        }
        const double d = observed[i] - expected[i];
        stat += d * d / expected[i];
    }
    return stat;
}

}  // namespace sparseclass
