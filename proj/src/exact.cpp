#include "sparseclass/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "sparseclass/stats.hpp"

namespace sparseclass {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

LogProb make_log_prob(double v) {
    // Rounding can push a probability-one product a hair above 1.
    if (v > 0.0 && v <= 1e-12) v = 0.0;
    return LogProb{v};
}

// Core elementary-symmetric DP on q_k = k! e_k over the given probability
// values. Each q_k is itself a probability (the chance that k draws are
// distinct and land in the processed prefix), so it stays in [0, 1] and
// the recurrence q_k += k p q_{k-1} never overflows; entries below the
// denormal floor are dominated by later contributions whenever the final
// answer is representable.
double distinct_dp(const std::vector<double>& probs, std::uint64_t N,
                   const std::vector<bool>* excluded) {
    if (N == 0) return 0.0;
    std::vector<double> q(N + 1, 0.0);
    q[0] = 1.0;
    std::uint64_t processed = 0;
    for (std::size_t j = 0; j < probs.size(); ++j) {
        if (excluded && (*excluded)[j]) continue;
        const double p = probs[j];
        if (!(p > 0.0)) continue;
        ++processed;
        const std::uint64_t hi = std::min<std::uint64_t>(N, processed);
        for (std::uint64_t k = hi; k >= 1; --k) {
            q[k] += static_cast<double>(k) * p * q[k - 1];
        }
    }
    return q[N] > 0.0 ? std::log(q[N]) : kNegInf;
}

}  // namespace

double normalization_r(std::uint64_t N, std::uint64_t n, std::uint64_t m) {
    if (N == 0 || n == 0 || m == 0) {
        throw std::invalid_argument("normalization_r: N, n, m must all be positive");
    }
    return static_cast<double>(N) * static_cast<double>(std::min(N, n)) / static_cast<double>(m);
}

LogProb prob_all_distinct_uniform(std::uint64_t m, std::uint64_t N) {
    if (m == 0) throw std::invalid_argument("prob_all_distinct_uniform: m must be positive");
    if (N > m) return LogProb{kNegInf};
    CompensatedSum sum;
    const double md = static_cast<double>(m);
    for (std::uint64_t k = 1; k < N; ++k) {
        sum.add(std::log1p(-static_cast<double>(k) / md));
    }
    return make_log_prob(sum.value());
}

LogProb prob_all_distinct(const Distribution& dist, std::uint64_t N) {
    if (N > dist.m()) return LogProb{kNegInf};
    if (N <= 1) return LogProb{0.0};
    return make_log_prob(distinct_dp(dist.probs(), N, nullptr));
}

LogProb bi_uniform_all_distinct_convolution(std::uint32_t m, double epsilon, std::uint64_t N) {
    if (m == 0 || m % 2 != 0) {
        throw std::invalid_argument("bi_uniform_all_distinct_convolution: m must be even");
    }
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("bi_uniform_all_distinct_convolution: epsilon must lie in (0, 1)");
    }
    if (N > m) return LogProb{kNegInf};
    if (N == 0) return LogProb{0.0};
    const std::uint64_t half = m / 2;
    const double log_a = std::log1p(epsilon) - std::log(static_cast<double>(m));
    const double log_b = std::log1p(-epsilon) - std::log(static_cast<double>(m));
    double acc = kNegInf;
    for (std::uint64_t k = 0; k <= N; ++k) {
        if (k > half || N - k > half) continue;
        const double term = log_choose(half, k) + log_choose(half, N - k) +
                            static_cast<double>(k) * log_a + static_cast<double>(N - k) * log_b;
        acc = log_add_exp(acc, term);
    }
    return make_log_prob(acc + log_factorial(N));
}

LogProb prob_event_A(const Distribution& dist_x, const Distribution& dist_y, std::uint64_t N) {
    const LogProb px = prob_all_distinct(dist_x, N);
    const LogProb py = prob_all_distinct(dist_y, N);
    return make_log_prob(px.value + py.value);
}

double lemma_A_rate(double epsilon, std::uint64_t N, std::uint64_t m) {
    if (m == 0) throw std::invalid_argument("lemma_A_rate: m must be positive");
    const double Nd = static_cast<double>(N);
    return -(1.0 + 0.5 * epsilon * epsilon) * Nd * Nd / static_cast<double>(m);
}

LogProb prob_event_B_given_xy(const Histogram& ax, const Histogram& ay,
                              const Distribution& z_dist, std::uint64_t n) {
    if (ax.m() != ay.m() || ax.m() != z_dist.m()) {
        throw std::invalid_argument("prob_event_B_given_xy: alphabet size mismatch");
    }
    if (n == 0) return LogProb{0.0};
    std::vector<bool> excluded(z_dist.m(), false);
    for (std::uint32_t j : ax.support()) excluded[j] = true;
    for (std::uint32_t j : ay.support()) excluded[j] = true;
    return make_log_prob(distinct_dp(z_dist.probs(), n, &excluded));
}

LogProb prob_event_B_uniform(std::uint64_t m, std::uint64_t s, std::uint64_t n) {
    if (m == 0) throw std::invalid_argument("prob_event_B_uniform: m must be positive");
    if (s > m) throw std::invalid_argument("prob_event_B_uniform: s exceeds m");
    if (n == 0) return LogProb{0.0};
    if (m - s < n) return LogProb{kNegInf};
    CompensatedSum sum;
    const double log_m = std::log(static_cast<double>(m));
    for (std::uint64_t i = 0; i < n; ++i) {
        sum.add(std::log(static_cast<double>(m - s - i)) - log_m);
    }
    return make_log_prob(sum.value());
}

CnReport prob_C_n(std::uint64_t m, std::uint64_t N, std::uint64_t n) {
    if (m == 0 || N == 0 || n == 0) {
        throw std::invalid_argument("prob_C_n: m, N, n must all be positive");
    }
    CnReport report;
    const double sqrt_m = std::sqrt(static_cast<double>(m));
    report.k = static_cast<std::uint64_t>(std::floor(4.0 * static_cast<double>(n) / sqrt_m));
    report.asymptote = -4.0 * (static_cast<double>(n) / sqrt_m) * std::log(static_cast<double>(m));
    if (report.k > N) {
        report.exact = LogProb{kNegInf};
    } else {
        report.exact = make_log_prob(
            log_binomial_pmf(report.k, N, 1.0 / static_cast<double>(m)));
    }
    return report;
}

namespace {

void chernoff_coefficients(const Distribution& pi, const Distribution& mu, const Distribution& nu,
                           double& linear, double& quadratic) {
    if (pi.m() != mu.m() || pi.m() != nu.m()) {
        throw std::invalid_argument("chernoff bound: alphabet size mismatch");
    }
    CompensatedSum lin, quad;
    for (std::uint32_t j = 0; j < pi.m(); ++j) {
        const double p = pi[j];
        const double u = mu[j];
        const double v = nu[j];
        const double dp = p - v;
        const double du = u - v;
        lin.add(0.5 * dp * dp - 0.5 * du * du);
        quad.add(p * v + u * v + 0.5 * (p * p + u * u));
    }
    linear = lin.value();
    quadratic = quad.value();
}

}  // namespace

BoundReport chernoff_lambda_bound(const Distribution& pi, const Distribution& mu,
                                  const Distribution& nu, double gamma, std::uint64_t N,
                                  std::uint64_t n) {
    if (N == 0 || n == 0) throw std::invalid_argument("chernoff bound: N and n must be positive");
    BoundReport report;
    chernoff_coefficients(pi, mu, nu, report.linear_coefficient, report.quadratic_coefficient);
    report.scale = static_cast<double>(N) * static_cast<double>(std::min(N, n));
    report.gamma = gamma;
    report.linear_term = report.scale * gamma * report.linear_coefficient;
    report.quadratic_term = report.scale * gamma * gamma * report.quadratic_coefficient;
    report.main_term = report.linear_term + report.quadratic_term;
    report.dropped_remainder_note =
        "main terms only; O(min{N^2,nN} max{N,n}/m^2) and O(1) remainders omitted";
    return report;
}

double chernoff_optimal_gamma(const Distribution& pi, const Distribution& mu,
                              const Distribution& nu) {
    double linear = 0.0, quadratic = 0.0;
    chernoff_coefficients(pi, mu, nu, linear, quadratic);
    return -linear / (2.0 * quadratic);
}

double achievability_exponent(double epsilon, double c_bar) {
    if (!(epsilon > 0.0 && epsilon <= 2.0)) {
        throw std::invalid_argument("achievability_exponent: epsilon must lie in (0, 2]");
    }
    if (!(c_bar >= 1.0)) {
        throw std::invalid_argument("achievability_exponent: c_bar must be >= 1");
    }
    const double e2 = epsilon * epsilon;
    return e2 * e2 / (160.0 * c_bar * c_bar);
}

namespace {

// Visits every composition of `total` into `m` parts, lexicographically
// from (total, 0, ..., 0) to (0, ..., 0, total).
template <typename Fn>
void for_each_composition(std::uint32_t total, std::uint32_t m, Fn&& fn) {
    std::vector<std::uint32_t> c(m, 0);
    c[0] = total;
    for (;;) {
        fn(c);
        std::int64_t i = static_cast<std::int64_t>(m) - 2;
        while (i >= 0 && c[i] == 0) --i;
        if (i < 0) break;
        std::uint32_t moved = 1;
        for (std::uint32_t j = static_cast<std::uint32_t>(i) + 1; j < m; ++j) {
            moved += c[j];
            c[j] = 0;
        }
        --c[i];
        c[i + 1] = moved;
    }
}

double log_multinomial_weight(const std::vector<std::uint32_t>& counts,
                              const std::vector<double>& log_probs,
                              const std::vector<double>& log_fact, std::uint32_t total) {
    double w = log_fact[total];
    for (std::size_t j = 0; j < counts.size(); ++j) {
        const std::uint32_t c = counts[j];
        if (c == 0) continue;
        if (log_probs[j] == kNegInf) return kNegInf;
        w += static_cast<double>(c) * log_probs[j] - log_fact[c];
    }
    return w;
}

std::vector<double> log_vector(const Distribution& dist) {
    std::vector<double> out(dist.m());
    for (std::uint32_t j = 0; j < dist.m(); ++j) {
        out[j] = dist[j] > 0.0 ? std::log(dist[j]) : kNegInf;
    }
    return out;
}

}  // namespace

double bruteforce_triple_count(std::uint32_t m, std::uint64_t N, std::uint64_t n) {
    const double la = log_choose(N + m - 1, m - 1);
    const double lz = log_choose(n + m - 1, m - 1);
    return std::exp(2.0 * la + lz);
}

double exact_error_bruteforce(const Distribution& pi, const Distribution& mu, std::uint64_t N,
                              std::uint64_t n, const ClassifierFn& classifier, double budget) {
    if (pi.m() != mu.m()) {
        throw std::invalid_argument("exact_error_bruteforce: alphabet size mismatch");
    }
    if (N > 0xFFFFFFFFull || n > 0xFFFFFFFFull) {
        throw std::invalid_argument("exact_error_bruteforce: sample sizes exceed the 32-bit range");
    }
    const std::uint32_t m = pi.m();
    const double triples = bruteforce_triple_count(m, N, n);
    if (!(triples <= budget)) {
        std::ostringstream msg;
        msg << "exact_error_bruteforce: enumeration budget exceeded: ~" << triples
            << " histogram triples, budget " << budget;
        throw BudgetExceededError(msg.str());
    }

    const std::uint32_t maxc = static_cast<std::uint32_t>(std::max(N, n));
    std::vector<double> log_fact(maxc + 1);
    for (std::uint32_t k = 0; k <= maxc; ++k) log_fact[k] = log_factorial(k);
    const std::vector<double> log_pi = log_vector(pi);
    const std::vector<double> log_mu = log_vector(mu);

    // Cache the test-histogram layer when it is small; otherwise
    // re-enumerate it inside the training loops.
    struct AzEntry {
        Histogram h;
        double w_pi;
        double w_mu;
    };
    std::vector<AzEntry> az_cache;
    const double az_count = std::exp(log_choose(n + m - 1, m - 1));
    const bool use_cache = az_count <= 200000.0;
    if (use_cache) {
        az_cache.reserve(static_cast<std::size_t>(az_count) + 1);
        for_each_composition(static_cast<std::uint32_t>(n), m, [&](const std::vector<std::uint32_t>& c) {
            az_cache.push_back({Histogram::from_counts(c),
                                log_multinomial_weight(c, log_pi, log_fact, static_cast<std::uint32_t>(n)),
                                log_multinomial_weight(c, log_mu, log_fact, static_cast<std::uint32_t>(n))});
        });
    }

    CompensatedSum err_h0, err_h1;
    for_each_composition(static_cast<std::uint32_t>(N), m, [&](const std::vector<std::uint32_t>& cx) {
        const double wx = log_multinomial_weight(cx, log_pi, log_fact, static_cast<std::uint32_t>(N));
        if (wx == kNegInf) return;
        const Histogram hax = Histogram::from_counts(cx);
        for_each_composition(static_cast<std::uint32_t>(N), m, [&](const std::vector<std::uint32_t>& cy) {
            const double wy = log_multinomial_weight(cy, log_mu, log_fact, static_cast<std::uint32_t>(N));
            if (wy == kNegInf) return;
            const Histogram hay = Histogram::from_counts(cy);
            const double wxy = wx + wy;
            const auto visit = [&](const Histogram& haz, double wz_pi, double wz_mu) {
                const int d = classifier(hax, hay, haz);
                if (d == 1) {
                    if (wz_pi != kNegInf) err_h0.add(std::exp(wxy + wz_pi));
                } else {
                    if (wz_mu != kNegInf) err_h1.add(std::exp(wxy + wz_mu));
                }
            };
            if (use_cache) {
                for (const AzEntry& e : az_cache) visit(e.h, e.w_pi, e.w_mu);
            } else {
                for_each_composition(static_cast<std::uint32_t>(n), m,
                                     [&](const std::vector<std::uint32_t>& cz) {
                                         visit(Histogram::from_counts(cz),
                                               log_multinomial_weight(cz, log_pi, log_fact,
                                                                      static_cast<std::uint32_t>(n)),
                                               log_multinomial_weight(cz, log_mu, log_fact,
                                                                      static_cast<std::uint32_t>(n)));
                                     });
            }
        });
    });
    return 0.5 * (err_h0.value() + err_h1.value());
}

}  // namespace sparseclass
