#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

#include "sparseclass/classifiers.hpp"
#include "sparseclass/distribution.hpp"
#include "sparseclass/histogram.hpp"

namespace sparseclass {

// Natural-log probability; -inf encodes an impossible event.
struct LogProb {
    double value = 0.0;

    bool impossible() const { return std::isinf(value) && value < 0.0; }
};

// Explicit main terms of the log-MGF quadratic bound. The remainder
// terms are not computable from their asymptotic orders and are only
// acknowledged in the note.
struct BoundReport {
    double scale = 0.0;                  // min{N^2, nN}
    double gamma = 0.0;
    double linear_coefficient = 0.0;     // sum_j [ (pi-nu)^2/2 - (mu-nu)^2/2 ]
    double quadratic_coefficient = 0.0;  // sum_j [ pi*nu + mu*nu + (pi^2+mu^2)/2 ]
    double linear_term = 0.0;            // scale * gamma * linear_coefficient
    double quadratic_term = 0.0;         // scale * gamma^2 * quadratic_coefficient
    double main_term = 0.0;              // linear_term + quadratic_term
    std::string dropped_remainder_note;
};

struct CnReport {
    std::uint64_t k = 0;      // floor(4n / sqrt(m))
    LogProb exact;            // Binomial(N, 1/m) log-pmf at k
    double asymptote = 0.0;   // -4 (n/sqrt(m)) log(m)
};

class BudgetExceededError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// min{N^2, N n} / m.
double normalization_r(std::uint64_t N, std::uint64_t n, std::uint64_t m);

// log P(all N uniform draws distinct) = sum_{k<N} log(1 - k/m).
LogProb prob_all_distinct_uniform(std::uint64_t m, std::uint64_t N);

// Exact log P(all N draws distinct) = log(N! e_N(p_1..p_m)) via the
// elementary-symmetric dynamic program, carried as the probability-scaled
// partials k! e_k so no rescaling is needed in double precision.
LogProb prob_all_distinct(const Distribution& dist, std::uint64_t N);

// Independent route for bi-uniform inputs: the binomial convolution
// N! sum_k C(m/2,k) C(m/2,N-k) a^k b^(N-k), evaluated in log space.
LogProb bi_uniform_all_distinct_convolution(std::uint32_t m, double epsilon, std::uint64_t N);

// log P(no repeat within X and no repeat within Y) for independent
// training samples of size N each.
LogProb prob_event_A(const Distribution& dist_x, const Distribution& dist_y, std::uint64_t N);

// Main term of the log-probability of event A for the (uniform,
// bi-uniform) pair: -(1 + eps^2/2) N^2 / m.
double lemma_A_rate(double epsilon, std::uint64_t N, std::uint64_t m);

// Exact log P(test sample of size n has no repeats and avoids both
// training supports) = log(n! e_n) over the z-probabilities of symbols
// outside supp(ax) and supp(ay).
LogProb prob_event_B_given_xy(const Histogram& ax, const Histogram& ay,
                              const Distribution& z_dist, std::uint64_t n);

// Falling-factorial form of the same event for uniform z with s training
// symbols excluded: (m-s)(m-s-1)...(m-s-n+1) / m^n.
LogProb prob_event_B_uniform(std::uint64_t m, std::uint64_t s, std::uint64_t n);

// Probability that a designated symbol appears exactly floor(4n/sqrt(m))
// times in a uniform training sample of size N, plus the asymptote it is
// compared against.
CnReport prob_C_n(std::uint64_t m, std::uint64_t N, std::uint64_t n);

BoundReport chernoff_lambda_bound(const Distribution& pi, const Distribution& mu,
                                  const Distribution& nu, double gamma, std::uint64_t N,
                                  std::uint64_t n);

// Vertex of the quadratic in gamma (the minimizing gamma).
double chernoff_optimal_gamma(const Distribution& pi, const Distribution& mu,
                              const Distribution& nu);

// Guaranteed exponent lower bound eps^4 / (160 c_bar^2).
double achievability_exponent(double epsilon, double c_bar);

using ClassifierFn = std::function<int(const Histogram& ax, const Histogram& ay, const Histogram& az)>;

// Number of (ax, ay, az) count-vector triples the brute-force oracle
// would enumerate, as a double (may be astronomically large).
double bruteforce_triple_count(std::uint32_t m, std::uint64_t N, std::uint64_t n);

// Exact average error probability at the fixed pair (pi, mu): enumerates
// every histogram triple with multinomial weights. Refuses with a
// BudgetExceededError when the triple count exceeds `budget`.
double exact_error_bruteforce(const Distribution& pi, const Distribution& mu, std::uint64_t N,
                              std::uint64_t n, const ClassifierFn& classifier,
                              double budget = 1e8);

}  // namespace sparseclass
