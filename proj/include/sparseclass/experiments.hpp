#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sparseclass/distribution.hpp"
#include "sparseclass/exact.hpp"

namespace sparseclass {

enum class ClassifierId { F, T, Oracle };

std::string to_string(ClassifierId id);
ClassifierId classifier_from_string(const std::string& name);

// Monte Carlo tallies for one (pi, mu, N, n) point. Both hypothesis legs
// are evaluated per trial against one shared training draw; p_hat is the
// average of the two conditional error rates.
struct ErrorEstimate {
    std::uint64_t trials = 0;
    std::uint64_t errors_h0 = 0;  // decided 1 while the test sample came from pi
    std::uint64_t errors_h1 = 0;  // decided 0 while the test sample came from mu
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;

    bool censored() const { return errors_h0 + errors_h1 == 0; }
};

struct EstimateOptions {
    double confidence = 0.95;
    unsigned threads = 1;
    bool check_membership = false;
    ModelClassParams params{};
    bool allow_class_violation = false;
};

struct GridPoint {
    std::uint64_t m = 0;
    std::uint64_t N = 0;
    std::uint64_t n = 0;
};

struct SweepConfig {
    std::vector<GridPoint> grid;
    double epsilon = 0.5;
    double c_bar = 1.5;
    ClassifierId classifier = ClassifierId::T;
    std::uint64_t trials_per_point = 1000;
    double confidence_level = 0.95;
    std::uint64_t master_seed = 0;
    unsigned threads = 1;
    bool require_sparse = false;       // max{N, n} < m at every point
    bool require_consistency = false;  // m < min{N^2, N n} at every point
    bool allow_class_violation = false;
};

struct SweepPoint {
    GridPoint grid;
    double r = 0.0;
    ErrorEstimate estimate;
};

struct FitPoint {
    GridPoint grid;
    double r = 0.0;
    double minus_log_pe = 0.0;
    double minus_log_pe_low = 0.0;   // from ci_high
    double minus_log_pe_high = 0.0;  // from ci_low (may be +inf)
    ErrorEstimate estimate;
};

struct ExponentFit {
    std::vector<FitPoint> points;        // uncensored, used in the fit
    std::vector<SweepPoint> censored;    // zero observed errors, reported only
    double slope = 0.0;                  // exponent estimate
    double intercept = 0.0;
    double r_squared = 0.0;
};

class DegenerateGridError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class AllCensoredError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ConditionalFalseAlarmResult {
    std::uint64_t k = 0;
    std::uint64_t trials = 0;
    std::uint64_t conditional_errors = 0;
    double p_cond = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    double log_prob_cn = 0.0;
    double asymptote = 0.0;
    double implied_log_pe_bound = 0.0;  // log(1/2) + log_prob_cn + log(p_cond)
};

struct BoundarySweepRow {
    std::uint64_t m = 0;
    std::uint64_t N = 0;
    double r = 0.0;
    ErrorEstimate estimate;
};

// Monte Carlo error estimate at a fixed pair: per trial draw ax ~ pi^N,
// ay ~ mu^N, then one test sample from each source, classify both legs,
// tally errors. Deterministic given the seed regardless of thread count.
ErrorEstimate estimate_error(const Distribution& pi, const Distribution& mu, std::uint64_t N,
                             std::uint64_t n, ClassifierId classifier, std::uint64_t trials,
                             std::uint64_t master_seed, const EstimateOptions& options = {});

// Runs estimate_error at the canonical (uniform, bi-uniform) pair for
// every grid point. Point i uses master seed cfg.master_seed + i.
std::vector<SweepPoint> run_sweep_points(const SweepConfig& cfg);

// Least-squares fit of -log p_hat against r = min{N^2, Nn}/m, with
// intercept. Censored points are excluded from the fit and reported.
ExponentFit sweep_and_fit(const SweepConfig& cfg);
ExponentFit fit_exponent(const std::vector<SweepPoint>& points);

// The conditioned-training-spike experiment: with the pair (q, u) and a
// designated symbol pinned to k = floor(4n/sqrt(m)) occurrences in the
// uniform training sample, estimates how often the l2 classifier then
// misattributes a test sample drawn from the uniform source, and the
// resulting lower bound on its average error.
ConditionalFalseAlarmResult conditional_false_alarm_experiment(
    std::uint64_t m, std::uint64_t N, std::uint64_t n, double epsilon, std::uint64_t trials,
    std::uint64_t master_seed, double confidence = 0.95, unsigned threads = 1);

// Error estimates for the coincidence classifier along N = n = ceil(m^alpha).
std::vector<BoundarySweepRow> consistency_boundary_sweep(
    const std::vector<std::uint64_t>& m_list, double alpha, double epsilon, std::uint64_t trials,
    std::uint64_t master_seed, double confidence = 0.95, unsigned threads = 1);

}  // namespace sparseclass
