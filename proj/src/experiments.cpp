#include "sparseclass/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "sparseclass/classifiers.hpp"
#include "sparseclass/sampling.hpp"
#include "sparseclass/stats.hpp"

namespace sparseclass {

std::string to_string(ClassifierId id) {
    switch (id) {
        case ClassifierId::F: return "F";
        case ClassifierId::T: return "T";
        case ClassifierId::Oracle: return "ORACLE";
    }
    throw std::logic_error("unknown classifier id");
}

ClassifierId classifier_from_string(const std::string& name) {
    if (name == "F") return ClassifierId::F;
    if (name == "T") return ClassifierId::T;
    if (name == "ORACLE") return ClassifierId::Oracle;
    throw std::invalid_argument("unknown classifier '" + name + "' (expected F, T or ORACLE)");
}

namespace {

std::uint32_t checked_alphabet(std::uint64_t m) {
    if (m == 0 || m > (1ull << 31)) {
        throw std::invalid_argument("alphabet size must lie in [1, 2^31]");
    }
    return static_cast<std::uint32_t>(m);
}

struct Tally {
    std::uint64_t errors_h0 = 0;
    std::uint64_t errors_h1 = 0;
};

// One worker's share of trials. Trial t draws from substreams keyed by
// (master_seed, t, stream), so the tally is independent of how trials
// are split across workers.
Tally run_trials(const Distribution& pi, const Distribution& mu,
                 const HistogramSampler& pi_sampler, const HistogramSampler& mu_sampler,
                 std::uint64_t N, std::uint64_t n, ClassifierId classifier,
                 std::uint64_t master_seed, std::uint64_t t_begin, std::uint64_t t_end) {
    Tally tally;
    Histogram ax(pi.m()), ay(pi.m()), az(pi.m());
    const bool needs_training = classifier != ClassifierId::Oracle;
    for (std::uint64_t t = t_begin; t < t_end; ++t) {
        if (needs_training) {
            Rng rng_x(SeedSpec{master_seed, t, kStreamX});
            Rng rng_y(SeedSpec{master_seed, t, kStreamY});
            ax.reset();
            ay.reset();
            pi_sampler.fill(rng_x, N, ax);
            mu_sampler.fill(rng_y, N, ay);
        }
        const auto decide = [&]() -> int {
            switch (classifier) {
                case ClassifierId::F: return classify_f(ax, ay, az);
                case ClassifierId::T: return classify_t(ax, ay, az);
                case ClassifierId::Oracle: return oracle_lrt(az, pi, mu);
            }
            throw std::logic_error("unknown classifier id");
        };

        Rng rng_z0(SeedSpec{master_seed, t, kStreamZ0});
        az.reset();
        pi_sampler.fill(rng_z0, n, az);
        tally.errors_h0 += decide() == 1;

        Rng rng_z1(SeedSpec{master_seed, t, kStreamZ1});
        az.reset();
        mu_sampler.fill(rng_z1, n, az);
        tally.errors_h1 += decide() == 0;
    }
    return tally;
}

Tally run_trials_parallel(const Distribution& pi, const Distribution& mu, std::uint64_t N,
                          std::uint64_t n, ClassifierId classifier, std::uint64_t trials,
                          std::uint64_t master_seed, unsigned threads) {
    const HistogramSampler pi_sampler(pi);
    const HistogramSampler mu_sampler(mu);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(trials, 1)));

    if (threads <= 1) {
        return run_trials(pi, mu, pi_sampler, mu_sampler, N, n, classifier, master_seed, 0, trials);
    }
    std::vector<Tally> partial(threads);
    std::vector<std::thread> workers;
    workers.reserve(threads);
    const std::uint64_t chunk = (trials + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
        const std::uint64_t t0 = std::min<std::uint64_t>(trials, w * chunk);
        const std::uint64_t t1 = std::min<std::uint64_t>(trials, t0 + chunk);
        workers.emplace_back([&, w, t0, t1]() {
            partial[w] = run_trials(pi, mu, pi_sampler, mu_sampler, N, n, classifier, master_seed,
                                    t0, t1);
        });
    }
    for (auto& worker : workers) worker.join();
    Tally total;
    for (const Tally& t : partial) {
        total.errors_h0 += t.errors_h0;
        total.errors_h1 += t.errors_h1;
    }
    return total;
}

ErrorEstimate finish_estimate(const Tally& tally, std::uint64_t trials, double confidence) {
    ErrorEstimate est;
    est.trials = trials;
    est.errors_h0 = tally.errors_h0;
    est.errors_h1 = tally.errors_h1;
    const std::uint64_t legs = 2 * trials;
    const std::uint64_t errors = tally.errors_h0 + tally.errors_h1;
    est.p_hat = static_cast<double>(errors) / static_cast<double>(legs);
    if (errors == 0) {
        // Rule of three: zero-error points carry only an upper bound.
        est.ci_low = 0.0;
        est.ci_high = std::min(1.0, 3.0 / static_cast<double>(trials));
    } else {
        const ConfidenceInterval ci = wilson_interval(errors, legs, confidence);
        est.ci_low = ci.low;
        est.ci_high = ci.high;
    }
    return est;
}

}  // namespace

ErrorEstimate estimate_error(const Distribution& pi, const Distribution& mu, std::uint64_t N,
                             std::uint64_t n, ClassifierId classifier, std::uint64_t trials,
                             std::uint64_t master_seed, const EstimateOptions& options) {
    if (trials == 0) throw std::invalid_argument("estimate_error: trials must be positive");
    if (pi.m() != mu.m()) throw std::invalid_argument("estimate_error: alphabet size mismatch");
    if (options.check_membership) {
        const MembershipReport report = check_class_membership(pi, mu, options.params);
        if (!report.ok && !options.allow_class_violation) {
            std::ostringstream msg;
            msg << "estimate_error: (pi, mu) violates the model class:";
            for (const auto& v : report.violations) msg << "\n  " << v;
            msg << "\n(set allow_class_violation to run anyway)";
            throw std::invalid_argument(msg.str());
        }
    }
    const Tally tally =
        run_trials_parallel(pi, mu, N, n, classifier, trials, master_seed, options.threads);
    return finish_estimate(tally, trials, options.confidence);
}

std::vector<SweepPoint> run_sweep_points(const SweepConfig& cfg) {
    if (cfg.grid.empty()) throw std::invalid_argument("sweep: grid must be nonempty");
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) {
        throw std::invalid_argument("sweep: epsilon must lie in (0, 1)");
    }
    for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
        const GridPoint& gp = cfg.grid[i];
        if (gp.m == 0 || gp.N == 0 || gp.n == 0) {
            throw std::invalid_argument("sweep: grid point " + std::to_string(i) +
                                        " has a zero dimension");
        }
        if (gp.m % 2 != 0) {
            throw std::invalid_argument("sweep: grid point " + std::to_string(i) + " has odd m = " +
                                        std::to_string(gp.m) +
                                        "; the bi-uniform pair needs an even alphabet");
        }
        if (cfg.require_sparse && std::max(gp.N, gp.n) >= gp.m) {
            throw std::invalid_argument("sweep: grid point " + std::to_string(i) +
                                        " violates the sparse regime max{N,n} < m");
        }
        if (cfg.require_consistency &&
            !(static_cast<double>(gp.m) < static_cast<double>(gp.N) *
                                              static_cast<double>(std::min(gp.N, gp.n)))) {
            throw std::invalid_argument("sweep: grid point " + std::to_string(i) +
                                        " violates the consistency regime m < min{N^2, Nn}");
        }
    }

    std::vector<SweepPoint> points;
    points.reserve(cfg.grid.size());
    for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
        const GridPoint& gp = cfg.grid[i];
        const std::uint32_t m32 = checked_alphabet(gp.m);
        const Distribution pi = uniform(m32);
        const Distribution mu = bi_uniform(canonical_bi_uniform_spec(m32, cfg.epsilon));
        EstimateOptions options;
        options.confidence = cfg.confidence_level;
        options.threads = cfg.threads;
        options.check_membership = true;
        options.params = ModelClassParams{cfg.epsilon, cfg.c_bar, m32};
        options.allow_class_violation = cfg.allow_class_violation;
        SweepPoint point;
        point.grid = gp;
        point.r = normalization_r(gp.N, gp.n, gp.m);
        point.estimate = estimate_error(pi, mu, gp.N, gp.n, cfg.classifier, cfg.trials_per_point,
                                        cfg.master_seed + i, options);
        points.push_back(std::move(point));
    }
    return points;
}

ExponentFit fit_exponent(const std::vector<SweepPoint>& points) {
    ExponentFit fit;
    for (const SweepPoint& p : points) {
        if (p.estimate.censored()) {
            fit.censored.push_back(p);
            continue;
        }
        FitPoint fp;
        fp.grid = p.grid;
        fp.r = p.r;
        fp.estimate = p.estimate;
        fp.minus_log_pe = -std::log(p.estimate.p_hat);
        fp.minus_log_pe_low = -std::log(p.estimate.ci_high);
        fp.minus_log_pe_high = p.estimate.ci_low > 0.0
                                   ? -std::log(p.estimate.ci_low)
                                   : std::numeric_limits<double>::infinity();
        fit.points.push_back(fp);
    }

    if (fit.points.empty()) {
        std::ostringstream msg;
        msg << "exponent fit undefined: all " << points.size()
            << " grid points censored (zero observed errors)";
        throw AllCensoredError(msg.str());
    }
    if (fit.points.size() < 2) {
        throw DegenerateGridError("exponent fit needs at least 2 uncensored grid points");
    }

    double mean_r = 0.0, mean_y = 0.0;
    for (const FitPoint& p : fit.points) {
        mean_r += p.r;
        mean_y += p.minus_log_pe;
    }
    const double count = static_cast<double>(fit.points.size());
    mean_r /= count;
    mean_y /= count;
    double srr = 0.0, sry = 0.0, syy = 0.0;
    for (const FitPoint& p : fit.points) {
        const double dr = p.r - mean_r;
        const double dy = p.minus_log_pe - mean_y;
        srr += dr * dr;
        sry += dr * dy;
        syy += dy * dy;
    }
    if (!(srr > 0.0)) {
        throw DegenerateGridError("exponent fit undefined: no spread in the regressor r");
    }
    fit.slope = sry / srr;
    fit.intercept = mean_y - fit.slope * mean_r;
    if (syy > 0.0) {
        double ss_res = 0.0;
        for (const FitPoint& p : fit.points) {
            const double resid = p.minus_log_pe - (fit.intercept + fit.slope * p.r);
            ss_res += resid * resid;
        }
        fit.r_squared = 1.0 - ss_res / syy;
    } else {
        fit.r_squared = 1.0;
    }
    return fit;
}

ExponentFit sweep_and_fit(const SweepConfig& cfg) { return fit_exponent(run_sweep_points(cfg)); }

ConditionalFalseAlarmResult conditional_false_alarm_experiment(
    std::uint64_t m, std::uint64_t N, std::uint64_t n, double epsilon, std::uint64_t trials,
    std::uint64_t master_seed, double confidence, unsigned threads) {
    if (m == 0 || m % 2 != 0) {
        throw std::invalid_argument("conditional_false_alarm_experiment: m must be even");
    }
    if (N == 0 || n == 0 || trials == 0) {
        throw std::invalid_argument("conditional_false_alarm_experiment: N, n, trials must be positive");
    }
    const CnReport cn = prob_C_n(m, N, n);
    if (cn.k == 0) {
        throw std::invalid_argument(
            "conditional_false_alarm_experiment: floor(4n/sqrt(m)) = 0, the conditioning event "
            "degenerates (need 4n >= sqrt(m))");
    }
    if (cn.k > N) {
        throw std::invalid_argument(
            "conditional_false_alarm_experiment: floor(4n/sqrt(m)) exceeds N");
    }

    const std::uint32_t m32 = checked_alphabet(m);
    const Distribution q = bi_uniform(canonical_bi_uniform_spec(m32, epsilon));
    const Distribution u = uniform(m32);
    // The conditioned uniform training sample: symbol 0 pinned to k
    // occurrences, the rest drawn from uniform on the other symbols.
    std::vector<double> reduced(m32, 1.0 / static_cast<double>(m - 1));
    reduced[0] = 0.0;
    const Distribution reduced_u(std::move(reduced));

    const HistogramSampler q_sampler(q);
    const HistogramSampler u_sampler(u);
    const HistogramSampler reduced_sampler(reduced_u);
    const std::uint64_t k = cn.k;

    const auto worker = [&](std::uint64_t t0, std::uint64_t t1) -> std::uint64_t {
        std::uint64_t errors = 0;
        Histogram ax(m32), ay(m32), az(m32);
        for (std::uint64_t t = t0; t < t1; ++t) {
            Rng rng_x(SeedSpec{master_seed, t, kStreamX});
            Rng rng_y(SeedSpec{master_seed, t, kStreamY});
            Rng rng_z(SeedSpec{master_seed, t, kStreamZ0});
            ax.reset();
            ay.reset();
            az.reset();
            q_sampler.fill(rng_x, N, ax);
            reduced_sampler.fill(rng_y, N - k, ay);
            ay.add(0, static_cast<std::uint32_t>(k));
            ay.sort_support();
            u_sampler.fill(rng_z, n, az);
            // The test sample comes from the uniform source, i.e. the
            // training-y source; attributing it to x is the error.
            errors += classify_f(ax, ay, az) == 0;
        }
        return errors;
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, trials));
    std::uint64_t errors = 0;
    if (threads <= 1) {
        errors = worker(0, trials);
    } else {
        std::vector<std::uint64_t> partial(threads, 0);
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (trials + threads - 1) / threads;
        for (unsigned w = 0; w < threads; ++w) {
            const std::uint64_t t0 = std::min<std::uint64_t>(trials, w * chunk);
            const std::uint64_t t1 = std::min<std::uint64_t>(trials, t0 + chunk);
            pool.emplace_back([&, w, t0, t1]() { partial[w] = worker(t0, t1); });
        }
        for (auto& th : pool) th.join();
        for (std::uint64_t e : partial) errors += e;
    }

    ConditionalFalseAlarmResult result;
    result.k = k;
    result.trials = trials;
    result.conditional_errors = errors;
    result.p_cond = static_cast<double>(errors) / static_cast<double>(trials);
    const ConfidenceInterval ci = wilson_interval(errors, trials, confidence);
    result.ci_low = ci.low;
    result.ci_high = ci.high;
    result.log_prob_cn = cn.exact.value;
    result.asymptote = cn.asymptote;
    result.implied_log_pe_bound =
        std::log(0.5) + result.log_prob_cn +
        (result.p_cond > 0.0 ? std::log(result.p_cond) : -std::numeric_limits<double>::infinity());
    return result;
}

std::vector<BoundarySweepRow> consistency_boundary_sweep(
    const std::vector<std::uint64_t>& m_list, double alpha, double epsilon, std::uint64_t trials,
    std::uint64_t master_seed, double confidence, unsigned threads) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("consistency_boundary_sweep: alpha must lie in (0, 1)");
    }
    if (m_list.empty()) {
        throw std::invalid_argument("consistency_boundary_sweep: m list must be nonempty");
    }
    std::vector<BoundarySweepRow> rows;
    rows.reserve(m_list.size());
    for (std::size_t i = 0; i < m_list.size(); ++i) {
        const std::uint64_t m = m_list[i];
        if (m == 0 || m % 2 != 0) {
            throw std::invalid_argument("consistency_boundary_sweep: m must be even");
        }
        const auto N = static_cast<std::uint64_t>(
            std::ceil(std::pow(static_cast<double>(m), alpha)));
        if (N < 2) {
            throw std::invalid_argument("consistency_boundary_sweep: ceil(m^alpha) < 2 at m = " +
                                        std::to_string(m));
        }
        const std::uint32_t m32 = checked_alphabet(m);
        const Distribution pi = uniform(m32);
        const Distribution mu = bi_uniform(canonical_bi_uniform_spec(m32, epsilon));
        EstimateOptions options;
        options.confidence = confidence;
        options.threads = threads;
        BoundarySweepRow row;
        row.m = m;
        row.N = N;
        row.r = normalization_r(N, N, m);
        row.estimate = estimate_error(pi, mu, N, N, ClassifierId::T, trials, master_seed + i, options);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace sparseclass
