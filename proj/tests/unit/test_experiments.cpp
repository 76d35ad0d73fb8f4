#include <doctest.h>

#include <cmath>

#include "sparseclass/classifiers.hpp"
#include "sparseclass/experiments.hpp"

using namespace sparseclass;

TEST_CASE("classifier id round trip") {
    CHECK(to_string(classifier_from_string("F")) == "F");
    CHECK(to_string(classifier_from_string("T")) == "T");
    CHECK(to_string(classifier_from_string("ORACLE")) == "ORACLE");
    CHECK_THROWS_AS(classifier_from_string("bogus"), std::invalid_argument);
}

TEST_CASE("estimate_error: identical sources sit at one half") {
    const Distribution u = uniform(16);
    // The two legs are mirror images; 1/2 within 4 sigma of a fair coin
    // over 2 * 20000 legs (sigma ~ 0.0025).
    for (const ClassifierId id : {ClassifierId::T, ClassifierId::F}) {
        const ErrorEstimate est = estimate_error(u, u, 4, 4, id, 20000, 7);
        CHECK(std::abs(est.p_hat - 0.5) < 0.011);
        CHECK(est.ci_low < 0.5);
        CHECK(est.ci_high > 0.5);
    }
}

TEST_CASE("estimate_error: disjoint point masses give exactly zero error") {
    const Distribution pi({1.0, 0.0});
    const Distribution mu({0.0, 1.0});
    const ErrorEstimate est = estimate_error(pi, mu, 2, 2, ClassifierId::T, 5000, 11);
    CHECK(est.errors_h0 == 0);
    CHECK(est.errors_h1 == 0);
    CHECK(est.p_hat == 0.0);
    CHECK(est.censored());
    CHECK(est.ci_high == doctest::Approx(3.0 / 5000.0).epsilon(1e-12));
}

TEST_CASE("estimate_error is deterministic and thread-count independent") {
    const Distribution u = uniform(32);
    const Distribution q = bi_uniform(canonical_bi_uniform_spec(32, 0.6));
    EstimateOptions one;
    one.threads = 1;
    EstimateOptions two;
    two.threads = 2;
    const ErrorEstimate a = estimate_error(u, q, 6, 6, ClassifierId::T, 30000, 99, one);
    const ErrorEstimate b = estimate_error(u, q, 6, 6, ClassifierId::T, 30000, 99, two);
    CHECK(a.errors_h0 == b.errors_h0);
    CHECK(a.errors_h1 == b.errors_h1);

    const ErrorEstimate c = estimate_error(u, q, 6, 6, ClassifierId::T, 30000, 100, one);
    CHECK((c.errors_h0 != a.errors_h0 || c.errors_h1 != a.errors_h1));
}

TEST_CASE("estimate_error agrees with the exact oracle on a small instance") {
    const Distribution u = uniform(4);
    const Distribution q = bi_uniform(canonical_bi_uniform_spec(4, 0.8));
    // Exact values frozen in test_exact.cpp.
    const double exact_f = 0.38015353125;
    const double exact_t = 0.4025241875;
    EstimateOptions options;
    options.confidence = 0.997;
    options.threads = 2;
    const ErrorEstimate ef = estimate_error(u, q, 3, 3, ClassifierId::F, 100000, 5, options);
    CHECK(ef.ci_low <= exact_f);
    CHECK(ef.ci_high >= exact_f);
    const ErrorEstimate et = estimate_error(u, q, 3, 3, ClassifierId::T, 100000, 5, options);
    CHECK(et.ci_low <= exact_t);
    CHECK(et.ci_high >= exact_t);
}

TEST_CASE("estimate_error enforces the model class unless overridden") {
    const Distribution u = uniform(8);
    const Distribution q = bi_uniform(canonical_bi_uniform_spec(8, 0.3));
    EstimateOptions options;
    options.check_membership = true;
    options.params = ModelClassParams{0.9, 1.2, 8};  // l1 = 0.3 < 0.9 fails
    CHECK_THROWS_AS(estimate_error(u, q, 3, 3, ClassifierId::T, 100, 1, options),
                    std::invalid_argument);
    options.allow_class_violation = true;
    CHECK_NOTHROW(estimate_error(u, q, 3, 3, ClassifierId::T, 100, 1, options));
    CHECK_THROWS_AS(estimate_error(u, q, 3, 3, ClassifierId::T, 0, 1), std::invalid_argument);
}

TEST_CASE("oracle is not significantly worse than T (dominance sanity)") {
    const Distribution u = uniform(16);
    const Distribution q = bi_uniform(canonical_bi_uniform_spec(16, 0.8));
    const ErrorEstimate t = estimate_error(u, q, 6, 6, ClassifierId::T, 40000, 21);
    const ErrorEstimate oracle = estimate_error(u, q, 6, 6, ClassifierId::Oracle, 40000, 21);
    const double joint_width = (t.ci_high - t.ci_low) + (oracle.ci_high - oracle.ci_low);
    CHECK(oracle.p_hat <= t.p_hat + 3.0 * joint_width);
}

TEST_CASE("run_sweep_points validates the grid") {
    SweepConfig cfg;
    cfg.epsilon = 0.5;
    cfg.c_bar = 1.5;
    cfg.trials_per_point = 100;
    cfg.grid = {};
    CHECK_THROWS_AS(run_sweep_points(cfg), std::invalid_argument);

    cfg.grid = {{15, 4, 4}};  // odd m
    CHECK_THROWS_AS(run_sweep_points(cfg), std::invalid_argument);

    cfg.grid = {{16, 20, 4}};
    cfg.require_sparse = true;  // max{N,n} >= m
    CHECK_THROWS_AS(run_sweep_points(cfg), std::invalid_argument);

    cfg.grid = {{16, 3, 3}};
    cfg.require_sparse = false;
    cfg.require_consistency = true;  // m = 16 >= min{9, 9}
    CHECK_THROWS_AS(run_sweep_points(cfg), std::invalid_argument);
}

TEST_CASE("fit_exponent: two points determine the line exactly") {
    std::vector<SweepPoint> points(2);
    points[0].grid = {100, 10, 10};
    points[0].r = 1.0;
    points[0].estimate = {1000, 100, 100, 0.1, 0.08, 0.12};
    points[1].grid = {100, 20, 20};
    points[1].r = 4.0;
    points[1].estimate = {1000, 10, 10, 0.01, 0.008, 0.012};
    const ExponentFit fit = fit_exponent(points);
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    const double expected_slope = (-std::log(0.01) + std::log(0.1)) / 3.0;
    CHECK(fit.slope == doctest::Approx(expected_slope).epsilon(1e-12));
}

TEST_CASE("fit_exponent: degenerate and censored grids raise typed errors") {
    std::vector<SweepPoint> same(2);
    for (auto& p : same) {
        p.grid = {100, 10, 10};
        p.r = 1.0;
        p.estimate = {1000, 50, 50, 0.05, 0.04, 0.06};
    }
    CHECK_THROWS_AS(fit_exponent(same), DegenerateGridError);

    std::vector<SweepPoint> censored(2);
    censored[0].grid = {100, 10, 10};
    censored[0].r = 1.0;
    censored[0].estimate = {1000, 0, 0, 0.0, 0.0, 3e-3};
    censored[1].grid = {100, 20, 20};
    censored[1].r = 4.0;
    censored[1].estimate = {1000, 0, 0, 0.0, 0.0, 3e-3};
    CHECK_THROWS_AS(fit_exponent(censored), AllCensoredError);

    std::vector<SweepPoint> one_left = censored;
    one_left[0].estimate = {1000, 5, 5, 0.005, 0.004, 0.006};
    CHECK_THROWS_AS(fit_exponent(one_left), DegenerateGridError);
}

TEST_CASE("sweep_and_fit runs end to end on a small grid") {
    SweepConfig cfg;
    cfg.epsilon = 0.8;
    cfg.c_bar = 1.8;
    cfg.classifier = ClassifierId::T;
    cfg.trials_per_point = 4000;
    cfg.master_seed = 31;
    cfg.threads = 2;
    cfg.grid = {{100, 10, 10}, {100, 20, 20}, {100, 30, 30}};
    const ExponentFit fit = sweep_and_fit(cfg);
    CHECK(fit.points.size() + fit.censored.size() == 3);
    CHECK(fit.slope > 0.0);
}

TEST_CASE("oracle error decreases monotonically in r (CI-separated)") {
    SweepConfig cfg;
    cfg.epsilon = 0.8;
    cfg.c_bar = 1.8;
    cfg.classifier = ClassifierId::Oracle;
    cfg.trials_per_point = 20000;
    cfg.master_seed = 61;
    cfg.threads = 2;
    cfg.grid = {{100, 10, 10}, {100, 15, 15}, {100, 20, 20}, {100, 25, 25}};
    const auto points = run_sweep_points(cfg);
    REQUIRE(points.size() == 4);
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        CHECK(points[i + 1].estimate.p_hat < points[i].estimate.p_hat);
        CHECK(points[i + 1].estimate.ci_high < points[i].estimate.ci_low);
    }
}

TEST_CASE("boundary sweep at alpha = 1/2 keeps r and the error roughly flat") {
    const auto rows = consistency_boundary_sweep({1024, 4096}, 0.5, 0.8, 20000, 71, 0.95, 2);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].r == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rows[1].r == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(rows[0].estimate.p_hat - rows[1].estimate.p_hat) < 0.03);
}

TEST_CASE("conditional_false_alarm_experiment validates the conditioning event") {
    // 4n < sqrt(m) makes k = 0.
    CHECK_THROWS_AS(conditional_false_alarm_experiment(1 << 20, 100, 100, 0.5, 10, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(conditional_false_alarm_experiment(63, 16, 16, 0.5, 10, 1),
                    std::invalid_argument);  // odd m
    // k = floor(4 * 16 / 8) = 8 > N = 4.
    CHECK_THROWS_AS(conditional_false_alarm_experiment(64, 4, 16, 0.5, 10, 1),
                    std::invalid_argument);
}

TEST_CASE("conditional_false_alarm_experiment: triple is internally consistent") {
    const ConditionalFalseAlarmResult res =
        conditional_false_alarm_experiment(64, 16, 16, 0.5, 2000, 3, 0.95, 2);
    CHECK(res.k == 8);
    CHECK(res.p_cond >= 0.0);
    CHECK(res.p_cond <= 1.0);
    CHECK(res.ci_low <= res.p_cond);
    CHECK(res.ci_high >= res.p_cond);
    if (res.p_cond > 0.0) {
        CHECK(res.implied_log_pe_bound ==
              doctest::Approx(std::log(0.5) + res.log_prob_cn + std::log(res.p_cond))
                  .epsilon(1e-12));
    }
    // Determinism across thread counts.
    const ConditionalFalseAlarmResult res1 =
        conditional_false_alarm_experiment(64, 16, 16, 0.5, 2000, 3, 0.95, 1);
    CHECK(res1.conditional_errors == res.conditional_errors);
}

TEST_CASE("consistency_boundary_sweep shapes and validation") {
    CHECK_THROWS_AS(consistency_boundary_sweep({100}, 1.5, 0.5, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(consistency_boundary_sweep({}, 0.5, 0.5, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(consistency_boundary_sweep({101}, 0.5, 0.5, 10, 1), std::invalid_argument);

    const auto rows = consistency_boundary_sweep({100, 400}, 0.6, 0.8, 2000, 17, 0.95, 2);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].m == 100);
    CHECK(rows[0].N == 16);  // ceil(100^0.6)
    CHECK(rows[1].N == 37);  // ceil(400^0.6) = ceil(36.41)
    CHECK(rows[0].r == doctest::Approx(16.0 * 16.0 / 100.0).epsilon(1e-12));
}
