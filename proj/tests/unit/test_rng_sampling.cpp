#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "sparseclass/sampling.hpp"
#include "sparseclass/stats.hpp"

using namespace sparseclass;

TEST_CASE("substreams are deterministic and label-separated") {
    Rng a(SeedSpec{42, 7, kStreamX});
    Rng b(SeedSpec{42, 7, kStreamX});
    Rng c(SeedSpec{42, 7, kStreamY});
    Rng d(SeedSpec{42, 8, kStreamX});
    bool same_ab = true, same_ac = true, same_ad = true;
    for (int i = 0; i < 64; ++i) {
        const auto va = a.next_u64();
        same_ab &= va == b.next_u64();
        same_ac &= va == c.next_u64();
        same_ad &= va == d.next_u64();
    }
    CHECK(same_ab);
    CHECK_FALSE(same_ac);
    CHECK_FALSE(same_ad);
}

TEST_CASE("next_below stays in range and covers small supports") {
    Rng rng(SeedSpec{1, 0, 0});
    std::vector<int> seen(5, 0);
    for (int i = 0; i < 2000; ++i) {
        const auto v = rng.next_below(5);
        REQUIRE(v < 5);
        ++seen[v];
    }
    for (int count : seen) CHECK(count > 300);
}

TEST_CASE("binomial_draw matches binomial moments across all code paths") {
    // (n, p) chosen to hit the Bernoulli, inversion and BTRS paths.
    const std::vector<std::pair<std::uint64_t, double>> cases = {
        {10, 0.3}, {200, 0.02}, {500, 0.4}, {500, 0.93}};
    std::uint64_t trial = 0;
    for (const auto& [n, p] : cases) {
        const int reps = 40000;
        double sum = 0.0, sumsq = 0.0;
        for (int i = 0; i < reps; ++i) {
            Rng rng(SeedSpec{77, trial++, kStreamAux});
            const double x = static_cast<double>(binomial_draw(rng, n, p));
            REQUIRE(x <= static_cast<double>(n));
            sum += x;
            sumsq += x * x;
        }
        const double mean = sum / reps;
        const double var = sumsq / reps - mean * mean;
        const double true_mean = static_cast<double>(n) * p;
        const double true_var = true_mean * (1.0 - p);
        // 5 sigma on the sample mean.
        CHECK(std::abs(mean - true_mean) < 5.0 * std::sqrt(true_var / reps));
        CHECK(std::abs(var - true_var) < 0.1 * true_var + 0.5);
    }
}

TEST_CASE("binomial_draw BTRS path passes a chi-square goodness-of-fit test") {
    // n*q >= 10 with q <= 0.5 exercises the rejection sampler.
    const std::uint64_t n = 500;
    const double p = 0.4;
    const int reps = 60000;
    std::vector<double> observed(501, 0.0);
    for (int i = 0; i < reps; ++i) {
        Rng rng(SeedSpec{811, static_cast<std::uint64_t>(i), kStreamAux});
        ++observed[binomial_draw(rng, n, p)];
    }
    // Pool the tails so every expected cell count is >= ~8.
    std::vector<double> obs_cells, exp_cells;
    double obs_tail = 0.0, exp_tail = 0.0;
    for (std::uint64_t k = 0; k <= n; ++k) {
        const double expected = reps * std::exp(log_binomial_pmf(k, n, p));
        if (expected < 8.0) {
            obs_tail += observed[k];
            exp_tail += expected;
            continue;
        }
        obs_cells.push_back(observed[k]);
        exp_cells.push_back(expected);
    }
    obs_cells.push_back(obs_tail);
    exp_cells.push_back(exp_tail);
    const double stat = chi_square_statistic(obs_cells, exp_cells);
    // ~60 cells; 99.99% quantile of chi-square(60) is ~110.
    CHECK(stat < 110.0);
}

TEST_CASE("poisson_draw PTRS path passes a chi-square goodness-of-fit test") {
    const double lambda = 120.0;
    const int reps = 60000;
    std::vector<double> observed(400, 0.0);
    for (int i = 0; i < reps; ++i) {
        Rng rng(SeedSpec{813, static_cast<std::uint64_t>(i), kStreamAux});
        const std::uint64_t k = poisson_draw(rng, lambda);
        ++observed[std::min<std::uint64_t>(k, 399)];
    }
    std::vector<double> obs_cells, exp_cells;
    double obs_tail = 0.0, exp_tail = 0.0;
    for (std::uint64_t k = 0; k < 399; ++k) {
        const double expected =
            reps * std::exp(k * std::log(lambda) - lambda - std::lgamma(static_cast<double>(k) + 1));
        if (expected < 8.0) {
            obs_tail += observed[k];
            exp_tail += expected;
            continue;
        }
        obs_cells.push_back(observed[k]);
        exp_cells.push_back(expected);
    }
    obs_cells.push_back(obs_tail + observed[399]);
    exp_cells.push_back(exp_tail + reps * 1e-12);
    const double stat = chi_square_statistic(obs_cells, exp_cells);
    CHECK(stat < 110.0);
}

TEST_CASE("poisson_draw matches Poisson moments across both code paths") {
    for (const double lambda : {0.3, 7.0, 120.0}) {
        const int reps = 40000;
        double sum = 0.0, sumsq = 0.0;
        for (int i = 0; i < reps; ++i) {
            Rng rng(SeedSpec{91, static_cast<std::uint64_t>(i), kStreamAux});
            const double x = static_cast<double>(poisson_draw(rng, lambda));
            sum += x;
            sumsq += x * x;
        }
        const double mean = sum / reps;
        const double var = sumsq / reps - mean * mean;
        CHECK(std::abs(mean - lambda) < 5.0 * std::sqrt(lambda / reps));
        CHECK(std::abs(var - lambda) < 0.1 * lambda + 0.2);
    }
}

TEST_CASE("sample_histogram: empty, point mass, large uniform") {
    const Histogram empty = sample_histogram(uniform(4), 0, SeedSpec{1, 0, 0});
    CHECK(empty.total() == 0);
    CHECK(empty.support().empty());

    const Histogram point = sample_histogram(Distribution({1.0}), 5, SeedSpec{1, 0, 0});
    CHECK(point.total() == 5);
    CHECK(point.count(0) == 5);

    // Binomial(1e6, 1/2) fraction within the 3-sigma band (sigma = 5e-4).
    const Histogram big = sample_histogram(uniform(2), 1000000, SeedSpec{2024, 0, 0});
    CHECK(big.total() == 1000000);
    const double frac = static_cast<double>(big.count(0)) / 1e6;
    CHECK(frac > 0.4985);
    CHECK(frac < 1.0 - 0.4985);
}

TEST_CASE("sample_histogram is deterministic and support is sorted") {
    for (const std::uint64_t size : {3ull, 40ull, 5000ull}) {
        const Histogram a = sample_histogram(uniform(64), size, SeedSpec{5, 11, kStreamZ0});
        const Histogram b = sample_histogram(uniform(64), size, SeedSpec{5, 11, kStreamZ0});
        CHECK(a.counts() == b.counts());
        CHECK(std::is_sorted(a.support().begin(), a.support().end()));
        CHECK(a.total() == size);
        std::uint64_t from_support = 0;
        for (auto j : a.support()) from_support += a.count(j);
        CHECK(from_support == size);
    }
}

TEST_CASE("sample_histogram marginals are binomial (moment check)") {
    const Distribution dist({0.5, 0.2, 0.2, 0.05, 0.05});
    const std::uint64_t size = 20;
    const int reps = 30000;
    std::vector<double> sums(5, 0.0);
    for (int i = 0; i < reps; ++i) {
        const Histogram h = sample_histogram(dist, size, SeedSpec{7, static_cast<std::uint64_t>(i), 0});
        for (std::uint32_t j = 0; j < 5; ++j) sums[j] += h.count(j);
    }
    for (std::uint32_t j = 0; j < 5; ++j) {
        const double mean = sums[j] / reps;
        const double expect = static_cast<double>(size) * dist[j];
        const double sigma = std::sqrt(expect * (1.0 - dist[j]) / reps);
        CHECK(std::abs(mean - expect) < 5.0 * sigma);
    }
}

TEST_CASE("sampling law is permutation equivariant (distributional check)") {
    // Same distribution with symbols relabeled; first moments must match
    // under the relabeling even though draw order differs internally.
    const Distribution dist({0.5, 0.3, 0.1, 0.1});
    const Distribution perm({0.1, 0.5, 0.1, 0.3});  // 0->1, 1->3, 2->0, 3->2
    const std::uint32_t map_to_perm[4] = {1, 3, 0, 2};
    const int reps = 30000;
    std::vector<double> direct(4, 0.0), relabeled(4, 0.0);
    for (int i = 0; i < reps; ++i) {
        const Histogram a = sample_histogram(dist, 12, SeedSpec{11, static_cast<std::uint64_t>(i), 0});
        const Histogram b = sample_histogram(perm, 12, SeedSpec{13, static_cast<std::uint64_t>(i), 0});
        for (std::uint32_t j = 0; j < 4; ++j) {
            direct[j] += a.count(j);
            relabeled[j] += b.count(map_to_perm[j]);
        }
    }
    for (std::uint32_t j = 0; j < 4; ++j) {
        const double pj = dist[j];
        const double sigma = std::sqrt(12.0 * pj * (1 - pj) / reps);
        CHECK(std::abs(direct[j] / reps - relabeled[j] / reps) < 7.0 * sigma);
    }
}

TEST_CASE("sample_conditioned_count pins the count and splits the rest") {
    const Histogram all = sample_conditioned_count(uniform(3), 4, 1, 4, SeedSpec{3, 0, 0});
    CHECK(all.count(1) == 4);
    CHECK(all.total() == 4);

    CHECK_THROWS_AS(sample_conditioned_count(uniform(3), 4, 1, 5, SeedSpec{3, 0, 0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(sample_conditioned_count(Distribution({1.0, 0.0}), 4, 1, 2, SeedSpec{3, 0, 0}),
                    std::invalid_argument);

    // pinned_count = 0 is an ordinary multinomial on the reduced alphabet.
    const Histogram none = sample_conditioned_count(uniform(3), 6, 0, 0, SeedSpec{3, 1, 0});
    CHECK(none.count(0) == 0);
    CHECK(none.total() == 6);

    // uniform(3), size 4, pin symbol 0 at 2: remaining 2 split uniformly
    // over {1, 2}, so P(counts = (2,2,0)) = 1/4.
    const int reps = 40000;
    int hits = 0;
    for (int i = 0; i < reps; ++i) {
        const Histogram h =
            sample_conditioned_count(uniform(3), 4, 0, 2, SeedSpec{17, static_cast<std::uint64_t>(i), 0});
        REQUIRE(h.count(0) == 2);
        hits += h.count(1) == 2;
    }
    const double p = static_cast<double>(hits) / reps;
    CHECK(std::abs(p - 0.25) < 5.0 * std::sqrt(0.25 * 0.75 / reps));
}

TEST_CASE("poissonized_histogram: vanishing intensity and mean check") {
    const Histogram zero = poissonized_histogram(uniform(8), 1e-12, SeedSpec{23, 0, 0});
    CHECK(zero.total() == 0);

    const Distribution dist({0.6, 0.3, 0.1});
    const double lambda = 9.0;
    const int reps = 30000;
    std::vector<double> sums(3, 0.0);
    for (int i = 0; i < reps; ++i) {
        const Histogram h = poissonized_histogram(dist, lambda, SeedSpec{29, static_cast<std::uint64_t>(i), 0});
        for (std::uint32_t j = 0; j < 3; ++j) sums[j] += h.count(j);
    }
    for (std::uint32_t j = 0; j < 3; ++j) {
        const double mean = sums[j] / reps;
        const double expect = lambda * dist[j];
        CHECK(std::abs(mean - expect) < 5.0 * std::sqrt(expect / reps));
    }
}

TEST_CASE("poissonized histograms conditioned on the total recover the multinomial") {
    // m = 3, condition on total = 4; compare conditional frequencies of
    // all 15 count vectors with multinomial probabilities by chi-square.
    const Distribution dist = uniform(3);
    const std::uint64_t target = 4;
    const double lambda = 4.0;
    std::map<std::vector<std::uint32_t>, int> freq;
    int kept = 0;
    for (int i = 0; i < 100000; ++i) {
        const Histogram h = poissonized_histogram(dist, lambda, SeedSpec{31, static_cast<std::uint64_t>(i), 0});
        if (h.total() != target) continue;
        ++kept;
        ++freq[h.counts()];
    }
    REQUIRE(kept > 10000);

    std::vector<double> observed, expected;
    double lf4 = std::lgamma(5.0);
    for (std::uint32_t a = 0; a <= 4; ++a) {
        for (std::uint32_t b = 0; a + b <= 4; ++b) {
            const std::uint32_t c = 4 - a - b;
            const std::vector<std::uint32_t> key = {a, b, c};
            const double logw = lf4 - std::lgamma(a + 1.0) - std::lgamma(b + 1.0) -
                                std::lgamma(c + 1.0) + 4.0 * std::log(1.0 / 3.0);
            expected.push_back(kept * std::exp(logw));
            const auto it = freq.find(key);
            observed.push_back(it == freq.end() ? 0.0 : it->second);
        }
    }
    // 14 degrees of freedom; 36.12 is the 99.9% quantile.
    CHECK(chi_square_statistic(observed, expected) < 36.12);
}

TEST_CASE("inflate_alphabet: identity, uniform split, total preserved") {
    const Histogram h = Histogram::from_counts({3, 0, 2});
    const Histogram same = inflate_alphabet(h, 1, SeedSpec{37, 0, 0});
    CHECK(same.counts() == h.counts());

    // counts = (4) over m = 1, b = 2: sub-counts are Binomial(4, 1/2).
    const Histogram four = Histogram::from_counts({4});
    const int reps = 40000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < reps; ++i) {
        const Histogram split = inflate_alphabet(four, 2, SeedSpec{41, static_cast<std::uint64_t>(i), 0});
        REQUIRE(split.total() == 4);
        const double x = split.count(0);
        sum += x;
        sumsq += x * x;
    }
    const double mean = sum / reps;
    const double var = sumsq / reps - mean * mean;
    CHECK(std::abs(mean - 2.0) < 5.0 * std::sqrt(1.0 / reps));
    CHECK(std::abs(var - 1.0) < 0.05);

    for (int i = 0; i < 50; ++i) {
        Rng rng(SeedSpec{43, static_cast<std::uint64_t>(i), 0});
        std::vector<std::uint32_t> counts(6);
        for (auto& c : counts) c = static_cast<std::uint32_t>(rng.next_below(9));
        const Histogram in = Histogram::from_counts(counts);
        const Histogram out = inflate_alphabet(in, 7, SeedSpec{43, static_cast<std::uint64_t>(i), 1});
        CHECK(out.total() == in.total());
        CHECK(out.m() == in.m() * 7);
    }
}
