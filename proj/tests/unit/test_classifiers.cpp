#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numeric>
#include <vector>

#include "sparseclass/classifiers.hpp"
#include "sparseclass/sampling.hpp"

using namespace sparseclass;

namespace {

Histogram h(std::vector<std::uint32_t> counts) { return Histogram::from_counts(std::move(counts)); }

// Random joint counts on a shared alphabet, training totals equal.
struct RandomInstance {
    Histogram ax, ay, az;
};

RandomInstance random_instance(std::uint64_t trial) {
    Rng rng(SeedSpec{4242, trial, kStreamAux});
    const std::uint32_t m = 2 + static_cast<std::uint32_t>(rng.next_below(40));
    const std::uint64_t N = 2 + rng.next_below(12);
    const std::uint64_t n = 2 + rng.next_below(12);
    const Distribution dist = uniform(m);
    return RandomInstance{sample_histogram(dist, N, SeedSpec{4242, trial, kStreamX}),
                          sample_histogram(dist, N, SeedSpec{4242, trial, kStreamY}),
                          sample_histogram(dist, n, SeedSpec{4242, trial, kStreamZ0})};
}

Histogram permuted(const Histogram& in, const std::vector<std::uint32_t>& perm) {
    std::vector<std::uint32_t> counts(in.m(), 0);
    for (std::uint32_t j = 0; j < in.m(); ++j) counts[perm[j]] = in.count(j);
    return Histogram::from_counts(std::move(counts));
}

// Full-alphabet reference evaluation of T with the same exact tallies.
double t_naive(const Histogram& ax, const Histogram& ay, const Histogram& az) {
    std::int64_t train2 = 0, test2 = 0, cross11 = 0;
    for (std::uint32_t j = 0; j < ax.m(); ++j) {
        const auto x = ax.count(j);
        const auto y = ay.count(j);
        const auto z = az.count(j);
        train2 += (x == 2 && z == 0) - (y == 2 && z == 0);
        test2 += (x == 0 && z == 2) - (y == 0 && z == 2);
        cross11 += (y == 1 && z == 1) - (x == 1 && z == 1);
    }
    const double N = static_cast<double>(ax.total());
    const double n = static_cast<double>(az.total());
    const __int128 numer = static_cast<__int128>(train2) * static_cast<__int128>(az.total()) *
                               static_cast<__int128>(az.total()) +
                           static_cast<__int128>(test2) * static_cast<__int128>(ax.total()) *
                               static_cast<__int128>(ax.total()) +
                           static_cast<__int128>(cross11) * static_cast<__int128>(ax.total()) *
                               static_cast<__int128>(az.total());
    return static_cast<double>(numer) / (N * N * n * n);
}

double f_naive(const Histogram& ax, const Histogram& ay, const Histogram& az) {
    const double N = static_cast<double>(ax.total());
    const double n = static_cast<double>(az.total());
    double sum = 0.0;
    for (std::uint32_t j = 0; j < ax.m(); ++j) {
        const double dz = az.count(j) / n;
        const double dx = dz - ax.count(j) / N;
        const double dy = dz - ay.count(j) / N;
        sum += dx * dx - dy * dy;
    }
    return sum;
}

}  // namespace

TEST_CASE("f_statistic worked examples") {
    CHECK(f_statistic(h({1, 1}), h({1, 1}), h({2, 0})) == 0.0);  // identical training
    CHECK(f_statistic(h({2, 0}), h({0, 2}), h({0, 2})) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(f_statistic(h({1, 1}), h({2, 0}), h({2, 0})) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(classify_f(h({1, 1}), h({2, 0}), h({2, 0})) == 1);
    CHECK_THROWS_AS(f_statistic(h({0, 0}), h({0, 0}), h({1, 0})), std::invalid_argument);
    CHECK_THROWS_AS(f_statistic(h({1, 0}), h({0, 1}), h({0, 0})), std::invalid_argument);
}

TEST_CASE("classify_f tie and signs") {
    // Identical training histograms force F = 0; the tie decides 1.
    CHECK(classify_f(h({1, 1, 0}), h({1, 1, 0}), h({0, 1, 1})) == 1);
    CHECK(classify_f(h({2, 0}), h({0, 2}), h({0, 2})) == 1);
    CHECK(classify_f(h({0, 2}), h({2, 0}), h({0, 2})) == 0);
}

TEST_CASE("t_statistic worked examples") {
    // Disjoint all-singleton supports: nothing fires.
    CHECK(t_statistic(h({1, 1, 0, 0, 0, 0}), h({0, 0, 1, 1, 0, 0}), h({0, 0, 0, 0, 1, 1})) == 0.0);
    CHECK(t_statistic(h({2, 0}), h({0, 2}), h({0, 2})) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(t_statistic(h({2, 0}), h({1, 1}), h({1, 1})) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(t_statistic(h({1, 0}), h({0, 1}), h({2, 0})), std::invalid_argument);
    CHECK_THROWS_AS(t_statistic(h({2, 0}), h({0, 2}), h({1, 0})), std::invalid_argument);
}

TEST_CASE("classify_t tie and mirror") {
    CHECK(classify_t(h({1, 1}), h({1, 1}), h({2, 0})) == 1);  // T = 0 decides 1
    CHECK(classify_t(h({2, 0}), h({0, 2}), h({0, 2})) == 1);
    CHECK(classify_t(h({2, 0}), h({0, 2}), h({2, 0})) == 0);  // mirror gives T = -1/2
}

TEST_CASE("oracle_lrt") {
    const Distribution pi({0.75, 0.25});
    const Distribution mu({0.25, 0.75});
    CHECK(oracle_lrt(h({0, 2}), pi, mu) == 1);  // 2 log 3 > 0
    CHECK(oracle_lrt(h({2, 0}), pi, mu) == 0);
    CHECK(oracle_lrt(h({1, 1}), pi, mu) == 1);  // exact tie decides 1
    CHECK(oracle_lrt(h({0, 3}), pi, pi) == 1);  // identical sources: tie

    // Mass concentrated where mu dominates.
    const Distribution mu2({0.0, 1.0});
    CHECK(oracle_lrt(h({0, 2}), pi, mu2) == 1);
    CHECK(oracle_lrt(h({1, 1}), pi, mu2) == 0);  // symbol 0 impossible under mu
    const Distribution zero_both_a({0.0, 1.0});
    const Distribution zero_both_b({0.0, 1.0});
    CHECK_THROWS_AS(oracle_lrt(h({1, 0}), zero_both_a, zero_both_b), std::invalid_argument);
}

TEST_CASE("profile") {
    CHECK(profile(h({1, 1, 1})).phi == std::vector<std::uint64_t>{3});
    CHECK(profile(h({2, 1, 0})).phi == std::vector<std::uint64_t>{1, 1});
    CHECK(profile(h({0, 0, 0})).phi.empty());
}

TEST_CASE("event_A") {
    CHECK(event_A(h({1, 1, 0}), h({0, 1, 1})));
    CHECK_FALSE(event_A(h({2, 0, 0}), h({1, 1, 0})));
    CHECK(event_A(h({0, 0}), h({0, 0})));
}

TEST_CASE("event_B") {
    CHECK(event_B(h({1, 1, 0, 0}), h({2, 0, 0, 0}), h({0, 0, 1, 1})));
    CHECK_FALSE(event_B(h({1, 0, 0, 0}), h({0, 0, 0, 0}), h({1, 0, 0, 0})));
    CHECK_FALSE(event_B(h({0, 1, 0, 0}), h({0, 0, 1, 0}), h({2, 0, 0, 0})));
}

TEST_CASE("property: permutation invariance of statistics, events, profiles") {
    for (std::uint64_t trial = 0; trial < 1000; ++trial) {
        const RandomInstance inst = random_instance(trial);
        const std::uint32_t m = inst.ax.m();
        Rng rng(SeedSpec{999, trial, kStreamAux});
        std::vector<std::uint32_t> perm(m);
        std::iota(perm.begin(), perm.end(), 0u);
        for (std::uint32_t j = m - 1; j > 0; --j) std::swap(perm[j], perm[rng.next_below(j + 1)]);

        const Histogram px = permuted(inst.ax, perm);
        const Histogram py = permuted(inst.ay, perm);
        const Histogram pz = permuted(inst.az, perm);

        CHECK(f_statistic(inst.ax, inst.ay, inst.az) == f_statistic(px, py, pz));
        CHECK(t_statistic(inst.ax, inst.ay, inst.az) == t_statistic(px, py, pz));
        CHECK(event_A(inst.ax, inst.ay) == event_A(px, py));
        CHECK(event_B(inst.ax, inst.ay, inst.az) == event_B(px, py, pz));
        CHECK(profile(inst.ax) == profile(px));
        CHECK(profile(inst.az) == profile(pz));
    }
}

TEST_CASE("property: swapping the training histograms negates F and T exactly") {
    for (std::uint64_t trial = 0; trial < 1000; ++trial) {
        const RandomInstance inst = random_instance(trial);
        CHECK(f_statistic(inst.ax, inst.ay, inst.az) == -f_statistic(inst.ay, inst.ax, inst.az));
        CHECK(t_statistic(inst.ax, inst.ay, inst.az) == -t_statistic(inst.ay, inst.ax, inst.az));
    }
}

TEST_CASE("property: sparse evaluation equals the full-alphabet evaluation") {
    for (std::uint64_t trial = 0; trial < 1000; ++trial) {
        const RandomInstance inst = random_instance(trial);
        CHECK(t_statistic(inst.ax, inst.ay, inst.az) == t_naive(inst.ax, inst.ay, inst.az));
        CHECK(f_statistic(inst.ax, inst.ay, inst.az) ==
              doctest::Approx(f_naive(inst.ax, inst.ay, inst.az)).epsilon(1e-9));
    }
}

TEST_CASE("property: under event B the test-dependent terms contribute nothing") {
    // Build instances satisfying B: az lives on symbols disjoint from the
    // training supports and has no repeats, so T reduces to its
    // training-doubles terms.
    for (std::uint64_t trial = 0; trial < 300; ++trial) {
        Rng rng(SeedSpec{777, trial, kStreamAux});
        const std::uint32_t m = 12 + static_cast<std::uint32_t>(rng.next_below(20));
        const std::uint64_t N = 2 + rng.next_below(4);
        const Distribution front = uniform(m / 2);
        Histogram ax(m), ay(m), az(m);
        const Histogram hx = sample_histogram(front, N, SeedSpec{777, trial, kStreamX});
        const Histogram hy = sample_histogram(front, N, SeedSpec{777, trial, kStreamY});
        for (std::uint32_t j = 0; j < m / 2; ++j) {
            if (hx.count(j)) ax.add(j, hx.count(j));
            if (hy.count(j)) ay.add(j, hy.count(j));
        }
        // Distinct test symbols in the back half.
        const std::uint64_t n = 2 + rng.next_below(std::min<std::uint64_t>(4, m / 2 - 1));
        for (std::uint64_t i = 0; i < n; ++i) az.add(static_cast<std::uint32_t>(m / 2 + i), 1);

        REQUIRE(event_B(ax, ay, az));
        std::int64_t train2 = 0;
        for (std::uint32_t j = 0; j < m; ++j) {
            train2 += (ax.count(j) == 2) - (ay.count(j) == 2);
        }
        const double N2 = static_cast<double>(N) * static_cast<double>(N);
        CHECK(t_statistic(ax, ay, az) == doctest::Approx(train2 / N2).epsilon(1e-15));
    }
}

TEST_CASE("property: profile mass equals the histogram total") {
    for (std::uint64_t trial = 0; trial < 500; ++trial) {
        const RandomInstance inst = random_instance(trial);
        const Profile p = profile(inst.az);
        std::uint64_t mass = 0;
        for (std::size_t i = 0; i < p.phi.size(); ++i) mass += (i + 1) * p.phi[i];
        CHECK(mass == inst.az.total());
    }
}
