#pragma once

#include <cstdint>
#include <vector>

#include "sparseclass/distribution.hpp"
#include "sparseclass/histogram.hpp"
#include "sparseclass/rng.hpp"

namespace sparseclass {

// One Binomial(n, p) draw. Bernoulli loop for small n, CDF inversion for
// small mean, BTRS rejection otherwise. Deterministic given the stream.
std::uint64_t binomial_draw(Rng& rng, std::uint64_t n, double p);

// One Poisson(lambda) draw. Knuth for small lambda, PTRS otherwise.
std::uint64_t poisson_draw(Rng& rng, double lambda);

// Walker/Vose alias table for O(1) draws from a fixed distribution.
class AliasTable {
public:
    explicit AliasTable(const std::vector<double>& probs);

    std::uint32_t sample(Rng& rng) const {
        const auto i = static_cast<std::uint32_t>(rng.next_below(accept_.size()));
        return rng.next_double() < accept_[i] ? i : alias_[i];
    }

private:
    std::vector<double> accept_;
    std::vector<std::uint32_t> alias_;
};

// Reusable sampler for repeated draws from one distribution. Picks the
// per-histogram strategy by size: sequential conditional binomials over
// symbols (O(m)) when size >= m/16, otherwise one alias-table lookup per
// observation so sparse-regime draws cost O(size log m) at worst.
class HistogramSampler {
public:
    explicit HistogramSampler(const Distribution& dist);

    // Appends `size` i.i.d. draws into `out` (call out.reset() first if a
    // fresh histogram is wanted). Leaves the support sorted.
    void fill(Rng& rng, std::uint64_t size, Histogram& out) const;

private:
    const std::vector<double> probs_;
    double total_mass_;
    AliasTable alias_;
};

// Histogram of `size` i.i.d. draws from dist; deterministic given seed.
Histogram sample_histogram(const Distribution& dist, std::uint64_t size, const SeedSpec& seed);

// Multinomial conditioned on counts[pinned_symbol] == pinned_count: the
// pinned count is fixed and the remaining size - pinned_count draws come
// from dist restricted to the other symbols, renormalized.
Histogram sample_conditioned_count(const Distribution& dist, std::uint64_t size,
                                   std::uint32_t pinned_symbol, std::uint64_t pinned_count,
                                   const SeedSpec& seed);

// Independent counts_j ~ Poisson(lambda * dist_j); the total is random.
Histogram poissonized_histogram(const Distribution& dist, double lambda, const SeedSpec& seed);

// Maps each observation of symbol j independently and uniformly to one of
// b sub-symbols of j; output alphabet m*b, total preserved.
Histogram inflate_alphabet(const Histogram& hist, std::uint32_t b, const SeedSpec& seed);

}  // namespace sparseclass
