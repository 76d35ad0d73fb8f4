#include "sparseclass/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sparseclass/stats.hpp"

namespace sparseclass {

void Histogram::sort_support() {
    if (!std::is_sorted(support_.begin(), support_.end())) {
        std::sort(support_.begin(), support_.end());
    }
}

Histogram Histogram::from_counts(std::vector<std::uint32_t> counts) {
    Histogram h(0);
    h.counts_ = std::move(counts);
    for (std::uint32_t j = 0; j < h.counts_.size(); ++j) {
        if (h.counts_[j] > 0) {
            h.support_.push_back(j);
            h.total_ += h.counts_[j];
        }
    }
    return h;
}

namespace {

// Bernoulli loop, only for small n.
std::uint64_t binomial_bernoulli(Rng& rng, std::uint64_t n, double p) {
    std::uint64_t k = 0;
    for (std::uint64_t i = 0; i < n; ++i) k += rng.next_double() < p;
    return k;
}

// CDF inversion; requires n*p small enough that (1-p)^n does not underflow.
std::uint64_t binomial_inversion(Rng& rng, std::uint64_t n, double p) {
    const double r = p / (1.0 - p);
    double pmf = std::exp(static_cast<double>(n) * std::log1p(-p));
    double cdf = pmf;
    const double u = rng.next_double();
    std::uint64_t k = 0;
    // Once the pmf underflows the cdf cannot grow further; stop rather
    // than walk the remaining (possibly huge) support.
    while (u > cdf && k < n && pmf > 0.0) {
        ++k;
        pmf *= r * static_cast<double>(n - k + 1) / static_cast<double>(k);
        cdf += pmf;
    }
    return k;
}

// Hormann's BTRS transformed-rejection sampler; requires p <= 0.5, n*p >= 10.
std::uint64_t binomial_btrs(Rng& rng, std::uint64_t n, double p) {
    const double nd = static_cast<double>(n);
    const double spq = std::sqrt(nd * p * (1.0 - p));
    const double b = 1.15 + 2.53 * spq;
    const double a = -0.0873 + 0.0248 * b + 0.01 * p;
    const double c = nd * p + 0.5;
    const double vr = 0.92 - 4.2 / b;
    const double alpha = (2.83 + 5.1 / b) * spq;
    const double lpq = std::log(p / (1.0 - p));
    const auto mode = static_cast<std::uint64_t>(std::floor((nd + 1.0) * p));
    const double h = log_factorial(mode) + log_factorial(n - mode);

    for (;;) {
        const double u = rng.next_double() - 0.5;
        double v = rng.next_double();
        const double us = 0.5 - std::abs(u);
        const double kd = std::floor((2.0 * a / us + b) * u + c);
        if (kd < 0.0 || kd > nd) continue;
        const auto k = static_cast<std::uint64_t>(kd);
        if (us >= 0.07 && v <= vr) return k;
        v = std::log(v * alpha / (a / (us * us) + b));
        const double bound = h - log_factorial(k) - log_factorial(n - k) +
                             (kd - static_cast<double>(mode)) * lpq;
        if (v <= bound) return k;
    }
}

// Knuth's product-of-uniforms method for small lambda.
std::uint64_t poisson_knuth(Rng& rng, double lambda) {
    const double limit = std::exp(-lambda);
    std::uint64_t k = 0;
    double prod = rng.next_double();
    while (prod > limit) {
        ++k;
        prod *= rng.next_double();
    }
    return k;
}

// Hormann's PTRS transformed-rejection sampler; requires lambda >= 10.
std::uint64_t poisson_ptrs(Rng& rng, double lambda) {
    const double slam = std::sqrt(lambda);
    const double llam = std::log(lambda);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);

    for (;;) {
        const double u = rng.next_double() - 0.5;
        double v = rng.next_double();
        const double us = 0.5 - std::abs(u);
        const double kd = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
        if (kd < 0.0) continue;
        const auto k = static_cast<std::uint64_t>(kd);
        if (us >= 0.07 && v <= vr) return k;
        if (us < 0.013 && v > us) continue;
        v = std::log(v * inv_alpha / (a / (us * us) + b));
        if (v <= kd * llam - lambda - log_factorial(k)) return k;
    }
}

}  // namespace

std::uint64_t binomial_draw(Rng& rng, std::uint64_t n, double p) {
    if (n == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    const bool flip = p > 0.5;
    const double q = flip ? 1.0 - p : p;
    std::uint64_t x;
    if (n <= 32) {
        x = binomial_bernoulli(rng, n, q);
    } else if (static_cast<double>(n) * q <= 14.0) {
        x = binomial_inversion(rng, n, q);
    } else {
        x = binomial_btrs(rng, n, q);
    }
    return flip ? n - x : x;
}

std::uint64_t poisson_draw(Rng& rng, double lambda) {
    if (!(lambda > 0.0)) return 0;
    if (lambda < 30.0) return poisson_knuth(rng, lambda);
    return poisson_ptrs(rng, lambda);
}

AliasTable::AliasTable(const std::vector<double>& probs) {
    const std::size_t n = probs.size();
    if (n == 0) throw std::invalid_argument("AliasTable: empty weight vector");
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0)) throw std::invalid_argument("AliasTable: negative weight");
        sum += p;
    }
    if (!(sum > 0.0)) throw std::invalid_argument("AliasTable: all weights zero");

    accept_.assign(n, 1.0);
    alias_.resize(n);
    std::vector<double> scaled(n);
    std::vector<std::uint32_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
        alias_[i] = static_cast<std::uint32_t>(i);
        scaled[i] = probs[i] * static_cast<double>(n) / sum;
        (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
        const std::uint32_t s = small.back();
        const std::uint32_t l = large.back();
        small.pop_back();
        accept_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] = (scaled[l] + scaled[s]) - 1.0;
        if (scaled[l] < 1.0) {
            large.pop_back();
            small.push_back(l);
        }
    }
    // Leftovers in either list carry accept probability 1 (rounding residue).
}

HistogramSampler::HistogramSampler(const Distribution& dist)
    : probs_(dist.probs()), total_mass_(0.0), alias_(probs_) {
    CompensatedSum mass;
    for (double p : probs_) mass.add(p);
    total_mass_ = mass.value();
}

void HistogramSampler::fill(Rng& rng, std::uint64_t size, Histogram& out) const {
    if (out.m() != probs_.size()) {
        throw std::invalid_argument("HistogramSampler::fill: alphabet size mismatch");
    }
    if (size > 0xFFFFFFFFull) {
        throw std::invalid_argument("HistogramSampler::fill: size exceeds the 32-bit count range");
    }
    if (size == 0) return;
    const auto m = static_cast<std::uint64_t>(probs_.size());

    if (size < m / 16) {
        for (std::uint64_t i = 0; i < size; ++i) out.add(alias_.sample(rng), 1);
        out.sort_support();
        return;
    }

    std::uint64_t remaining = size;
    double mass = total_mass_;
    for (std::uint32_t j = 0; j < m && remaining > 0; ++j) {
        const double p = probs_[j];
        if (!(p > 0.0)) continue;
        double pr = p / mass;
        if (pr > 1.0) pr = 1.0;
        const std::uint64_t x = (mass <= p) ? remaining : binomial_draw(rng, remaining, pr);
        out.add(j, static_cast<std::uint32_t>(x));
        remaining -= x;
        mass -= p;
    }
    if (remaining > 0) {
        // Rounding left mass exactly 0 before the last positive symbol.
        for (std::uint32_t j = static_cast<std::uint32_t>(m); j-- > 0;) {
            if (probs_[j] > 0.0) {
                out.add(j, static_cast<std::uint32_t>(remaining));
                break;
            }
        }
    }
    out.sort_support();
}

Histogram sample_histogram(const Distribution& dist, std::uint64_t size, const SeedSpec& seed) {
    Rng rng(seed);
    const HistogramSampler sampler(dist);
    Histogram out(dist.m());
    sampler.fill(rng, size, out);
    return out;
}

Histogram sample_conditioned_count(const Distribution& dist, std::uint64_t size,
                                   std::uint32_t pinned_symbol, std::uint64_t pinned_count,
                                   const SeedSpec& seed) {
    if (pinned_symbol >= dist.m()) {
        throw std::invalid_argument("sample_conditioned_count: pinned symbol out of range");
    }
    if (pinned_count > size) {
        throw std::invalid_argument("sample_conditioned_count: pinned_count exceeds size");
    }
    if (!(dist[pinned_symbol] > 0.0)) {
        throw std::invalid_argument("sample_conditioned_count: pinned symbol has zero probability");
    }

    Histogram out(dist.m());
    const std::uint64_t rest = size - pinned_count;
    if (rest > 0) {
        std::vector<double> reduced = dist.probs();
        reduced[pinned_symbol] = 0.0;
        CompensatedSum mass_sum;
        for (double p : reduced) mass_sum.add(p);
        const double mass = mass_sum.value();
        if (!(mass > 0.0)) {
            throw std::invalid_argument(
                "sample_conditioned_count: no probability mass outside the pinned symbol");
        }
        for (double& p : reduced) p /= mass;
        Rng rng(seed);
        const HistogramSampler sampler(Distribution(std::move(reduced)));
        sampler.fill(rng, rest, out);
    }
    out.add(pinned_symbol, static_cast<std::uint32_t>(pinned_count));
    out.sort_support();
    return out;
}

Histogram poissonized_histogram(const Distribution& dist, double lambda, const SeedSpec& seed) {
    if (!(lambda > 0.0)) throw std::invalid_argument("poissonized_histogram: lambda must be > 0");
    Rng rng(seed);
    Histogram out(dist.m());
    for (std::uint32_t j = 0; j < dist.m(); ++j) {
        const double mean = lambda * dist[j];
        if (!(mean > 0.0)) continue;
        const std::uint64_t c = poisson_draw(rng, mean);
        if (c > 0xFFFFFFFFull) {
            throw std::overflow_error("poissonized_histogram: count exceeds the 32-bit range");
        }
        if (c > 0) out.add(j, static_cast<std::uint32_t>(c));
    }
    return out;
}

Histogram inflate_alphabet(const Histogram& hist, std::uint32_t b, const SeedSpec& seed) {
    if (b == 0) throw std::invalid_argument("inflate_alphabet: b must be >= 1");
    const std::uint64_t inflated = static_cast<std::uint64_t>(hist.m()) * b;
    if (inflated > (1ULL << 31)) {
        throw std::invalid_argument("inflate_alphabet: inflated alphabet exceeds 2^31 symbols");
    }
    Rng rng(seed);
    Histogram out(static_cast<std::uint32_t>(inflated));
    for (std::uint32_t j : hist.support()) {
        const std::uint64_t c = hist.count(j);
        const std::uint64_t base = static_cast<std::uint64_t>(j) * b;
        if (b == 1) {
            out.add(static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(c));
        } else if (c < b / 16) {
            for (std::uint64_t i = 0; i < c; ++i) {
                const std::uint64_t cell = rng.next_below(b);
                out.add(static_cast<std::uint32_t>(base + cell), 1);
            }
        } else {
            std::uint64_t remaining = c;
            for (std::uint32_t t = 0; t < b && remaining > 0; ++t) {
                const std::uint64_t x = (t + 1 == b)
                                            ? remaining
                                            : binomial_draw(rng, remaining, 1.0 / static_cast<double>(b - t));
                out.add(static_cast<std::uint32_t>(base + t), static_cast<std::uint32_t>(x));
                remaining -= x;
            }
        }
    }
    out.sort_support();
    return out;
}

}  // namespace sparseclass
