#pragma once

#include <cstdint>
#include <vector>

namespace sparseclass {

// Count vector over {0, ..., m-1} plus its sorted support. Samples are
// materialized as histograms, never as sequences: every statistic here
// is a function of counts alone, and this keeps memory at O(m) with
// O(draws)-sized supports in the sparse regime.
class Histogram {
public:
    explicit Histogram(std::uint32_t m) : counts_(m, 0) {}

    static Histogram from_counts(std::vector<std::uint32_t> counts);

    std::uint32_t m() const { return static_cast<std::uint32_t>(counts_.size()); }
    std::uint64_t total() const { return total_; }
    std::uint32_t count(std::uint32_t j) const { return counts_[j]; }
    const std::vector<std::uint32_t>& counts() const { return counts_; }
    const std::vector<std::uint32_t>& support() const { return support_; }

    // Adds k observations of symbol j; tracks the support incrementally.
    void add(std::uint32_t j, std::uint32_t k) {
        if (k == 0) return;
        if (counts_[j] == 0) support_.push_back(j);
        counts_[j] += k;
        total_ += k;
    }

    // Clears only touched entries, so a reused workspace costs O(support).
    void reset() {
        for (std::uint32_t j : support_) counts_[j] = 0;
        support_.clear();
        total_ = 0;
    }

    // Sorts the support; samplers that touch symbols out of order call
    // this once at the end so merge-based statistics can rely on order.
    void sort_support();

private:
    std::vector<std::uint32_t> counts_;
    std::vector<std::uint32_t> support_;
    std::uint64_t total_ = 0;
};

}  // namespace sparseclass
