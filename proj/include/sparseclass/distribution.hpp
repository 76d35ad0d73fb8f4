#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sparseclass {

// Probability vector over the alphabet {0, ..., m-1}. Immutable after
// construction; construction validates nonnegativity and sum-to-one
// (absolute tolerance 1e-12, compensated summation).
class Distribution {
public:
    explicit Distribution(std::vector<double> probs);

    std::uint32_t m() const { return static_cast<std::uint32_t>(probs_.size()); }
    const std::vector<double>& probs() const { return probs_; }
    double operator[](std::uint32_t j) const { return probs_[j]; }

private:
    std::vector<double> probs_;
};

// Class membership parameters: l1 separation epsilon and the rarity
// constant c_bar bounding every symbol probability by c_bar / m.
struct ModelClassParams {
    double epsilon = 0.0;  // in (0, 2]
    double c_bar = 1.0;    // >= 1
    std::uint32_t m = 0;
};

// Bi-uniform construction: mass (1+epsilon)/m on the symbols in omega
// (|omega| = m/2), (1-epsilon)/m elsewhere.
struct BiUniformSpec {
    std::uint32_t m = 0;                 // even
    double epsilon = 0.0;                // in (0, 1)
    std::vector<std::uint32_t> omega;    // 0-based symbols, |omega| = m/2
};

struct MembershipReport {
    bool ok = false;
    double l1 = 0.0;
    double max_pi = 0.0;
    double max_mu = 0.0;
    std::vector<std::string> violations;
};

Distribution uniform(std::uint32_t m);

Distribution bi_uniform(const BiUniformSpec& spec);

// Canonical omega {0, ..., m/2 - 1}; every implemented statistic is
// permutation invariant, so this single representative suffices.
BiUniformSpec canonical_bi_uniform_spec(std::uint32_t m, double epsilon);

double l1_distance(const Distribution& p, const Distribution& q);

MembershipReport check_class_membership(const Distribution& pi, const Distribution& mu,
                                        const ModelClassParams& params);

// Text form: first line m, second line whitespace-separated probabilities.
void write_distribution(std::ostream& out, const Distribution& dist);
Distribution read_distribution(std::istream& in);
Distribution load_distribution(const std::string& path);

}  // namespace sparseclass
