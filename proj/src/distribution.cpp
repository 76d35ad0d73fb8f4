#include "sparseclass/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "sparseclass/stats.hpp"

namespace sparseclass {

namespace {
constexpr double kSumTolerance = 1e-12;
}

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) {
        throw std::invalid_argument("Distribution: alphabet size must be positive");
    }
    CompensatedSum sum;
    for (double p : probs_) {
        if (!(p >= 0.0)) {
            throw std::invalid_argument("Distribution: negative or NaN probability");
        }
        sum.add(p);
    }
    if (std::abs(sum.value() - 1.0) > kSumTolerance) {
        throw std::invalid_argument("Distribution: probabilities sum to " +
                                    std::to_string(sum.value()) + ", expected 1 within 1e-12");
    }
}

Distribution uniform(std::uint32_t m) {
    if (m == 0) throw std::invalid_argument("uniform: m must be positive");
    return Distribution(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

Distribution bi_uniform(const BiUniformSpec& spec) {
    if (spec.m == 0 || spec.m % 2 != 0) {
        throw std::invalid_argument("bi_uniform: m must be even and positive");
    }
    if (!(spec.epsilon > 0.0 && spec.epsilon < 1.0)) {
        throw std::invalid_argument("bi_uniform: epsilon must lie in (0, 1)");
    }
    if (spec.omega.size() != spec.m / 2) {
        throw std::invalid_argument("bi_uniform: |omega| must equal m/2");
    }
    const double md = static_cast<double>(spec.m);
    std::vector<double> probs(spec.m, (1.0 - spec.epsilon) / md);
    const double heavy = (1.0 + spec.epsilon) / md;
    for (std::uint32_t j : spec.omega) {
        if (j >= spec.m) throw std::invalid_argument("bi_uniform: omega symbol out of range");
        if (probs[j] == heavy) throw std::invalid_argument("bi_uniform: duplicate symbol in omega");
        probs[j] = heavy;
    }
    return Distribution(std::move(probs));
}

BiUniformSpec canonical_bi_uniform_spec(std::uint32_t m, double epsilon) {
    BiUniformSpec spec;
    spec.m = m;
    spec.epsilon = epsilon;
    spec.omega.resize(m / 2);
    for (std::uint32_t j = 0; j < m / 2; ++j) spec.omega[j] = j;
    return spec;
}

double l1_distance(const Distribution& p, const Distribution& q) {
    if (p.m() != q.m()) throw std::invalid_argument("l1_distance: alphabet sizes differ");
    CompensatedSum sum;
    for (std::uint32_t j = 0; j < p.m(); ++j) sum.add(std::abs(p[j] - q[j]));
    return sum.value();
}

MembershipReport check_class_membership(const Distribution& pi, const Distribution& mu,
                                        const ModelClassParams& params) {
    if (pi.m() != mu.m()) {
        throw std::invalid_argument("check_class_membership: alphabet sizes differ");
    }
    if (!(params.epsilon > 0.0 && params.epsilon <= 2.0)) {
        throw std::invalid_argument("check_class_membership: epsilon must lie in (0, 2]");
    }
    if (!(params.c_bar >= 1.0)) {
        throw std::invalid_argument("check_class_membership: c_bar must be >= 1");
    }
    if (params.m != 0 && params.m != pi.m()) {
        throw std::invalid_argument("check_class_membership: params.m does not match the alphabet");
    }

    MembershipReport report;
    report.l1 = l1_distance(pi, mu);
    report.max_pi = *std::max_element(pi.probs().begin(), pi.probs().end());
    report.max_mu = *std::max_element(mu.probs().begin(), mu.probs().end());

    // 1e-12 slack so constructions that saturate a constraint exactly
    // (e.g. the bi-uniform pair at c_bar = 1 + epsilon) are not rejected
    // on rounding noise.
    const double cap = params.c_bar / static_cast<double>(pi.m()) + 1e-12;
    if (report.l1 < params.epsilon - 1e-12) {
        report.violations.push_back("l1 separation: ||mu - pi||_1 = " + std::to_string(report.l1) +
                                    " < epsilon = " + std::to_string(params.epsilon));
    }
    if (report.max_pi > cap) {
        report.violations.push_back("rarity bound on pi: max_j pi_j = " + std::to_string(report.max_pi) +
                                    " > c_bar/m = " + std::to_string(cap));
    }
    if (report.max_mu > cap) {
        report.violations.push_back("rarity bound on mu: max_j mu_j = " + std::to_string(report.max_mu) +
                                    " > c_bar/m = " + std::to_string(cap));
    }
    report.ok = report.violations.empty();
    return report;
}

void write_distribution(std::ostream& out, const Distribution& dist) {
    out << dist.m() << "\n";
    out.precision(17);
    for (std::uint32_t j = 0; j < dist.m(); ++j) {
        if (j > 0) out << ' ';
        out << dist[j];
    }
    out << "\n";
}

Distribution read_distribution(std::istream& in) {
    std::uint64_t m = 0;
    if (!(in >> m) || m == 0) {
        throw std::invalid_argument("read_distribution: first line must be a positive alphabet size");
    }
    std::vector<double> probs(m);
    for (std::uint64_t j = 0; j < m; ++j) {
        if (!(in >> probs[j])) {
            throw std::invalid_argument("read_distribution: expected " + std::to_string(m) +
                                        " probabilities, got " + std::to_string(j));
        }
    }
    return Distribution(std::move(probs));
}

Distribution load_distribution(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open distribution file: " + path);
    return read_distribution(in);
}

}  // namespace sparseclass
