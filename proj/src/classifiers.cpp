#include "sparseclass/classifiers.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sparseclass/stats.hpp"

namespace sparseclass {

JointCounts::JointCounts(Histogram ax_, Histogram ay_, Histogram az_)
    : ax(std::move(ax_)), ay(std::move(ay_)), az(std::move(az_)) {
    if (ax.m() != ay.m() || ax.m() != az.m()) {
        throw std::invalid_argument("JointCounts: histograms must share the alphabet");
    }
    if (ax.total() != ay.total()) {
        throw std::invalid_argument("JointCounts: training histograms must have equal totals");
    }
}

namespace {

void require_common_alphabet(const Histogram& ax, const Histogram& ay, const Histogram& az) {
    if (ax.m() != ay.m() || ax.m() != az.m()) {
        throw std::invalid_argument("histograms must share the alphabet");
    }
    if (ax.total() != ay.total()) {
        throw std::invalid_argument("training histograms must have equal totals");
    }
}

// F = ||az/n - ax/N||^2 - ||az/n - ay/N||^2 expands to
//   (S_xx - S_yy)/N^2 - 2 S_z(x-y)/(nN),
// so the numerator over the common denominator n N^2 is an exact integer.
// The values are O(1/m)-scale differences, and this keeps ties (F exactly
// zero) exact instead of leaving them to cancellation noise.
__int128 f_numerator(const Histogram& ax, const Histogram& ay, const Histogram& az) {
    std::int64_t sq_x = 0, sq_y = 0, cross = 0;
    for (std::uint32_t j : ax.support()) {
        const std::int64_t c = ax.count(j);
        sq_x += c * c;
    }
    for (std::uint32_t j : ay.support()) {
        const std::int64_t c = ay.count(j);
        sq_y += c * c;
    }
    for (std::uint32_t j : az.support()) {
        cross += static_cast<std::int64_t>(az.count(j)) *
                 (static_cast<std::int64_t>(ax.count(j)) - static_cast<std::int64_t>(ay.count(j)));
    }
    const auto N = static_cast<__int128>(ax.total());
    const auto n = static_cast<__int128>(az.total());
    return n * (sq_x - sq_y) - 2 * N * cross;
}

// T over the common denominator N^2 n^2; the three tallies are exact
// integer counts of fired indicators.
struct TTallies {
    std::int64_t train2 = 0;   // I{ax=2, az=0} - I{ay=2, az=0}
    std::int64_t test2 = 0;    // I{ax=0, az=2} - I{ay=0, az=2}
    std::int64_t cross11 = 0;  // I{ay=1, az=1} - I{ax=1, az=1}
};

TTallies t_tallies(const Histogram& ax, const Histogram& ay, const Histogram& az) {
    TTallies t;
    for (std::uint32_t j : ax.support()) {
        t.train2 += ax.count(j) == 2 && az.count(j) == 0;
    }
    for (std::uint32_t j : ay.support()) {
        t.train2 -= ay.count(j) == 2 && az.count(j) == 0;
    }
    for (std::uint32_t j : az.support()) {
        const std::uint32_t z = az.count(j);
        if (z == 1) {
            t.cross11 += (ay.count(j) == 1) - (ax.count(j) == 1);
        } else if (z == 2) {
            t.test2 += (ax.count(j) == 0) - (ay.count(j) == 0);
        }
    }
    return t;
}

__int128 t_numerator(const TTallies& t, std::uint64_t N, std::uint64_t n) {
    const auto N2 = static_cast<__int128>(N) * N;
    const auto n2 = static_cast<__int128>(n) * n;
    return static_cast<__int128>(t.train2) * n2 + static_cast<__int128>(t.test2) * N2 +
           static_cast<__int128>(t.cross11) * static_cast<__int128>(N) * n;
}

}  // namespace

double f_statistic(const Histogram& ax, const Histogram& ay, const Histogram& az) {
    require_common_alphabet(ax, ay, az);
    if (ax.total() == 0 || az.total() == 0) {
        throw std::invalid_argument("f_statistic: totals must be positive");
    }
    const double N = static_cast<double>(ax.total());
    const double n = static_cast<double>(az.total());
    return static_cast<double>(f_numerator(ax, ay, az)) / (n * N * N);
}

double f_statistic(const JointCounts& jc) { return f_statistic(jc.ax, jc.ay, jc.az); }

double t_statistic(const Histogram& ax, const Histogram& ay, const Histogram& az) {
    require_common_alphabet(ax, ay, az);
    if (ax.total() < 2 || az.total() < 2) {
        throw std::invalid_argument("t_statistic: totals must be at least 2");
    }
    const TTallies t = t_tallies(ax, ay, az);
    const double N = static_cast<double>(ax.total());
    const double n = static_cast<double>(az.total());
    return static_cast<double>(t_numerator(t, ax.total(), az.total())) / (N * N * n * n);
}

double t_statistic(const JointCounts& jc) { return t_statistic(jc.ax, jc.ay, jc.az); }

int classify_f(const Histogram& ax, const Histogram& ay, const Histogram& az) {
    require_common_alphabet(ax, ay, az);
    if (ax.total() == 0 || az.total() == 0) {
        throw std::invalid_argument("classify_f: totals must be positive");
    }
    return f_numerator(ax, ay, az) >= 0 ? 1 : 0;
}

int classify_f(const JointCounts& jc) { return classify_f(jc.ax, jc.ay, jc.az); }

int classify_t(const Histogram& ax, const Histogram& ay, const Histogram& az) {
    require_common_alphabet(ax, ay, az);
    if (ax.total() < 2 || az.total() < 2) {
        throw std::invalid_argument("classify_t: totals must be at least 2");
    }
    return t_numerator(t_tallies(ax, ay, az), ax.total(), az.total()) >= 0 ? 1 : 0;
}

int classify_t(const JointCounts& jc) { return classify_t(jc.ax, jc.ay, jc.az); }

int oracle_lrt(const Histogram& az, const Distribution& pi, const Distribution& mu) {
    if (az.m() != pi.m() || az.m() != mu.m()) {
        throw std::invalid_argument("oracle_lrt: alphabet size mismatch");
    }
    bool pi_impossible = false;
    bool mu_impossible = false;
    CompensatedSum log_pi, log_mu;
    for (std::uint32_t j : az.support()) {
        const double c = static_cast<double>(az.count(j));
        const double pj = pi[j];
        const double mj = mu[j];
        if (pj <= 0.0 && mj <= 0.0) {
            throw std::invalid_argument(
                "oracle_lrt: observed symbol has zero probability under both sources");
        }
        if (pj <= 0.0) pi_impossible = true;
        else log_pi.add(c * std::log(pj));
        if (mj <= 0.0) mu_impossible = true;
        else log_mu.add(c * std::log(mj));
    }
    if (mu_impossible) return pi_impossible ? 1 : 0;
    if (pi_impossible) return 1;
    return log_mu.value() >= log_pi.value() ? 1 : 0;
}

Profile profile(const Histogram& h) {
    Profile result;
    for (std::uint32_t j : h.support()) {
        const std::uint32_t c = h.count(j);
        if (c > result.phi.size()) result.phi.resize(c, 0);
        ++result.phi[c - 1];
    }
#ifndef NDEBUG
    std::uint64_t mass = 0;
    for (std::size_t i = 0; i < result.phi.size(); ++i) mass += (i + 1) * result.phi[i];
    assert(mass == h.total());
#endif
    return result;
}

bool event_A(const Histogram& ax, const Histogram& ay) {
    for (std::uint32_t j : ax.support()) {
        if (ax.count(j) > 1) return false;
    }
    for (std::uint32_t j : ay.support()) {
        if (ay.count(j) > 1) return false;
    }
    return true;
}

bool event_B(const Histogram& ax, const Histogram& ay, const Histogram& az) {
    if (ax.m() != ay.m() || ax.m() != az.m()) {
        throw std::invalid_argument("event_B: alphabet size mismatch");
    }
    for (std::uint32_t j : az.support()) {
        if (az.count(j) > 1) return false;
        if (ax.count(j) != 0 || ay.count(j) != 0) return false;
    }
    return true;
}

bool event_B(const JointCounts& jc) { return event_B(jc.ax, jc.ay, jc.az); }

}  // namespace sparseclass
