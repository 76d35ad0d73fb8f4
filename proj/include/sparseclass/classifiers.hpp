#pragma once

#include <cstdint>
#include <vector>

#include "sparseclass/distribution.hpp"
#include "sparseclass/histogram.hpp"

namespace sparseclass {

// The triple of count vectors the classifiers consume: two training
// histograms of equal total N and one test histogram of total n.
struct JointCounts {
    Histogram ax;
    Histogram ay;
    Histogram az;

    JointCounts(Histogram ax_, Histogram ay_, Histogram az_);
};

// phi[i-1] = number of symbols appearing exactly i times.
struct Profile {
    std::vector<std::uint64_t> phi;

    bool operator==(const Profile&) const = default;
};

// F = ||az/n - ax/N||^2 - ||az/n - ay/N||^2, evaluated over the union of
// supports with compensated summation (the terms are O(1/m)-scale and
// cancellation-prone).
double f_statistic(const Histogram& ax, const Histogram& ay, const Histogram& az);
double f_statistic(const JointCounts& jc);

// Weighted coincidence statistic: per symbol,
//   + I{ax=2, az=0}/N^2 + I{ax=0, az=2}/n^2 - I{ax=1, az=1}/(nN)
//   + I{ay=1, az=1}/(nN) - I{ay=0, az=2}/n^2 - I{ay=2, az=0}/N^2.
// One pass over the union of supports; requires N >= 2 and n >= 2.
double t_statistic(const Histogram& ax, const Histogram& ay, const Histogram& az);
double t_statistic(const JointCounts& jc);

// Decisions: 1 attributes the test sample to the Y-source, 0 to the
// X-source; ties (statistic exactly 0) decide 1.
int classify_f(const Histogram& ax, const Histogram& ay, const Histogram& az);
int classify_f(const JointCounts& jc);
int classify_t(const Histogram& ax, const Histogram& ay, const Histogram& az);
int classify_t(const JointCounts& jc);

// Genie baseline with known source distributions; ignores training data.
// Decides 1 iff sum_j az_j (log mu_j - log pi_j) >= 0.
int oracle_lrt(const Histogram& az, const Distribution& pi, const Distribution& mu);

Profile profile(const Histogram& h);

// True iff no symbol appears more than once in either training histogram.
bool event_A(const Histogram& ax, const Histogram& ay);

// True iff the test histogram has no repeats and is disjoint from both
// training supports.
bool event_B(const Histogram& ax, const Histogram& ay, const Histogram& az);
bool event_B(const JointCounts& jc);

}  // namespace sparseclass
