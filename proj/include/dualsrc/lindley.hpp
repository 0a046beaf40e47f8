#pragma once

#include <cstdint>
#include <vector>

#include "dualsrc/demand.hpp"
#include "dualsrc/lattice.hpp"

namespace dualsrc {

// Random walk with increments r - D per step: W_k = sum_{j<=k} (r - D_j).
// Tracks the reflected walk / running-maximum quantities that drive the
// steady-state of a constant-order-r regular pipeline.
struct WalkSpec {
    DemandDistribution demand;
    double r;  // nonnegative, a multiple of the demand lattice step
};

WalkSpec make_walk(DemandDistribution demand, double r);

struct OvershootStats {
    std::size_t iterations = 0;
    double truncated_mass = 0.0;  // running bound on mass dropped by tail truncation
    double last_tv = 0.0;         // total-variation change at the final iteration
};

// Distribution of sup_{j>=0} (j*r - sum_{i<=j} D_i), the stationary overshoot
// of the reflected walk. Requires strict negative drift (r < E[D]); otherwise
// the supremum is almost surely infinite and NonNegativeDrift is thrown.
// Fixed point of nu -> law of max(X + r - D, 0) found by iterating from the
// point mass at zero until the total-variation change drops below tol. Each
// iteration drops an upper tail of mass < tol and renormalizes; the total
// discarded mass is reported through stats.
LatticeDistribution stationary_overshoot(const WalkSpec& walk, double tol = 1e-12,
                                         OvershootStats* stats = nullptr);

// Exact distribution of max over the first k-1 partial sums (including the
// empty sum 0), computed by k-1 reflected-walk iterations. k >= 1.
LatticeDistribution prefix_max_dist(const WalkSpec& walk, std::int64_t k);

// Means M_k = E[max_{i in [0,k-1]} W_i] for k = 1..k_max. Verifies the
// random-walk increment identity M_{k+1} - M_k = E[max(0, W_k)] / k against
// the k-fold demand convolution as an internal consistency check.
std::vector<double> prefix_max_means(const WalkSpec& walk, int k_max);

// M_inf = E[sup_j W_j]; requires r < E[D].
double stationary_mean(const WalkSpec& walk, double tol = 1e-12);

}  // namespace dualsrc
