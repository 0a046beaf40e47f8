#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dualsrc/lattice.hpp"

namespace dualsrc {

// Nonnegative finite demand distribution on a uniform lattice. Guaranteed to
// have total mass one, at least two support atoms (strictly positive
// variance), and values that are exact multiples of the step.
class DemandDistribution {
public:
    const LatticeDistribution& dist() const { return dist_; }
    double step() const { return dist_.step(); }
    double mean() const { return mean_; }
    double variance() const { return variance_; }
    double max_value() const { return dist_.max_value(); }
    std::int64_t max_index() const { return dist_.max_index(); }
    std::vector<std::pair<double, double>> atoms() const { return dist_.atoms(); }

    // E[exp(-theta * D)]. Terms with theta*value > 700 underflow and are
    // dropped, so theta beyond the guard returns P(D = 0).
    double laplace(double theta) const;

    // min over z of E|z - D|; attained at any median.
    double min_mean_abs_dev() const;

    // Re-expresses the same distribution on a finer lattice. Every support
    // value (and the old step) must be an exact multiple of the new step.
    DemandDistribution with_step(double finer_step) const;

    friend DemandDistribution make_demand(double step,
                                          const std::vector<std::pair<double, double>>& atoms);

private:
    explicit DemandDistribution(LatticeDistribution d);

    LatticeDistribution dist_;
    double mean_ = 0.0;
    double variance_ = 0.0;
};

// Validates, sorts, merges duplicates and normalizes. Throws DomainError with
// codes NegativeValue, OffLattice, ProbSumMismatch (sum off by > 1e-9) or
// ZeroVariance.
DemandDistribution make_demand(double step, const std::vector<std::pair<double, double>>& atoms);

// Exact distribution of the sum of n i.i.d. copies of D, n >= 1.
LatticeDistribution convolve_n(const DemandDistribution& d, std::int64_t n);

}  // namespace dualsrc
