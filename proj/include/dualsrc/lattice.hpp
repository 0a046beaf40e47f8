#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace dualsrc {

// Finite signed distribution on a uniform lattice {index * step}.
// Probabilities are stored densely over a contiguous index range so that
// convolutions and reflected-walk iterations stay exact and cache-friendly.
// Immutable after construction; safe to share across threads.
class LatticeDistribution {
public:
    // probs[i] is the mass at value (min_index + i) * step. Leading/trailing
    // zeros are trimmed; negative masses below -1e-15 are rejected.
    LatticeDistribution(double step, std::int64_t min_index, std::vector<double> probs);

    static LatticeDistribution point_mass(double step, std::int64_t index);

    double step() const { return step_; }
    std::int64_t min_index() const { return min_index_; }
    std::int64_t max_index() const { return min_index_ + static_cast<std::int64_t>(probs_.size()) - 1; }
    std::size_t size() const { return probs_.size(); }
    const std::vector<double>& probs() const { return probs_; }

    double value_at(std::size_t i) const { return static_cast<double>(min_index_ + static_cast<std::int64_t>(i)) * step_; }
    double min_value() const { return value_at(0); }
    double max_value() const { return value_at(probs_.size() - 1); }

    double total_mass() const;
    double mean() const;
    double variance() const;

    // P(X <= x)
    double cdf(double x) const;
    // Left-continuous generalized inverse: inf{v on lattice : CDF(v) >= p},
    // with 1e-12 slack against accumulated rounding. Requires p in (0, 1].
    double quantile(double p) const;

    // Atoms with strictly positive mass, in increasing value order.
    std::vector<std::pair<double, double>> atoms() const;

    template <typename F>
    double expect(F&& f) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < probs_.size(); ++i) {
            if (probs_[i] > 0.0) acc += probs_[i] * f(value_at(i));
        }
        return acc;
    }

    LatticeDistribution negated() const;
    LatticeDistribution shifted(std::int64_t index_delta) const;

    // Scales masses so they sum to exactly one.
    LatticeDistribution normalized() const;

    // L1 distance / 2 between two distributions on the same lattice step.
    static double total_variation(const LatticeDistribution& a, const LatticeDistribution& b);

private:
    double step_;
    std::int64_t min_index_;
    std::vector<double> probs_;
};

// Exact distribution of the sum of independent X ~ a and Y ~ b (equal steps).
LatticeDistribution convolve(const LatticeDistribution& a, const LatticeDistribution& b);

}  // namespace dualsrc
