#include "dualsrc/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dualsrc/errors.hpp"

namespace dualsrc {

LatticeDistribution::LatticeDistribution(double step, std::int64_t min_index, std::vector<double> probs)
    : step_(step), min_index_(min_index), probs_(std::move(probs)) {
    if (!(step_ > 0.0)) throw std::invalid_argument("lattice step must be positive");
    if (probs_.empty()) throw std::invalid_argument("lattice distribution needs at least one atom");
    for (double p : probs_) {
        if (p < -1e-15 || !std::isfinite(p)) throw std::invalid_argument("lattice probability out of range");
    }
    // Trim zero margins so min/max reflect the actual support.
    std::size_t lo = 0;
    while (lo + 1 < probs_.size() && probs_[lo] <= 0.0) ++lo;
    std::size_t hi = probs_.size();
    while (hi > lo + 1 && probs_[hi - 1] <= 0.0) --hi;
    if (lo > 0 || hi < probs_.size()) {
        probs_ = std::vector<double>(probs_.begin() + static_cast<std::ptrdiff_t>(lo),
                                     probs_.begin() + static_cast<std::ptrdiff_t>(hi));
        min_index_ += static_cast<std::int64_t>(lo);
    }
    for (double& p : probs_) {
        if (p < 0.0) p = 0.0;
    }
}

LatticeDistribution LatticeDistribution::point_mass(double step, std::int64_t index) {
    return LatticeDistribution(step, index, {1.0});
}

double LatticeDistribution::total_mass() const {
    double s = 0.0;
    for (double p : probs_) s += p;
    return s;
}

double LatticeDistribution::mean() const {
    double s = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) s += probs_[i] * value_at(i);
    return s;
}

double LatticeDistribution::variance() const {
    const double m = mean();
    double s = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        const double d = value_at(i) - m;
        s += probs_[i] * d * d;
    }
    return s;
}

double LatticeDistribution::cdf(double x) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        if (value_at(i) <= x + 1e-12 * step_) acc += probs_[i];
        else break;
    }
    return acc;
}

double LatticeDistribution::quantile(double p) const {
    if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("quantile level must be in (0,1]");
    double acc = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        acc += probs_[i];
        if (acc + 1e-12 >= p && probs_[i] > 0.0) return value_at(i);
    }
    // Rounding left us short of p; the top atom is the inf by convention.
    return max_value();
}

std::vector<std::pair<double, double>> LatticeDistribution::atoms() const {
    std::vector<std::pair<double, double>> out;
    out.reserve(probs_.size());
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        if (probs_[i] > 0.0) out.emplace_back(value_at(i), probs_[i]);
    }
    return out;
}

LatticeDistribution LatticeDistribution::negated() const {
    std::vector<double> rev(probs_.rbegin(), probs_.rend());
    return LatticeDistribution(step_, -max_index(), std::move(rev));
}

LatticeDistribution LatticeDistribution::shifted(std::int64_t index_delta) const {
    return LatticeDistribution(step_, min_index_ + index_delta, probs_);
}

LatticeDistribution LatticeDistribution::normalized() const {
    const double m = total_mass();
    if (!(m > 0.0)) throw std::invalid_argument("cannot normalize zero-mass distribution");
    std::vector<double> scaled(probs_);
    for (double& p : scaled) p /= m;
    return LatticeDistribution(step_, min_index_, std::move(scaled));
}

double LatticeDistribution::total_variation(const LatticeDistribution& a, const LatticeDistribution& b) {
    if (a.step_ != b.step_) throw std::invalid_argument("total_variation: lattice steps differ");
    const std::int64_t lo = std::min(a.min_index_, b.min_index_);
    const std::int64_t hi = std::max(a.max_index(), b.max_index());
    double l1 = 0.0;
    for (std::int64_t j = lo; j <= hi; ++j) {
        const double pa = (j >= a.min_index_ && j <= a.max_index())
                              ? a.probs_[static_cast<std::size_t>(j - a.min_index_)] : 0.0;
        const double pb = (j >= b.min_index_ && j <= b.max_index())
                              ? b.probs_[static_cast<std::size_t>(j - b.min_index_)] : 0.0;
        l1 += std::abs(pa - pb);
    }
    return 0.5 * l1;
}

LatticeDistribution convolve(const LatticeDistribution& a, const LatticeDistribution& b) {
    if (a.step() != b.step()) throw std::invalid_argument("convolve: lattice steps differ");
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    const auto& pa = a.probs();
    const auto& pb = b.probs();
    for (std::size_t i = 0; i < pa.size(); ++i) {
        if (pa[i] == 0.0) continue;
        for (std::size_t j = 0; j < pb.size(); ++j) {
            out[i + j] += pa[i] * pb[j];
        }
    }
    return LatticeDistribution(a.step(), a.min_index() + b.min_index(), std::move(out));
}

}  // namespace dualsrc
