#include "dualsrc/demand.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "dualsrc/errors.hpp"

namespace dualsrc {

namespace {

// Nearest lattice index of value, or throws OffLattice (1e-9 relative slack).
std::int64_t lattice_index(double value, double step) {
    const double q = value / step;
    const double r = std::round(q);
    if (std::abs(q - r) > 1e-9 * std::max(1.0, std::abs(q))) {
        throw DomainError(errc::off_lattice, "value " + std::to_string(value) +
                                                 " is not a multiple of step " + std::to_string(step));
    }
    return static_cast<std::int64_t>(r);
}

}  // namespace

DemandDistribution::DemandDistribution(LatticeDistribution d) : dist_(std::move(d)) {
    mean_ = dist_.mean();
    variance_ = dist_.variance();
}

DemandDistribution make_demand(double step, const std::vector<std::pair<double, double>>& atoms) {
    if (!(step > 0.0) || !std::isfinite(step))
        throw DomainError(errc::off_lattice, "lattice step must be positive and finite");
    if (atoms.empty())
        throw DomainError(errc::prob_sum_mismatch, "demand needs at least one atom");

    std::map<std::int64_t, double> acc;
    double sum = 0.0;
    for (const auto& [value, prob] : atoms) {
        if (!(prob > 0.0) || !std::isfinite(prob))
            throw DomainError(errc::prob_sum_mismatch, "atom probabilities must be positive");
        if (value < -1e-12)
            throw DomainError(errc::negative_value, "demand values must be nonnegative");
        const std::int64_t idx = lattice_index(value, step);
        if (idx < 0) throw DomainError(errc::negative_value, "demand values must be nonnegative");
        acc[idx] += prob;
        sum += prob;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw DomainError(errc::prob_sum_mismatch,
                          "atom probabilities sum to " + std::to_string(sum) + ", expected 1");
    if (acc.size() < 2)
        throw DomainError(errc::zero_variance, "demand must have at least two distinct atoms");

    const std::int64_t lo = acc.begin()->first;
    const std::int64_t hi = acc.rbegin()->first;
    std::vector<double> probs(static_cast<std::size_t>(hi - lo + 1), 0.0);
    for (const auto& [idx, p] : acc) probs[static_cast<std::size_t>(idx - lo)] = p / sum;
    return DemandDistribution(LatticeDistribution(step, lo, std::move(probs)));
}

double DemandDistribution::laplace(double theta) const {
    if (theta < 0.0) throw std::invalid_argument("laplace: theta must be nonnegative");
    return dist_.expect([theta](double v) {
        const double e = theta * v;
        return e > 700.0 ? 0.0 : std::exp(-e);
    });
}

double DemandDistribution::min_mean_abs_dev() const {
    const double median = dist_.quantile(0.5);
    return dist_.expect([median](double v) { return std::abs(median - v); });
}

DemandDistribution DemandDistribution::with_step(double finer_step) const {
    std::vector<std::pair<double, double>> out;
    for (const auto& [v, p] : atoms()) out.emplace_back(v, p);
    // lattice_index inside make_demand re-validates divisibility
    return make_demand(finer_step, out);
}

LatticeDistribution convolve_n(const DemandDistribution& d, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("convolve_n: n must be >= 1");
    LatticeDistribution acc = d.dist();
    for (std::int64_t i = 1; i < n; ++i) acc = convolve(acc, d.dist());
    return acc;
}

}  // namespace dualsrc
