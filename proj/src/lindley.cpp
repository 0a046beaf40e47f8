#include "dualsrc/lindley.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dualsrc/errors.hpp"

namespace dualsrc {

namespace {

std::int64_t walk_r_index(const WalkSpec& walk) {
    const double q = walk.r / walk.demand.step();
    const double rq = std::round(q);
    if (std::abs(q - rq) > 1e-9 * std::max(1.0, std::abs(q)))
        throw DomainError(errc::off_lattice, "walk parameter r must be a multiple of the lattice step");
    return static_cast<std::int64_t>(rq);
}

// One reflected-walk step: law of max(X + r - D, 0). Dense update over the
// nonnegative lattice; mass pushed below zero piles up at zero.
std::vector<double> reflect_step(const std::vector<double>& cur, std::int64_t r_idx,
                                 const LatticeDistribution& demand) {
    const std::int64_t d_lo = demand.min_index();
    const auto& dp = demand.probs();
    const std::int64_t max_up = r_idx - d_lo;  // the largest possible upward move
    const std::int64_t out_len = static_cast<std::int64_t>(cur.size()) + std::max<std::int64_t>(max_up, 0);
    std::vector<double> next(static_cast<std::size_t>(std::max<std::int64_t>(out_len, 1)), 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) {
        const double p = cur[i];
        if (p == 0.0) continue;
        for (std::size_t j = 0; j < dp.size(); ++j) {
            const double q = dp[j];
            if (q == 0.0) continue;
            std::int64_t to = static_cast<std::int64_t>(i) + r_idx - (d_lo + static_cast<std::int64_t>(j));
            if (to < 0) to = 0;
            next[static_cast<std::size_t>(to)] += p * q;
        }
    }
    while (next.size() > 1 && next.back() == 0.0) next.pop_back();
    return next;
}

double tv_distance(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = std::max(a.size(), b.size());
    double l1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double pa = i < a.size() ? a[i] : 0.0;
        const double pb = i < b.size() ? b[i] : 0.0;
        l1 += std::abs(pa - pb);
    }
    return 0.5 * l1;
}

}  // namespace

WalkSpec make_walk(DemandDistribution demand, double r) {
    if (r < 0.0) throw DomainError(errc::negative_value, "walk parameter r must be nonnegative");
    WalkSpec w{std::move(demand), r};
    walk_r_index(w);
    return w;
}

LatticeDistribution stationary_overshoot(const WalkSpec& walk, double tol, OvershootStats* stats) {
    if (!(tol > 0.0)) throw std::invalid_argument("stationary_overshoot: tol must be positive");
    if (walk.r >= walk.demand.mean())
        throw DomainError(errc::non_negative_drift,
                          "stationary overshoot requires r < E[D] (got r >= mean demand)");
    const std::int64_t r_idx = walk_r_index(walk);
    const double step = walk.demand.step();

    std::vector<double> cur{1.0};
    double discarded = 0.0;
    double tv = 0.0;
    std::size_t iter = 0;
    const std::size_t max_iter = 20'000'000;
    if (r_idx > 0) {
        for (iter = 1; iter <= max_iter; ++iter) {
            std::vector<double> next = reflect_step(cur, r_idx, walk.demand.dist());
            // Drop the largest upper tail of mass < tol, then renormalize.
            double tail = 0.0;
            std::size_t keep = next.size();
            while (keep > 1 && tail + next[keep - 1] < tol) {
                tail += next[keep - 1];
                --keep;
            }
            if (keep < next.size()) {
                next.resize(keep);
                discarded += tail;
                double mass = 0.0;
                for (double p : next) mass += p;
                for (double& p : next) p /= mass;
            }
            tv = tv_distance(cur, next);
            cur = std::move(next);
            if (tv < tol) break;
        }
        if (iter > max_iter)
            throw DomainError(errc::no_convergence, "reflected walk failed to reach a fixed point");
    }
    if (stats) {
        stats->iterations = iter;
        stats->truncated_mass = discarded;
        stats->last_tv = tv;
    }
    return LatticeDistribution(step, 0, std::move(cur));
}

LatticeDistribution prefix_max_dist(const WalkSpec& walk, std::int64_t k) {
    if (k < 1) throw std::invalid_argument("prefix_max_dist: k must be >= 1");
    const std::int64_t r_idx = walk_r_index(walk);
    std::vector<double> cur{1.0};
    for (std::int64_t i = 1; i < k; ++i) cur = reflect_step(cur, r_idx, walk.demand.dist());
    return LatticeDistribution(walk.demand.step(), 0, std::move(cur));
}

std::vector<double> prefix_max_means(const WalkSpec& walk, int k_max) {
    if (k_max < 1) throw std::invalid_argument("prefix_max_means: k_max must be >= 1");
    const std::int64_t r_idx = walk_r_index(walk);
    const double step = walk.demand.step();

    std::vector<double> means;
    means.reserve(static_cast<std::size_t>(k_max));
    std::vector<double> cur{1.0};  // law of Z_1 = 0
    LatticeDistribution walk_sum = walk.demand.dist();  // k-fold demand sum, k = 1

    auto mean_of = [&](const std::vector<double>& probs) {
        double m = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i) m += probs[i] * static_cast<double>(i) * step;
        return m;
    };

    means.push_back(0.0);
    for (int k = 1; k < k_max; ++k) {
        cur = reflect_step(cur, r_idx, walk.demand.dist());
        means.push_back(mean_of(cur));

        // E[max(0, W_k)] with W_k = k*r - (k-fold demand sum)
        const double kr = static_cast<double>(k) * walk.r;
        const double pos_part = walk_sum.expect([kr](double s) { return std::max(0.0, kr - s); });
        const double lhs = means[static_cast<std::size_t>(k)] - means[static_cast<std::size_t>(k - 1)];
        const double rhs = pos_part / static_cast<double>(k);
        if (std::abs(lhs - rhs) > 1e-9 * std::max(1.0, std::abs(rhs)))
            throw std::logic_error("prefix-max increment identity violated; internal error");
        if (k + 1 < k_max) walk_sum = convolve(walk_sum, walk.demand.dist());
    }
    return means;
}

double stationary_mean(const WalkSpec& walk, double tol) {
    return stationary_overshoot(walk, tol).mean();
}

}  // namespace dualsrc
