#include "dualsrc/tbs.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "dualsrc/errors.hpp"
#include "dualsrc/lindley.hpp"

namespace dualsrc {

namespace {

struct REval {
    double s_star;
    double cost;
};

// Evaluates the newsvendor-in-S structure at fixed r. The end-of-period
// inventory under (r, S) is S + I_inf - Y with Y the (L0+1)-fold demand sum,
// so the best S is the b/(b+h) quantile of Y - I_inf.
REval evaluate_r(const Instance& inst, double r, const TbsConfig& cfg, const LatticeDistribution& lead_sum,
                 double offset, double premium) {
    const WalkSpec walk = make_walk(inst.demand, r);
    const LatticeDistribution overshoot = stationary_overshoot(walk, cfg.overshoot_tol);
    const LatticeDistribution shortfall = convolve(lead_sum, overshoot.negated());  // Y - I_inf
    const double s_star = shortfall.quantile(inst.b / (inst.b + inst.h));
    const double g_term = shortfall.expect([&](double t) {
        const double y = s_star - t;
        return y >= 0.0 ? inst.h * y : -inst.b * y;
    });
    const double cost = premium * (inst.demand.mean() - r) + g_term + offset;
    return REval{s_star, cost};
}

std::vector<double> search_grid(const DemandDistribution& demand) {
    const double step = demand.step();
    const double top = demand.mean() - step;
    std::vector<double> grid{0.0};
    for (std::int64_t i = 1;; ++i) {
        const double r = static_cast<double>(i) * step;
        if (r > top + 1e-12 * step) break;
        grid.push_back(r);
    }
    return grid;
}

}  // namespace

double tbs_cost(const Instance& inst, double r, double S, const TbsConfig& cfg) {
    const ReducedInstance red = reduce_regular_cost(inst);
    const WalkSpec walk = make_walk(inst.demand, r);
    const LatticeDistribution overshoot = stationary_overshoot(walk, cfg.overshoot_tol);
    const LatticeDistribution lead_sum = convolve_n(inst.demand, inst.L0 + 1);
    const LatticeDistribution net = convolve(overshoot, lead_sum.negated());  // I_inf - Y
    const double g_term = expected_holding_backorder(net, S, inst);
    return red.instance.premium() * (inst.demand.mean() - r) + g_term + red.offset;
}

std::pair<double, double> best_surge_level(const Instance& inst, double r, const TbsConfig& cfg) {
    const ReducedInstance red = reduce_regular_cost(inst);
    const LatticeDistribution lead_sum = convolve_n(inst.demand, inst.L0 + 1);
    const REval e = evaluate_r(inst, r, cfg, lead_sum, red.offset, red.instance.premium());
    return {e.s_star, e.cost};
}

TbsSearchResult best_tbs(const Instance& inst, const TbsConfig& cfg) {
    const ReducedInstance red = reduce_regular_cost(inst);
    const double premium = red.instance.premium();
    const LatticeDistribution lead_sum = convolve_n(inst.demand, inst.L0 + 1);

    std::vector<double> grid = search_grid(inst.demand);
    std::map<std::size_t, REval> memo;
    auto f = [&](std::size_t i) -> const REval& {
        auto it = memo.find(i);
        if (it == memo.end()) {
            it = memo.emplace(i, evaluate_r(inst, grid[i], cfg, lead_sum, red.offset, premium)).first;
        }
        return it->second;
    };

    // Ternary search over the convex grid profile, then an exhaustive pass on
    // the five surrounding points. Ties break toward smaller r.
    std::size_t lo = 0, hi = grid.size() - 1;
    while (hi - lo > 2) {
        const std::size_t m1 = lo + (hi - lo) / 3;
        const std::size_t m2 = hi - (hi - lo) / 3;
        if (f(m1).cost <= f(m2).cost) hi = m2; else lo = m1;
    }
    std::size_t best = lo;
    for (std::size_t i = lo; i <= hi; ++i)
        if (f(i).cost < f(best).cost) best = i;
    const std::size_t wlo = best >= 2 ? best - 2 : 0;
    const std::size_t whi = std::min(best + 2, grid.size() - 1);
    for (std::size_t i = wlo; i <= whi; ++i)
        if (f(i).cost < f(best).cost) best = i;

    TbsPolicy pol{grid[best], f(best).s_star, f(best).cost};

    TbsSearchResult out;
    for (const auto& [i, e] : memo) out.f_profile.emplace_back(grid[i], e.cost);

    if (cfg.grid_refine > 0) {
        const double coarse_step = inst.demand.step();
        const double fine_step = coarse_step / std::pow(2.0, cfg.grid_refine);
        const DemandDistribution fine = inst.demand.with_step(fine_step);
        Instance fine_inst = inst;
        fine_inst.demand = fine;
        const LatticeDistribution fine_lead = convolve_n(fine, inst.L0 + 1);
        const double r_lo = std::max(0.0, pol.r - coarse_step);
        const double r_hi = std::min(fine.mean() - fine_step, pol.r + coarse_step);
        TbsConfig sub = cfg;
        sub.grid_refine = 0;
        for (std::int64_t i = 0;; ++i) {
            const double r = r_lo + static_cast<double>(i) * fine_step;
            if (r > r_hi + 1e-12 * fine_step) break;
            const REval e = evaluate_r(fine_inst, r, sub, fine_lead, red.offset, premium);
            out.f_profile.emplace_back(r, e.cost);
            if (e.cost < pol.cost || (e.cost == pol.cost && r < pol.r)) pol = TbsPolicy{r, e.s_star, e.cost};
        }
        std::sort(out.f_profile.begin(), out.f_profile.end());
        out.f_profile.erase(std::unique(out.f_profile.begin(), out.f_profile.end(),
                                        [](const auto& a, const auto& b) { return a.first == b.first; }),
                            out.f_profile.end());
    }

    out.policy = pol;
    return out;
}

std::vector<std::pair<double, double>> tbs_f_profile(const Instance& inst, const TbsConfig& cfg) {
    const ReducedInstance red = reduce_regular_cost(inst);
    const LatticeDistribution lead_sum = convolve_n(inst.demand, inst.L0 + 1);
    std::vector<std::pair<double, double>> out;
    for (double r : search_grid(inst.demand)) {
        const REval e = evaluate_r(inst, r, cfg, lead_sum, red.offset, red.instance.premium());
        out.emplace_back(r, e.cost);
    }
    return out;
}

}  // namespace dualsrc
