#include "dualsrc/cost.hpp"

#include <cmath>

#include "dualsrc/errors.hpp"

namespace dualsrc {

Instance make_instance(double h, double b, double c_R, double c_E, int L, int L0,
                       DemandDistribution demand) {
    if (!(h > 0.0) || !(b > 0.0))
        throw DomainError(errc::non_positive_cost, "holding and backorder costs must be positive");
    if (c_R < 0.0)
        throw DomainError(errc::cost_order, "regular unit cost must be nonnegative");
    if (!(c_E - c_R > 0.0))
        throw DomainError(errc::cost_order, "express premium c_E - c_R must be positive");
    if (L0 < 0)
        throw DomainError(errc::lead_time_order, "express lead time must be nonnegative");
    if (L < 2 || L <= L0 + 1)
        throw DomainError(errc::lead_time_order, "regular lead time must satisfy L > L0 + 1, L >= 2");
    return Instance{h, b, c_R, c_E, L, L0, std::move(demand)};
}

double holding_backorder_cost(double y, const Instance& inst) {
    return y >= 0.0 ? inst.h * y : -inst.b * y;
}

double expected_holding_backorder(const LatticeDistribution& dist, double shift, const Instance& inst) {
    const double h = inst.h, b = inst.b;
    return dist.expect([=](double v) {
        const double y = shift + v;
        return y >= 0.0 ? h * y : -b * y;
    });
}

ReducedInstance reduce_regular_cost(const Instance& inst) {
    if (inst.c_R == 0.0) return ReducedInstance{inst, 0.0};
    Instance reduced = inst;
    reduced.c_E = inst.c_E - inst.c_R;
    reduced.c_R = 0.0;
    return ReducedInstance{reduced, inst.c_R * inst.demand.mean()};
}

}  // namespace dualsrc
