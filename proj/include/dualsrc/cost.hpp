#pragma once

#include "dualsrc/demand.hpp"
#include "dualsrc/lattice.hpp"

namespace dualsrc {

// Cost and lead-time parameters of a dual-sourcing instance. The regular
// source is slow (lead time L) and cheap, the express source fast (L0) and
// pricier: c_E > c_R, L > L0 + 1.
struct Instance {
    double h;    // holding cost / unit / period
    double b;    // backorder cost / unit / period
    double c_R;  // regular unit purchase cost
    double c_E;  // express unit purchase cost
    int L;       // regular lead time, >= 2
    int L0;      // express lead time, >= 0
    DemandDistribution demand;

    double premium() const { return c_E - c_R; }  // c = c_E - c_R > 0
};

// Validates invariants; throws DomainError with codes LeadTimeOrder
// (L <= L0 + 1), CostOrder (c_E <= c_R) or NonPositiveCost (h or b <= 0).
Instance make_instance(double h, double b, double c_R, double c_E, int L, int L0,
                       DemandDistribution demand);

// h*y^+ + b*y^-
double holding_backorder_cost(double y, const Instance& inst);

// E[cost(shift + X)], X ~ dist; exact finite sum.
double expected_holding_backorder(const LatticeDistribution& dist, double shift, const Instance& inst);

// Equivalent instance with c_R = 0 and c_E' = c_E - c_R, plus the additive
// long-run-average offset c_R * E[D]. Every demanded unit is eventually
// purchased from one of the sources, so the c_R part of the purchase bill is
// a constant rate and only the premium c matters for optimization.
struct ReducedInstance {
    Instance instance;
    double offset;
};
ReducedInstance reduce_regular_cost(const Instance& inst);

}  // namespace dualsrc
