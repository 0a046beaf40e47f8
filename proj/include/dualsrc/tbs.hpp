#pragma once

#include <utility>
#include <vector>

#include "dualsrc/cost.hpp"

namespace dualsrc {

// Tailored base-surge policy: constant order r from the regular source every
// period, order-up-to level S for the express source on the expedited
// inventory position.
struct TbsPolicy {
    double r = 0.0;
    double S = 0.0;
    double cost = 0.0;  // long-run average cost, includes the c_R * E[D] part
};

struct TbsConfig {
    double overshoot_tol = 1e-12;  // fixed-point tolerance for the stationary overshoot
    int grid_refine = 0;           // halve the r-step this many times around the coarse optimum
};

// Long-run average cost of the (r, S) policy:
//   c * (E[D] - r) + E[ cost(I_inf + S - sum of (L0+1) demands) ] + c_R * E[D],
// where I_inf is the stationary overshoot of the constant-order-r pipeline.
// Requires 0 <= r < E[D] on the demand lattice.
double tbs_cost(const Instance& inst, double r, double S, const TbsConfig& cfg = {});

// Optimal order-up-to level for fixed r: the b/(b+h) quantile of
// (sum of (L0+1) demands - I_inf). Returns (S*, cost at S*).
std::pair<double, double> best_surge_level(const Instance& inst, double r, const TbsConfig& cfg = {});

struct TbsSearchResult {
    TbsPolicy policy;
    // (r, F(r)) for every r evaluated during the search, in increasing r.
    std::vector<std::pair<double, double>> f_profile;
};

// Minimizes F(r) = min_S cost(r, S) over the lattice grid
// {0, step, 2*step, ...} intersected with [0, E[D] - step] (r = 0 always
// included). F is convex in r, so a ternary search over the grid plus an
// exhaustive check of the surrounding five grid points finds the argmin; ties
// break toward smaller r. With grid_refine = k the search re-runs on the
// lattice refined to step / 2^k inside one coarse step of the optimum.
TbsSearchResult best_tbs(const Instance& inst, const TbsConfig& cfg = {});

// F(r) on the full search grid; the exhaustive profile used by the CLI.
std::vector<std::pair<double, double>> tbs_f_profile(const Instance& inst, const TbsConfig& cfg = {});

}  // namespace dualsrc
