#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "dualsrc/cost.hpp"

namespace dualsrc {

// Truncation of the exact-DP state and action space. Values are in demand
// units; unset fields (NaN / negative) fall back to instance-derived
// defaults: order caps equal the maximum demand value, the position window is
// [-(L+2)*Dmax - S_pad, S_pad + (L+2)*Dmax] with S_pad the critical-fractile
// order-up-to scale of the (L0+1)-period demand plus one Dmax.
struct TruncationSpec {
    double q_cap_R = -1.0;
    double q_cap_E = -1.0;
    double pos_min = std::numeric_limits<double>::quiet_NaN();
    double pos_max = std::numeric_limits<double>::quiet_NaN();
    std::size_t max_sweeps = 500000;
};

// Greedy policy of the truncated average-cost DP: action (qR, qE) per state
// (truncated regular pipeline, expedited inventory position), all on the
// demand lattice.
struct PolicyTable {
    double step = 0.0;
    int L = 0;
    int L0 = 0;
    std::int64_t cap_r_idx = 0;
    std::int64_t cap_e_idx = 0;
    std::int64_t pos_lo_idx = 0;
    std::int64_t pos_hi_idx = 0;
    // Indexed by state id; see state_id(). Values are lattice indices.
    std::vector<std::uint32_t> q_r;
    std::vector<std::uint32_t> q_e;

    int pipeline_dim() const { return L - L0 - 1; }
    std::size_t state_count() const { return q_r.size(); }
    std::size_t state_id(const std::vector<std::int64_t>& pipe_idx, std::int64_t pos_idx) const;
    // Action for a state given in demand units; throws StateEscape if the
    // state lies outside the table.
    std::pair<double, double> action(const std::vector<double>& pipeline, double position) const;
};

struct DpResult {
    double opt_cost = 0.0;       // long-run average cost, c_R * E[D] included
    std::size_t sweeps = 0;
    double span = 0.0;           // final span of the value-difference
    double clamped_mass = 0.0;   // per-period stationary mass hitting the position window
    double cap_hit_mass = 0.0;   // stationary mass of states whose greedy action sits on a cap
    bool clamp_flagged = false;  // clamped_mass > 1e-4
    PolicyTable policy;
};

// Exact (up to truncation) long-run average optimum of the dual-sourcing
// problem by relative value iteration over (pipeline, position) states.
// Stops when the span of successive value differences drops below tol.
// Throws TruncationTooTight when the greedy policy sits on an action cap for
// more than 0.1% of its stationary mass, NoConvergence past max_sweeps.
DpResult solve_opt_exact(const Instance& inst, const TruncationSpec& caps, double tol);

// Number of states the truncated DP would enumerate; used for sweep budgets.
double dp_state_count(const Instance& inst, const TruncationSpec& caps);

// Finite-horizon discounted value function of the single-source backlog
// relaxation with per-period demand D - r (possibly negative), lead time L0,
// zero ordering cost and discount alpha, on a lattice x-grid.
struct ValueFunction1D {
    double r = 0.0;
    double alpha = 0.0;
    int horizon = 0;
    double step = 0.0;
    double origin = 0.0;  // x_i = origin + i * step
    std::vector<double> values;
    double min_value = 0.0;  // inf over x
    double argmin_x = 0.0;   // smallest minimizer on the grid

    double value_at(std::size_t i) const { return origin + static_cast<double>(i) * step; }
};

struct GridSpec {
    double x_lo = 0.0;
    double x_hi = 0.0;
};

// Backward recursion V^0 = 0,
//   V^n(x) = inf_{y >= x} ( E[cost(y - sum_{k<=L0+1}(D_k - r))] + alpha E[V^{n-1}(y - (D - r))] ).
// r may be off the demand lattice; each stage then lives on its own shifted
// grid so no interpolation is ever needed. Evaluations below the grid use the
// flat continuation, above it a linear bound with slope max(b,h)/(1-alpha).
// Throws GridTooNarrow if any stage's unconstrained minimizer touches the
// grid boundary. An optional per-stage callback observes V^1..V^n in order.
ValueFunction1D solve_single_source(const Instance& inst, double r, double alpha, int n,
                                    const GridSpec* grid = nullptr,
                                    const std::function<void(const ValueFunction1D&)>& on_stage = nullptr);

struct LowerBoundOptions {
    std::vector<double> alphas;    // default {0.5, 0.8, 0.9, 0.95} + schedule(L)
    std::vector<double> r_values;  // default [0, E[D]] at step delta/4, endpoint included
};

struct LowerBoundResult {
    double value = 0.0;  // includes the c_R * E[D] part
    double best_alpha = 0.0;
    double best_r = 0.0;  // argmin r at the best alpha
    std::vector<std::pair<double, double>> per_alpha;  // (alpha, bound at alpha)
};

// Certified lower bound on the optimal long-run average cost:
//   max over alpha of min over r in [0, E[D]] of
//     c (E[D] - r) + (1 - alpha) * inf_x V_alpha^{L-L0}(r, x),
// valid because the bound holds for every alpha at the (unknown) mean regular
// order rate of an optimal policy, which lies in [0, E[D]].
LowerBoundResult opt_lower_bound(const Instance& inst, int L, const LowerBoundOptions& opts = {});

// Discount schedule 1 - 5 log(L) / L used by the sweep, clamped into (0.5, 1).
double discount_schedule(int L);

}  // namespace dualsrc
