#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dualsrc/cost.hpp"
#include "dualsrc/dp.hpp"

namespace dualsrc {

struct SweepRow {
    int L = 0;
    double tbs_cost = 0.0;
    std::optional<double> opt_exact;
    double lower_bound = 0.0;
    std::optional<double> ratio_vs_opt;
    double ratio_vs_lb = 0.0;
    std::optional<double> gap_certificate_additive;  // only inside its validity region
    std::string note;  // per-row error/skip reason; empty when clean
};

struct SweepConfig {
    double state_budget = 5e7;  // skip the exact DP above this many states
    TruncationSpec caps;
    double dp_tol = 1e-7;
};

// Lead-time sweep: the best TBS policy does not depend on L, so it is
// computed once and repeated per row; the exact DP runs while the truncated
// state space fits the budget; the lower bound always runs, with the
// discount grid extended by the 1 - 5 log(L)/L schedule. Row-level failures
// are recorded in the note column without aborting the sweep.
std::vector<SweepRow> sweep_leadtime(const Instance& inst_template, const std::vector<int>& L_list,
                                     const SweepConfig& cfg = {},
                                     const std::function<void(const SweepRow&)>& on_row = nullptr);

}  // namespace dualsrc
