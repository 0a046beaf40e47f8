#pragma once

#include <cstdint>
#include <vector>

#include "dualsrc/cost.hpp"
#include "dualsrc/dp.hpp"

namespace dualsrc {

enum class InitMode {
    zero_state,         // empty pipelines, zero net inventory
    geometric_backlog,  // initial inventory -sum of G demands, P(G=k) = 2^-k
};

struct SimConfig {
    std::int64_t horizon = 0;
    std::int64_t warmup = -1;  // negative: default 10 * L
    int replications = 1;
    std::uint64_t seed = 0;
    InitMode init = InitMode::zero_state;
    // Test hook: when nonempty, every replication consumes exactly this
    // demand sequence (horizon must not exceed its length).
    std::vector<double> scripted_demands;
};

struct PolicySpec {
    enum class Kind { tbs, constant_order, express_base_stock, table } kind = Kind::tbs;
    double r = 0.0;
    double S = 0.0;
    const PolicyTable* table = nullptr;
};

struct SimResult {
    double mean = 0.0;
    double ci99 = 0.0;  // half-width, normal approximation over replications
    std::vector<double> per_rep;
};

// Simulates the period loop: orders decided from the pre-delivery state, then
// deliveries, then demand and cost. Per-period cost is
// c_R qR_t + c_E qE_t + holding/backorder at end of period (purchase charged
// at order time; long-run averages are unaffected by the timing shift).
// Periods [warmup+1, horizon] are averaged per replication; replications use
// deterministic per-index RNG substreams and may run concurrently.
SimResult simulate(const Instance& inst, const PolicySpec& policy, const SimConfig& cfg);

}  // namespace dualsrc
