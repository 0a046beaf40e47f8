#include "dualsrc/sweep.hpp"

#include <algorithm>

#include "dualsrc/bounds.hpp"
#include "dualsrc/errors.hpp"
#include "dualsrc/tbs.hpp"

namespace dualsrc {

std::vector<SweepRow> sweep_leadtime(const Instance& inst_template, const std::vector<int>& L_list,
                                     const SweepConfig& cfg,
                                     const std::function<void(const SweepRow&)>& on_row) {
    for (std::size_t i = 0; i + 1 < L_list.size(); ++i)
        if (L_list[i] >= L_list[i + 1])
            throw std::invalid_argument("sweep: L list must be strictly ascending");
    for (int L : L_list)
        if (L <= inst_template.L0 + 1)
            throw DomainError(errc::lead_time_order, "sweep: every L must exceed L0 + 1");

    const TbsSearchResult tbs = best_tbs(inst_template);
    const GapCertificate cert = certificate(inst_template);
    const double max_bh = std::max(inst_template.b, inst_template.h);

    std::vector<SweepRow> rows;
    for (int L : L_list) {
        SweepRow row;
        row.L = L;
        row.tbs_cost = tbs.policy.cost;

        Instance inst = inst_template;
        inst.L = L;

        try {
            const double states = dp_state_count(inst, cfg.caps);
            if (states <= cfg.state_budget) {
                const DpResult dp = solve_opt_exact(inst, cfg.caps, cfg.dp_tol);
                row.opt_exact = dp.opt_cost;
                row.ratio_vs_opt = row.tbs_cost / dp.opt_cost;
            } else {
                row.note = "dp skipped: state space exceeds budget";
            }
        } catch (const DomainError& e) {
            row.note = std::string("dp failed: ") + e.code();
        }

        try {
            LowerBoundOptions opts;
            opts.alphas = {0.5, 0.8, 0.9, 0.95, discount_schedule(L)};
            std::sort(opts.alphas.begin(), opts.alphas.end());
            opts.alphas.erase(std::unique(opts.alphas.begin(), opts.alphas.end()), opts.alphas.end());
            const LowerBoundResult lb = opt_lower_bound(inst, L, opts);
            row.lower_bound = lb.value;
            row.ratio_vs_lb = row.tbs_cost / lb.value;
        } catch (const DomainError& e) {
            if (!row.note.empty()) row.note += "; ";
            row.note += std::string("lower bound failed: ") + e.code();
        }

        const AdditiveGap gap = additive_gap_bound(cert, inst_template.L0, max_bh, L);
        if (gap.applicable) row.gap_certificate_additive = gap.gap;

        if (on_row) on_row(row);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace dualsrc
