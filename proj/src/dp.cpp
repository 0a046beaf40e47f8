#include "dualsrc/dp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dualsrc/errors.hpp"
#include "dualsrc/parallel.hpp"

namespace dualsrc {

namespace {

std::int64_t to_index(double value, double step, const char* what) {
    const double q = value / step;
    const double r = std::round(q);
    if (std::abs(q - r) > 1e-9 * std::max(1.0, std::abs(q)))
        throw DomainError(errc::off_lattice, std::string(what) + " must be on the demand lattice");
    return static_cast<std::int64_t>(r);
}

// Resolved truncation geometry, all in lattice indices.
struct Geometry {
    std::int64_t cap_r = 0;   // regular order in [0, cap_r]
    std::int64_t cap_e = 0;   // express order in [0, cap_e]
    std::int64_t pos_lo = 0;  // position window [pos_lo, pos_hi]
    std::int64_t pos_hi = 0;
    int pd = 0;               // pipeline dimension L - L0 - 1
    std::int64_t n_pos = 0;
    std::int64_t n_pipe = 0;  // (cap_r + 1)^pd
    std::size_t n_states = 0;
};

Geometry resolve_geometry(const Instance& inst, const TruncationSpec& caps) {
    Geometry g;
    const double step = inst.demand.step();
    const std::int64_t dmax = inst.demand.max_index();
    g.cap_r = caps.q_cap_R >= 0.0 ? to_index(caps.q_cap_R, step, "q_cap_R") : dmax;
    g.cap_e = caps.q_cap_E >= 0.0 ? to_index(caps.q_cap_E, step, "q_cap_E") : dmax;
    if (g.cap_r < 1 || g.cap_e < 0)
        throw DomainError(errc::truncation_too_tight, "order caps leave no usable actions");
    g.pd = inst.L - inst.L0 - 1;

    if (std::isnan(caps.pos_min) || std::isnan(caps.pos_max)) {
        const LatticeDistribution lead = convolve_n(inst.demand, inst.L0 + 1);
        const std::int64_t surge = to_index(lead.quantile(inst.b / (inst.b + inst.h)), step, "fractile") + dmax;
        const std::int64_t span = static_cast<std::int64_t>(inst.L + 2) * dmax;
        g.pos_lo = std::isnan(caps.pos_min) ? -(span + surge) : to_index(caps.pos_min, step, "pos_min");
        g.pos_hi = std::isnan(caps.pos_max) ? span + surge : to_index(caps.pos_max, step, "pos_max");
    } else {
        g.pos_lo = to_index(caps.pos_min, step, "pos_min");
        g.pos_hi = to_index(caps.pos_max, step, "pos_max");
    }
    if (g.pos_lo > 0 || g.pos_hi < g.cap_e)
        throw DomainError(errc::truncation_too_tight, "position window must contain [0, q_cap_E]");
    g.n_pos = g.pos_hi - g.pos_lo + 1;
    g.n_pipe = 1;
    for (int i = 0; i < g.pd; ++i) {
        if (g.n_pipe > static_cast<std::int64_t>(1) << 40)
            throw DomainError(errc::truncation_too_tight, "pipeline state space overflows the budget");
        g.n_pipe *= g.cap_r + 1;
    }
    g.n_states = static_cast<std::size_t>(g.n_pipe * g.n_pos);
    return g;
}

}  // namespace

std::size_t PolicyTable::state_id(const std::vector<std::int64_t>& pipe_idx, std::int64_t pos_idx) const {
    const std::int64_t base = cap_r_idx + 1;
    std::int64_t code = 0;
    for (std::int64_t e : pipe_idx) {
        if (e < 0 || e > cap_r_idx) throw DomainError(errc::state_escape, "pipeline entry outside table");
        code = code * base + e;
    }
    if (pos_idx < pos_lo_idx || pos_idx > pos_hi_idx)
        throw DomainError(errc::state_escape, "position outside table window");
    const std::int64_t n_pos = pos_hi_idx - pos_lo_idx + 1;
    return static_cast<std::size_t>(code * n_pos + (pos_idx - pos_lo_idx));
}

std::pair<double, double> PolicyTable::action(const std::vector<double>& pipeline, double position) const {
    if (static_cast<int>(pipeline.size()) != pipeline_dim())
        throw DomainError(errc::state_escape, "pipeline dimension mismatch");
    std::vector<std::int64_t> pipe_idx;
    pipe_idx.reserve(pipeline.size());
    for (double v : pipeline) pipe_idx.push_back(to_index(v, step, "pipeline entry"));
    std::int64_t pos_idx = to_index(position, step, "position");
    const std::size_t id = state_id(pipe_idx, pos_idx);
    return {static_cast<double>(q_r[id]) * step, static_cast<double>(q_e[id]) * step};
}

double dp_state_count(const Instance& inst, const TruncationSpec& caps) {
    const Geometry g = resolve_geometry(inst, caps);
    return static_cast<double>(g.n_pipe) * static_cast<double>(g.n_pos);
}

DpResult solve_opt_exact(const Instance& inst, const TruncationSpec& caps, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("solve_opt_exact: tol must be positive");
    const ReducedInstance red = reduce_regular_cost(inst);
    const Instance& ri = red.instance;
    const double step = ri.demand.step();
    const double premium = ri.premium();
    const Geometry g = resolve_geometry(ri, caps);

    const auto demand_atoms = ri.demand.dist().atoms();
    std::vector<std::int64_t> d_idx;
    std::vector<double> d_p;
    for (const auto& [v, p] : demand_atoms) {
        d_idx.push_back(to_index(v, step, "demand value"));
        d_p.push_back(p);
    }

    // Post-decision stage cost: kG[j - pos_lo] = E[cost((j * step) - lead-time demand)]
    // for post-express position j in [pos_lo, pos_hi + cap_e].
    const LatticeDistribution lead = convolve_n(ri.demand, ri.L0 + 1);
    const std::int64_t kg_len = g.n_pos + g.cap_e;
    std::vector<double> kG(static_cast<std::size_t>(kg_len));
    for (std::int64_t j = 0; j < kg_len; ++j) {
        const double y = static_cast<double>(g.pos_lo + j) * step;
        kG[static_cast<std::size_t>(j)] = expected_holding_backorder(lead.negated(), y, ri);
    }

    const std::int64_t base = g.cap_r + 1;
    std::int64_t tail_mod = 1;  // base^(pd-1)
    for (int i = 0; i < g.pd - 1; ++i) tail_mod *= base;

    std::vector<double> value(g.n_states, 0.0);
    std::vector<double> fresh(g.n_states, 0.0);
    // future[pipe' * u_len + j] = E_D[ value(pipe', clamp(j + pos_lo - D)) ]
    // over post-position index j (relative to pos_lo) in [0, n_pos + cap_e + cap_r).
    const std::int64_t u_len = g.n_pos + g.cap_e + g.cap_r;
    std::vector<double> future(static_cast<std::size_t>(g.n_pipe * u_len), 0.0);

    const std::size_t anchor =
        static_cast<std::size_t>((0 - g.pos_lo));  // pipeline all-zero, position zero

    // Demand expectation of the current values, per successor pipeline.
    auto refresh_future = [&] {
        parallel_chunks(static_cast<std::size_t>(g.n_pipe), [&](std::size_t pb, std::size_t pe) {
            for (std::size_t pc = pb; pc < pe; ++pc) {
                const double* vbase = value.data() + pc * static_cast<std::size_t>(g.n_pos);
                double* ubase = future.data() + pc * static_cast<std::size_t>(u_len);
                for (std::int64_t j = 0; j < u_len; ++j) {
                    double acc = 0.0;
                    for (std::size_t a = 0; a < d_idx.size(); ++a) {
                        std::int64_t to = j - d_idx[a];
                        if (to < 0) to = 0;
                        if (to >= g.n_pos) to = g.n_pos - 1;
                        acc += d_p[a] * vbase[to];
                    }
                    ubase[j] = acc;
                }
            }
        }, 1);
    };

    double span = std::numeric_limits<double>::infinity();
    double gain = 0.0;
    std::size_t sweep = 0;
    bool converged = false;
    for (sweep = 1; sweep <= caps.max_sweeps; ++sweep) {
        refresh_future();

        // Bellman update, states grouped by pipeline code.
        parallel_chunks(static_cast<std::size_t>(g.n_pipe), [&](std::size_t pb, std::size_t pe) {
            for (std::size_t pc = pb; pc < pe; ++pc) {
                const std::int64_t tail = static_cast<std::int64_t>(pc) % tail_mod;
                const std::int64_t head = static_cast<std::int64_t>(pc) / tail_mod;  // arriving order
                double* out = fresh.data() + pc * static_cast<std::size_t>(g.n_pos);
                for (std::int64_t pi = 0; pi < g.n_pos; ++pi) {
                    double best = std::numeric_limits<double>::infinity();
                    for (std::int64_t qr = 0; qr <= g.cap_r; ++qr) {
                        const double* u = future.data() +
                                          static_cast<std::size_t>(tail * base + qr) *
                                              static_cast<std::size_t>(u_len);
                        for (std::int64_t qe = 0; qe <= g.cap_e; ++qe) {
                            const double v = premium * static_cast<double>(qe) * step +
                                             kG[static_cast<std::size_t>(pi + qe)] +
                                             u[pi + qe + head];
                            if (v < best) best = v;
                        }
                    }
                    out[pi] = best;
                }
            }
        }, 1);

        // Span of the value increment; anchor the iterate to keep it bounded.
        const int workers = std::max(1, thread_budget());
        std::vector<double> lo_part(static_cast<std::size_t>(workers), std::numeric_limits<double>::infinity());
        std::vector<double> hi_part(static_cast<std::size_t>(workers), -std::numeric_limits<double>::infinity());
        const std::size_t chunk = (g.n_states + static_cast<std::size_t>(workers) - 1) / static_cast<std::size_t>(workers);
        parallel_chunks(static_cast<std::size_t>(workers), [&](std::size_t wb, std::size_t we) {
            for (std::size_t w = wb; w < we; ++w) {
                const std::size_t sb = w * chunk;
                const std::size_t se = std::min(sb + chunk, g.n_states);
                double lo = std::numeric_limits<double>::infinity();
                double hi = -lo;
                for (std::size_t s = sb; s < se; ++s) {
                    const double d = fresh[s] - value[s];
                    lo = std::min(lo, d);
                    hi = std::max(hi, d);
                }
                lo_part[w] = lo;
                hi_part[w] = hi;
            }
        }, 1);
        double d_lo = *std::min_element(lo_part.begin(), lo_part.end());
        double d_hi = *std::max_element(hi_part.begin(), hi_part.end());
        span = d_hi - d_lo;
        gain = 0.5 * (d_hi + d_lo);

        const double anchor_value = fresh[anchor];
        parallel_chunks(g.n_states, [&](std::size_t sb, std::size_t se) {
            for (std::size_t s = sb; s < se; ++s) fresh[s] -= anchor_value;
        });
        std::swap(value, fresh);
        if (span < tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw DomainError(errc::no_convergence, "relative value iteration did not reach the span tolerance");

    refresh_future();

    // Greedy policy extraction (ties: smaller qR, then smaller qE).
    PolicyTable pol;
    pol.step = step;
    pol.L = ri.L;
    pol.L0 = ri.L0;
    pol.cap_r_idx = g.cap_r;
    pol.cap_e_idx = g.cap_e;
    pol.pos_lo_idx = g.pos_lo;
    pol.pos_hi_idx = g.pos_hi;
    pol.q_r.assign(g.n_states, 0);
    pol.q_e.assign(g.n_states, 0);
    parallel_chunks(static_cast<std::size_t>(g.n_pipe), [&](std::size_t pb, std::size_t pe) {
        for (std::size_t pc = pb; pc < pe; ++pc) {
            const std::int64_t tail = static_cast<std::int64_t>(pc) % tail_mod;
            const std::int64_t head = static_cast<std::int64_t>(pc) / tail_mod;
            for (std::int64_t pi = 0; pi < g.n_pos; ++pi) {
                double best = std::numeric_limits<double>::infinity();
                std::int64_t bqr = 0, bqe = 0;
                for (std::int64_t qr = 0; qr <= g.cap_r; ++qr) {
                    const double* u = future.data() +
                                      static_cast<std::size_t>(tail * base + qr) * static_cast<std::size_t>(u_len);
                    for (std::int64_t qe = 0; qe <= g.cap_e; ++qe) {
                        const double v = premium * static_cast<double>(qe) * step +
                                         kG[static_cast<std::size_t>(pi + qe)] + u[pi + qe + head];
                        if (v < best - 1e-12) {
                            best = v;
                            bqr = qr;
                            bqe = qe;
                        }
                    }
                }
                const std::size_t s = pc * static_cast<std::size_t>(g.n_pos) + static_cast<std::size_t>(pi);
                pol.q_r[s] = static_cast<std::uint32_t>(bqr);
                pol.q_e[s] = static_cast<std::uint32_t>(bqe);
            }
        }
    }, 1);

    // Stationary audit of the greedy policy: occupancy by power iteration from
    // the anchor, Cesaro-averaged to sidestep periodicity.
    std::vector<double> occ(g.n_states, 0.0);
    std::vector<double> nxt(g.n_states, 0.0);
    std::vector<double> avg(g.n_states, 0.0);
    occ[anchor] = 1.0;
    const int burn = 300, keep = 300;
    double clamped = 0.0;
    for (int t = 0; t < burn + keep; ++t) {
        std::fill(nxt.begin(), nxt.end(), 0.0);
        double clamp_now = 0.0;
        for (std::size_t pc = 0; pc < static_cast<std::size_t>(g.n_pipe); ++pc) {
            const std::int64_t tail = static_cast<std::int64_t>(pc) % tail_mod;
            const std::int64_t head = static_cast<std::int64_t>(pc) / tail_mod;
            for (std::int64_t pi = 0; pi < g.n_pos; ++pi) {
                const std::size_t s = pc * static_cast<std::size_t>(g.n_pos) + static_cast<std::size_t>(pi);
                const double mass = occ[s];
                if (mass == 0.0) continue;
                const std::int64_t pc2 = tail * base + pol.q_r[s];
                const std::int64_t post = pi + pol.q_e[s] + head;
                for (std::size_t a = 0; a < d_idx.size(); ++a) {
                    std::int64_t to = post - d_idx[a];
                    if (to < 0 || to >= g.n_pos) {
                        clamp_now += mass * d_p[a];
                        to = to < 0 ? 0 : g.n_pos - 1;
                    }
                    nxt[static_cast<std::size_t>(pc2 * g.n_pos + to)] += mass * d_p[a];
                }
            }
        }
        std::swap(occ, nxt);
        if (t >= burn) {
            clamped += clamp_now;
            for (std::size_t s = 0; s < g.n_states; ++s) avg[s] += occ[s];
        }
    }
    clamped /= keep;
    double cap_hit = 0.0;
    for (std::size_t s = 0; s < g.n_states; ++s) {
        if (avg[s] > 0.0 && (pol.q_r[s] == static_cast<std::uint32_t>(g.cap_r) ||
                             pol.q_e[s] == static_cast<std::uint32_t>(g.cap_e)))
            cap_hit += avg[s];
    }
    cap_hit /= keep;
    if (cap_hit > 1e-3)
        throw DomainError(errc::truncation_too_tight,
                          "greedy policy sits on an order cap for " + std::to_string(cap_hit * 100.0) +
                              "% of its stationary mass; raise q_cap_R / q_cap_E");

    DpResult res;
    res.opt_cost = gain + red.offset;
    res.sweeps = sweep;
    res.span = span;
    res.clamped_mass = clamped;
    res.cap_hit_mass = cap_hit;
    res.clamp_flagged = clamped > 1e-4;
    res.policy = std::move(pol);
    return res;
}

// ---------------------------------------------------------------------------
// Discounted single-source relaxation.
// ---------------------------------------------------------------------------

ValueFunction1D solve_single_source(const Instance& inst, double r, double alpha, int n,
                                    const GridSpec* grid,
                                    const std::function<void(const ValueFunction1D&)>& on_stage) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("discount must lie in (0,1)");
    if (n < 0) throw std::invalid_argument("horizon must be nonnegative");
    const double step = inst.demand.step();
    const double mean = inst.demand.mean();
    const double dmax = inst.demand.max_value();
    const double ratio = std::max(inst.b, inst.h) / std::min(inst.b, inst.h);

    // Half-width covering every stage's minimizer: the discounted-optimal
    // order-up-to level is bounded by 4 (L0+1) ratio (|r| + E[D]) (1-a)^-2.
    double x_lo, x_hi;
    if (grid) {
        x_lo = grid->x_lo;
        x_hi = grid->x_hi;
    } else {
        const double s_bar = 4.0 * (inst.L0 + 1) * ratio * (std::abs(r) + mean) /
                             ((1.0 - alpha) * (1.0 - alpha));
        const double pad = (inst.L0 + 1) * (dmax + std::abs(r)) + (n + 2) * step + 2.0 * dmax;
        x_lo = -(s_bar + pad);
        x_hi = s_bar + pad;
    }

    // Per-stage grid offsets: stage m lives on origin o_m = o_n + (n - m) * frac
    // with frac = r mod step, so y + r - D always lands exactly on the
    // previous stage's grid.
    const double frac = r - step * std::floor(r / step);
    const std::int64_t k_r = static_cast<std::int64_t>(std::llround((r - frac) / step));
    const double origin_final = step * std::floor(x_lo / step);
    const std::size_t ng = static_cast<std::size_t>(std::ceil((x_hi - origin_final) / step)) + 1;
    if (ng < 8) throw DomainError(errc::grid_too_narrow, "value-function grid has too few points");

    const LatticeDistribution lead = convolve_n(inst.demand, inst.L0 + 1);
    const auto lead_atoms = lead.atoms();
    const auto demand_atoms = inst.demand.dist().atoms();
    const double slope_cap = std::max(inst.b, inst.h) / (1.0 - alpha);
    const double lead_shift = (inst.L0 + 1) * r;

    ValueFunction1D vf;
    vf.r = r;
    vf.alpha = alpha;
    vf.step = step;
    vf.horizon = 0;
    vf.origin = origin_final + static_cast<double>(n) * frac;  // stage-0 grid
    vf.values.assign(ng, 0.0);
    vf.min_value = 0.0;
    vf.argmin_x = vf.origin;
    if (n == 0) return vf;

    std::vector<double> prev(ng, 0.0);
    std::vector<double> stage_cost(ng, 0.0);
    std::vector<double> cur(ng, 0.0);

    for (int m = 1; m <= n; ++m) {
        const double origin_m = origin_final + static_cast<double>(n - m) * frac;
        const double prev_top = origin_m + frac + static_cast<double>(ng - 1) * step;  // previous grid's top x

        parallel_chunks(ng, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                const double y = origin_m + static_cast<double>(i) * step;
                double cost_now = 0.0;
                for (const auto& [v, p] : lead_atoms) {
                    const double z = y + lead_shift - v;
                    cost_now += p * (z >= 0.0 ? inst.h * z : -inst.b * z);
                }
                double cont = 0.0;
                for (std::size_t a = 0; a < demand_atoms.size(); ++a) {
                    const std::int64_t j = static_cast<std::int64_t>(i) + k_r -
                                           static_cast<std::int64_t>(std::llround(demand_atoms[a].first / step));
                    double pv;
                    if (j < 0) {
                        pv = prev[0];
                    } else if (j >= static_cast<std::int64_t>(ng)) {
                        pv = prev[ng - 1] +
                             slope_cap * (y + r - demand_atoms[a].first - prev_top);
                    } else {
                        pv = prev[static_cast<std::size_t>(j)];
                    }
                    cont += demand_atoms[a].second * pv;
                }
                stage_cost[i] = cost_now + alpha * cont;
            }
        });

        // V^m(x) = min over y >= x; suffix minimum right-to-left.
        double run = std::numeric_limits<double>::infinity();
        std::size_t argmin = ng - 1;
        for (std::size_t i = ng; i-- > 0;) {
            if (stage_cost[i] <= run) {
                run = stage_cost[i];
                argmin = i;
            }
            cur[i] = run;
        }
        if (argmin == 0 || argmin == ng - 1)
            throw DomainError(errc::grid_too_narrow,
                              "stage minimizer touches the grid boundary; widen the x-grid");

        vf.horizon = m;
        vf.origin = origin_m;
        vf.values = cur;
        vf.min_value = cur[0];
        vf.argmin_x = origin_m + static_cast<double>(argmin) * step;
        if (on_stage) on_stage(vf);
        std::swap(prev, cur);
    }
    return vf;
}

double discount_schedule(int L) {
    const double a = 1.0 - 5.0 * std::log(static_cast<double>(L)) / static_cast<double>(L);
    return std::min(1.0 - 1e-9, std::max(0.5 + 1e-9, a));
}

LowerBoundResult opt_lower_bound(const Instance& inst, int L, const LowerBoundOptions& opts) {
    if (L <= inst.L0 + 1) throw DomainError(errc::lead_time_order, "lower bound requires L > L0 + 1");
    const ReducedInstance red = reduce_regular_cost(inst);
    const Instance& ri = red.instance;
    const double mean = ri.demand.mean();
    const double premium = ri.premium();

    std::vector<double> alphas = opts.alphas;
    if (alphas.empty()) {
        alphas = {0.5, 0.8, 0.9, 0.95};
        alphas.push_back(discount_schedule(L));
        std::sort(alphas.begin(), alphas.end());
        alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
    }
    std::vector<double> rs = opts.r_values;
    if (rs.empty()) {
        const double dr = ri.demand.step() / 4.0;
        for (double r = 0.0; r < mean; r += dr) rs.push_back(r);
        rs.push_back(mean);
    }

    LowerBoundResult out;
    out.value = -std::numeric_limits<double>::infinity();
    const int horizon = L - ri.L0;
    for (double a : alphas) {
        double worst = std::numeric_limits<double>::infinity();
        double worst_r = rs.front();
        for (double r : rs) {
            const ValueFunction1D vf = solve_single_source(ri, r, a, horizon);
            const double bound = premium * (mean - r) + (1.0 - a) * vf.min_value;
            if (bound < worst) {
                worst = bound;
                worst_r = r;
            }
        }
        out.per_alpha.emplace_back(a, worst + red.offset);
        if (worst > out.value) {
            out.value = worst;
            out.best_alpha = a;
            out.best_r = worst_r;
        }
    }
    out.value += red.offset;
    return out;
}

}  // namespace dualsrc
