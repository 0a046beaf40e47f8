// dualsrc — dual-sourcing inventory toolkit.
//
// Subcommands: validate, optimize-tbs, solve-dp, lower-bound, simulate,
// gap-bound, lindley, sweep. Every numeric output embeds the tolerances used
// and a reproducibility manifest (command line, instance hash, tool version);
// a sibling <output>.manifest.json adds the wall-clock timestamp so the main
// outputs stay byte-identical across reruns.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dualsrc/bounds.hpp"
#include "dualsrc/dp.hpp"
#include "dualsrc/errors.hpp"
#include "dualsrc/io.hpp"
#include "dualsrc/lindley.hpp"
#include "dualsrc/sim.hpp"
#include "dualsrc/sweep.hpp"
#include "dualsrc/tbs.hpp"

namespace {

using dualsrc::canonical_dump;
using dualsrc::format_double;
using nlohmann::json;

std::vector<std::string> g_argv;

void emit(const std::string& out_path, const json& body, const json& manifest) {
    json full = body;
    full["manifest"] = manifest;
    if (out_path.empty()) {
        std::cout << canonical_dump(full);
    } else {
        dualsrc::write_output(out_path, full, &manifest);
    }
}

// "a:b" or "a:b:step" inclusive integer range.
std::vector<int> parse_range(const std::string& s) {
    std::vector<int> parts;
    std::string cur;
    for (char c : s + ":") {
        if (c == ':') {
            parts.push_back(std::stoi(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (parts.size() < 2 || parts.size() > 3)
        throw CLI::ValidationError("range must be a:b or a:b:step");
    const int step = parts.size() == 3 ? parts[2] : 1;
    std::vector<int> out;
    for (int v = parts[0]; v <= parts[1]; v += step) out.push_back(v);
    return out;
}

json f_profile_json(const std::vector<std::pair<double, double>>& prof) {
    json arr = json::array();
    for (const auto& [r, f] : prof) arr.push_back({r, f});
    return arr;
}

std::string csv_cell(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

}  // namespace

int main(int argc, char** argv) {
    for (int i = 0; i < argc; ++i) g_argv.emplace_back(argv[i]);

    CLI::App app{"dual-sourcing inventory toolkit: TBS optimization, exact DP, bounds, simulation"};
    app.require_subcommand(1);

    std::string instance_path, out_path, csv_path;

    // validate ---------------------------------------------------------------
    auto* validate = app.add_subcommand("validate", "validate an instance file and re-emit its canonical form");
    validate->add_option("--instance", instance_path, "instance JSON file")->required();
    validate->add_option("--out", out_path, "write canonical instance here instead of stdout");
    validate->callback([&] {
        const dualsrc::Instance inst = dualsrc::load_instance(instance_path);
        const json j = dualsrc::instance_to_json(inst);
        if (out_path.empty())
            std::cout << canonical_dump(j);
        else
            dualsrc::write_file(out_path, canonical_dump(j));
    });

    // optimize-tbs -----------------------------------------------------------
    auto* opt_tbs = app.add_subcommand("optimize-tbs", "best TBS policy (r*, S*) by convex search");
    int grid_refine = 0;
    double overshoot_tol = 1e-12;
    opt_tbs->add_option("--instance", instance_path, "instance JSON file")->required();
    opt_tbs->add_option("--grid-refine", grid_refine, "halve the r-grid this many times around the optimum");
    opt_tbs->add_option("--tol", overshoot_tol, "stationary overshoot fixed-point tolerance");
    opt_tbs->add_option("--out", out_path, "output JSON path (default stdout)");
    opt_tbs->add_option("--csv", csv_path, "also write the F profile as CSV");
    opt_tbs->callback([&] {
        const dualsrc::Instance inst = dualsrc::load_instance(instance_path);
        dualsrc::TbsConfig cfg;
        cfg.grid_refine = grid_refine;
        cfg.overshoot_tol = overshoot_tol;
        dualsrc::TbsSearchResult res = dualsrc::best_tbs(inst, cfg);
        // full grid profile for plotting; the search result contributes the
        // refined points
        for (auto& pt : dualsrc::tbs_f_profile(inst, cfg)) res.f_profile.push_back(pt);
        std::sort(res.f_profile.begin(), res.f_profile.end());
        res.f_profile.erase(std::unique(res.f_profile.begin(), res.f_profile.end(),
                                        [](const auto& a, const auto& b) { return a.first == b.first; }),
                            res.f_profile.end());
        const json tol = {{"overshoot_tol", cfg.overshoot_tol}, {"grid_refine", cfg.grid_refine}};
        json body = {{"r_star", res.policy.r},
                     {"S_star", res.policy.S},
                     {"cost", res.policy.cost},
                     {"F_profile", f_profile_json(res.f_profile)},
                     {"tolerances", tol}};
        emit(out_path, body, dualsrc::make_manifest(g_argv, dualsrc::instance_to_json(inst), tol));
        if (!csv_path.empty()) {
            std::string csv = "r,F\n";
            for (const auto& [r, f] : res.f_profile)
                csv += format_double(r) + "," + format_double(f) + "\n";
            dualsrc::write_file(csv_path, csv);
        }
    });

    // solve-dp ---------------------------------------------------------------
    auto* solve_dp = app.add_subcommand("solve-dp", "exact long-run average optimum by relative value iteration");
    std::string caps_path, policy_out;
    double dp_tol = 1e-9;
    solve_dp->add_option("--instance", instance_path, "instance JSON file")->required();
    solve_dp->add_option("--caps", caps_path, "truncation JSON {q_cap_R,q_cap_E,pos_min,pos_max}");
    solve_dp->add_option("--tol", dp_tol, "span tolerance of the value iteration");
    solve_dp->add_option("--out", out_path, "output JSON path (default stdout)");
    solve_dp->add_option("--policy-out", policy_out, "write the greedy policy table CSV here");
    solve_dp->callback([&] {
        const dualsrc::Instance inst = dualsrc::load_instance(instance_path);
        dualsrc::TruncationSpec caps;
        if (!caps_path.empty()) {
            const json cj = json::parse(dualsrc::read_file(caps_path));
            if (cj.contains("q_cap_R")) caps.q_cap_R = cj["q_cap_R"].get<double>();
            if (cj.contains("q_cap_E")) caps.q_cap_E = cj["q_cap_E"].get<double>();
            if (cj.contains("pos_min")) caps.pos_min = cj["pos_min"].get<double>();
            if (cj.contains("pos_max")) caps.pos_max = cj["pos_max"].get<double>();
        }
        const dualsrc::DpResult res = dualsrc::solve_opt_exact(inst, caps, dp_tol);
        if (!policy_out.empty()) dualsrc::save_policy_csv(res.policy, policy_out);
        const json tol = {{"span_tol", dp_tol}};
        json body = {{"opt_cost", res.opt_cost},
                     {"sweeps", res.sweeps},
                     {"span", res.span},
                     {"clamped_mass", res.clamped_mass},
                     {"cap_hit_mass", res.cap_hit_mass},
                     {"clamp_flagged", res.clamp_flagged},
                     {"policy_file", policy_out},
                     {"tolerances", tol}};
        emit(out_path, body, dualsrc::make_manifest(g_argv, dualsrc::instance_to_json(inst), tol));
    });

    // lower-bound ------------------------------------------------------------
    auto* lower = app.add_subcommand("lower-bound", "certified lower bound on the optimal average cost");
    int lb_L = 0;
    std::vector<double> lb_alphas;
    double lb_r_step = 0.0;
    lower->add_option("--instance", instance_path, "instance JSON file")->required();
    lower->add_option("--L", lb_L, "regular lead time (default: the instance's L)");
    lower->add_option("--alphas", lb_alphas, "discount grid (default 0.5 0.8 0.9 0.95 + schedule)");
    lower->add_option("--r-step", lb_r_step, "r grid step over [0, E[D]] (default lattice step / 4)");
    lower->add_option("--out", out_path, "output JSON path (default stdout)");
    lower->callback([&] {
        const dualsrc::Instance inst = dualsrc::load_instance(instance_path);
        const int L = lb_L > 0 ? lb_L : inst.L;
        dualsrc::LowerBoundOptions opts;
        opts.alphas = lb_alphas;
        if (lb_r_step > 0.0) {
            for (double r = 0.0; r < inst.demand.mean(); r += lb_r_step) opts.r_values.push_back(r);
            opts.r_values.push_back(inst.demand.mean());
        }
        const dualsrc::LowerBoundResult res = dualsrc::opt_lower_bound(inst, L, opts);
        json per_alpha = json::array();
        for (const auto& [a, v] : res.per_alpha) per_alpha.push_back({a, v});
        const json tol = {{"r_step", lb_r_step > 0.0 ? lb_r_step : inst.demand.step() / 4.0}};
        json body = {{"lower_bound", res.value}, {"best_alpha", res.best_alpha},
                     {"best_r", res.best_r},     {"per_alpha", per_alpha},
                     {"L", L},                   {"tolerances", tol}};
        emit(out_path, body, dualsrc::make_manifest(g_argv, dualsrc::instance_to_json(inst), tol));
    });

    // simulate ---------------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "Monte Carlo evaluation of a policy");
    std::string policy_path, init_mode = "zero";
    std::int64_t horizon = 100000, warmup = -1;
    int reps = 20;
    std::uint64_t seed = 1;
    sim->add_option("--instance", instance_path, "instance JSON file")->required();
    sim->add_option("--policy", policy_path, "policy JSON file")->required();
    sim->add_option("--horizon", horizon, "periods per replication");
    sim->add_option("--warmup", warmup, "periods dropped (default 10*L)");
    sim->add_option("--reps", reps, "replications");
    sim->add_option("--seed", seed, "RNG seed");
    sim->add_option("--init", init_mode, "initial state: zero | geometric");
    sim->add_option("--out", out_path, "output JSON path (default stdout)");
    sim->callback([&] {
        const dualsrc::Instance inst = dualsrc::load_instance(instance_path);
        dualsrc::PolicyTable table;
        const dualsrc::PolicySpec spec =
            dualsrc::policy_from_json(json::parse(dualsrc::read_file(policy_path)), inst, table);
        dualsrc::SimConfig cfg;
        cfg.horizon = horizon;
        cfg.warmup = warmup;
        cfg.replications = reps;
        cfg.seed = seed;
        if (init_mode == "geometric") cfg.init = dualsrc::InitMode::geometric_backlog;
        else if (init_mode != "zero") throw CLI::ValidationError("--init must be zero or geometric");
        const dualsrc::SimResult res = dualsrc::simulate(inst, spec, cfg);
        json reps_json = json::array();
        for (double v : res.per_rep) reps_json.push_back(v);
        const json tol = {{"horizon", horizon}, {"warmup", cfg.warmup}, {"replications", reps}, {"seed", seed}};
        json body = {{"mean", res.mean}, {"ci99", res.ci99}, {"reps", reps_json}, {"tolerances", tol}};
        emit(out_path, body, dualsrc::make_manifest(g_argv, dualsrc::instance_to_json(inst), tol));
    });

    // gap-bound ----------------------------------------------------------------
    auto* gap = app.add_subcommand("gap-bound", "certificate constants and TBS optimality-gap bounds");
    double gap_eps = 0.1;
    double gap_L = 0.0;
    std::string gap_L_range;
    gap->add_option("--instance", instance_path, "instance JSON file")->required();
    gap->add_option("--eps", gap_eps, "target relative gap for the minimal lead time");
    gap->add_option("--L", gap_L, "evaluate the additive gap bound at this lead time");
    gap->add_option("--L-range", gap_L_range, "a:b or a:b:step — write a CSV table over lead times");
    gap->add_option("--out", out_path, "output JSON path (default stdout)");
    gap->add_option("--csv", csv_path, "CSV path for the --L-range table");
    gap->callback([&] {
        const dualsrc::Instance inst = dualsrc::load_instance(instance_path);
        const dualsrc::GapCertificate cert = dualsrc::certificate(inst);
        json body = {{"p0", cert.p0},
                     {"p_hat0", cert.p_hat0},
                     {"Q0", cert.Q0},
                     {"eta0", cert.eta0},
                     {"c0", cert.c0},
                     {"U0", cert.U0},
                     {"g", cert.g},
                     {"U", cert.U},
                     {"eps0", cert.eps0},
                     {"Y0", cert.Y0},
                     {"gamma_eps0", cert.gamma_eps0},
                     {"one_minus_gamma_eps0", cert.one_minus_gamma_eps0},
                     {"vartheta_eps0", cert.vartheta_attained ? json(cert.vartheta_eps0) : json("inf")},
                     {"eps", gap_eps},
                     {"min_L_for_eps", cert.min_L_for(gap_eps)}};
        if (gap_L > 0.0) {
            const dualsrc::AdditiveGap ag = dualsrc::additive_gap_bound(inst, gap_L);
            body["additive_gap"] = {{"L", gap_L},
                                    {"gap", ag.gap},
                                    {"ratio_bound", ag.ratio_bound},
                                    {"applicable", ag.applicable},
                                    {"min_valid_L", ag.min_valid_L}};
        }
        const json tol = {{"eps", gap_eps}};
        body["tolerances"] = tol;
        emit(out_path, body, dualsrc::make_manifest(g_argv, dualsrc::instance_to_json(inst), tol));
        if (!gap_L_range.empty()) {
            if (csv_path.empty()) throw CLI::ValidationError("--L-range needs --csv");
            std::string csv = "L,additive_gap,ratio_bound,applicable\n";
            for (int L : parse_range(gap_L_range)) {
                const dualsrc::AdditiveGap ag =
                    dualsrc::additive_gap_bound(cert, inst.L0, std::max(inst.b, inst.h), L);
                csv += std::to_string(L) + "," + format_double(ag.gap) + "," +
                       format_double(ag.ratio_bound) + "," + (ag.applicable ? "1" : "0") + "\n";
            }
            dualsrc::write_file(csv_path, csv);
        }
    });

    // lindley ------------------------------------------------------------------
    auto* lindley = app.add_subcommand("lindley", "stationary overshoot distribution of the constant-order pipeline");
    double lindley_r = 0.0, lindley_tol = 1e-12;
    lindley->add_option("--instance", instance_path, "instance JSON file")->required();
    lindley->add_option("--r", lindley_r, "constant regular order, on the demand lattice")->required();
    lindley->add_option("--tol", lindley_tol, "fixed-point tolerance");
    lindley->add_option("--out", out_path, "CSV path (default stdout)");
    lindley->callback([&] {
        const dualsrc::Instance inst = dualsrc::load_instance(instance_path);
        dualsrc::OvershootStats stats;
        const dualsrc::LatticeDistribution d =
            dualsrc::stationary_overshoot(dualsrc::make_walk(inst.demand, lindley_r), lindley_tol, &stats);
        std::string csv = "value,probability\n";
        for (const auto& [v, p] : d.atoms()) csv += format_double(v) + "," + format_double(p) + "\n";
        if (out_path.empty())
            std::cout << csv;
        else
            dualsrc::write_file(out_path, csv);
        std::cerr << "# iterations=" << stats.iterations << " truncated_mass="
                  << format_double(stats.truncated_mass) << "\n";
    });

    // sweep ----------------------------------------------------------------------
    auto* sweep = app.add_subcommand("sweep", "lead-time sweep: TBS vs exact DP vs lower bound");
    std::string sweep_range, sweep_caps_path;
    double budget = 5e7;
    sweep->add_option("--instance", instance_path, "instance JSON file")->required();
    sweep->add_option("--L", sweep_range, "lead-time range a:b or a:b:step")->required();
    sweep->add_option("--budget", budget, "skip the exact DP above this many states");
    sweep->add_option("--caps", sweep_caps_path, "truncation JSON for the DP column");
    sweep->add_option("--csv", csv_path, "CSV output path");
    sweep->add_option("--out", out_path, "summary JSON path (default stdout)");
    sweep->callback([&] {
        const dualsrc::Instance inst = dualsrc::load_instance(instance_path);
        dualsrc::SweepConfig cfg;
        cfg.state_budget = budget;
        if (!sweep_caps_path.empty()) {
            const json cj = json::parse(dualsrc::read_file(sweep_caps_path));
            if (cj.contains("q_cap_R")) cfg.caps.q_cap_R = cj["q_cap_R"].get<double>();
            if (cj.contains("q_cap_E")) cfg.caps.q_cap_E = cj["q_cap_E"].get<double>();
            if (cj.contains("pos_min")) cfg.caps.pos_min = cj["pos_min"].get<double>();
            if (cj.contains("pos_max")) cfg.caps.pos_max = cj["pos_max"].get<double>();
        }
        std::string csv = "L,tbs_cost,opt_exact,lower_bound,ratio_vs_opt,ratio_vs_lb,gap_certificate_additive,note\n";
        const auto rows = dualsrc::sweep_leadtime(inst, parse_range(sweep_range), cfg,
                                                  [&](const dualsrc::SweepRow& row) {
            csv += std::to_string(row.L) + "," + format_double(row.tbs_cost) + "," +
                   csv_cell(row.opt_exact) + "," + format_double(row.lower_bound) + "," +
                   csv_cell(row.ratio_vs_opt) + "," + format_double(row.ratio_vs_lb) + "," +
                   csv_cell(row.gap_certificate_additive) + "," + row.note + "\n";
        });
        if (!csv_path.empty()) dualsrc::write_file(csv_path, csv);
        json rows_json = json::array();
        for (const auto& row : rows) {
            json r = {{"L", row.L},
                      {"tbs_cost", row.tbs_cost},
                      {"lower_bound", row.lower_bound},
                      {"ratio_vs_lb", row.ratio_vs_lb},
                      {"note", row.note}};
            if (row.opt_exact) r["opt_exact"] = *row.opt_exact;
            if (row.ratio_vs_opt) r["ratio_vs_opt"] = *row.ratio_vs_opt;
            if (row.gap_certificate_additive) r["gap_certificate_additive"] = *row.gap_certificate_additive;
            rows_json.push_back(r);
        }
        const json tol = {{"state_budget", budget}, {"dp_tol", cfg.dp_tol}};
        json body = {{"rows", rows_json}, {"tolerances", tol}};
        emit(out_path, body, dualsrc::make_manifest(g_argv, dualsrc::instance_to_json(inst), tol));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const dualsrc::DomainError& e) {
        std::cerr << canonical_dump(json{{"error", e.code()}, {"message", e.what()}});
        return 1;
    } catch (const std::exception& e) {
        std::cerr << canonical_dump(json{{"error", "Internal"}, {"message", e.what()}});
        return 1;
    }
    return 0;
}
