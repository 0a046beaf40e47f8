#include "dualsrc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "dualsrc/errors.hpp"
#include "dualsrc/parallel.hpp"

namespace dualsrc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Demand sampler with an explicit inverse-CDF table; avoids the
// implementation-defined std::discrete_distribution so streams are
// bit-reproducible across standard libraries.
struct DemandSampler {
    std::vector<double> cdf;
    std::vector<double> values;

    explicit DemandSampler(const DemandDistribution& d) {
        double acc = 0.0;
        for (const auto& [v, p] : d.atoms()) {
            acc += p;
            cdf.push_back(acc);
            values.push_back(v);
        }
        cdf.back() = 1.0;
    }

    double operator()(std::mt19937_64& eng) const {
        const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
        for (std::size_t i = 0; i + 1 < cdf.size(); ++i)
            if (u < cdf[i]) return values[i];
        return values.back();
    }
};

struct Ring {
    std::vector<double> buf;
    std::size_t head = 0;

    explicit Ring(std::size_t n) : buf(std::max<std::size_t>(n, 1), 0.0) {}
    // Pushes the newest order, returns the one falling due (lag = buf.size()).
    double push(double q) {
        const double due = buf[head];
        buf[head] = q;
        head = (head + 1) % buf.size();
        return due;
    }
    double peek(std::size_t ago) const {
        // Entry pushed `ago` periods before the upcoming push; ago in [1, size].
        return buf[(head + buf.size() - ago) % buf.size()];
    }
};

double run_replication(const Instance& inst, const PolicySpec& policy, const SimConfig& cfg, int rep) {
    std::mt19937_64 eng(splitmix64(cfg.seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(rep + 1))));
    const DemandSampler sample(inst.demand);
    const bool scripted = !cfg.scripted_demands.empty();
    if (scripted && cfg.horizon > static_cast<std::int64_t>(cfg.scripted_demands.size()))
        throw std::invalid_argument("scripted demand sequence shorter than the horizon");

    const int L = inst.L, L0 = inst.L0;
    Ring regular(static_cast<std::size_t>(L));
    Ring express(static_cast<std::size_t>(std::max(L0, 1)));

    double on_hand = 0.0;
    if (cfg.init == InitMode::geometric_backlog) {
        const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
        const int g = std::max(1, static_cast<int>(std::ceil(-std::log2(std::max(u, 0x1.0p-60)))));
        for (int i = 0; i < g; ++i) on_hand -= sample(eng);
    }
    // Expedited inventory position: net inventory plus everything landing
    // within the express horizon. Updated incrementally each period.
    double position = on_hand;

    const std::int64_t warmup = cfg.warmup >= 0 ? cfg.warmup : 10 * static_cast<std::int64_t>(L);
    double cost_acc = 0.0;
    std::int64_t counted = 0;
    std::vector<double> pipeline(static_cast<std::size_t>(L - L0 - 1), 0.0);

    for (std::int64_t t = 1; t <= cfg.horizon; ++t) {
        double q_r = 0.0, q_e = 0.0;
        switch (policy.kind) {
            case PolicySpec::Kind::tbs:
                q_r = policy.r;
                q_e = std::max(0.0, policy.S - position);
                break;
            case PolicySpec::Kind::constant_order:
                q_r = policy.r;
                break;
            case PolicySpec::Kind::express_base_stock:
                q_e = std::max(0.0, policy.S - position);
                break;
            case PolicySpec::Kind::table: {
                for (std::size_t k = 0; k < pipeline.size(); ++k)
                    pipeline[k] = regular.peek(static_cast<std::size_t>(L - L0 - 1) - k);
                const auto [ar, ae] = policy.table->action(pipeline, position);
                q_r = ar;
                q_e = ae;
                break;
            }
        }

        // The regular order entering the expedited window this period.
        const double entering = regular.peek(static_cast<std::size_t>(L - L0 - 1));

        const double arrive_r = regular.push(q_r);
        const double arrive_e = L0 == 0 ? q_e : express.push(q_e);

        const double d = scripted ? cfg.scripted_demands[static_cast<std::size_t>(t - 1)] : sample(eng);
        on_hand += arrive_r + arrive_e - d;
        position += q_e + entering - d;

        const double cost = inst.c_R * q_r + inst.c_E * q_e +
                            (on_hand >= 0.0 ? inst.h * on_hand : -inst.b * on_hand);
        if (t > warmup) {
            cost_acc += cost;
            ++counted;
        }
    }
    if (counted == 0) throw std::invalid_argument("horizon must exceed warmup");
    return cost_acc / static_cast<double>(counted);
}

}  // namespace

SimResult simulate(const Instance& inst, const PolicySpec& policy, const SimConfig& cfg) {
    if (cfg.horizon <= 0) throw std::invalid_argument("simulate: horizon must be positive");
    if (cfg.replications < 1) throw std::invalid_argument("simulate: need at least one replication");
    if (cfg.warmup >= cfg.horizon) throw std::invalid_argument("simulate: warmup must be below horizon");
    if (policy.kind == PolicySpec::Kind::table) {
        if (!policy.table) throw std::invalid_argument("table policy requires a policy table");
        if (policy.table->L != inst.L || policy.table->L0 != inst.L0 ||
            policy.table->step != inst.demand.step())
            throw DomainError(errc::state_escape, "policy table does not match the instance");
    }

    SimResult out;
    out.per_rep.assign(static_cast<std::size_t>(cfg.replications), 0.0);
    parallel_chunks(
        static_cast<std::size_t>(cfg.replications),
        [&](std::size_t b, std::size_t e) {
            for (std::size_t rep = b; rep < e; ++rep)
                out.per_rep[rep] = run_replication(inst, policy, cfg, static_cast<int>(rep));
        },
        1);

    double mean = 0.0;
    for (double v : out.per_rep) mean += v;
    mean /= static_cast<double>(cfg.replications);
    out.mean = mean;
    if (cfg.replications > 1) {
        double ss = 0.0;
        for (double v : out.per_rep) ss += (v - mean) * (v - mean);
        const double sd = std::sqrt(ss / static_cast<double>(cfg.replications - 1));
        out.ci99 = 2.5758293035489004 * sd / std::sqrt(static_cast<double>(cfg.replications));
    }
    return out;
}

}  // namespace dualsrc
