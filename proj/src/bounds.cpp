#include "dualsrc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dualsrc/errors.hpp"
#include "dualsrc/tbs.hpp"

namespace dualsrc {

namespace {

// expm1(x) - x, stable for tiny |x| where the direct difference cancels.
double expm1_minus_x(double x) {
    if (std::abs(x) > 1e-3) {
        const double e = x > 700.0 ? std::exp(700.0) : std::expm1(x);
        return e - x;
    }
    // x^2/2 (1 + x/3 + x^2/12 + x^3/60 + x^4/360); truncation below 1 ulp
    const double x2 = x * x;
    return 0.5 * x2 * (1.0 + x * (1.0 / 3.0) + x2 * (1.0 / 12.0) + x2 * x * (1.0 / 60.0) +
                       x2 * x2 * (1.0 / 360.0));
}

struct NeumaierSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v) {
        const double t = sum + v;
        comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    void add_product(double x, double y) {
        const double prod = x * y;
        add(prod);
        add(std::fma(x, y, -prod));
    }
    double value() const { return sum + comp; }
};

// a - b as an exact hi + lo pair.
inline void two_diff(double a, double b, double& hi, double& lo) {
    hi = a - b;
    const double bb = hi - a;
    lo = (a - (hi - bb)) - (b + bb);
}

// Evaluation of psi(theta) = phi_eps(theta) - 1 and its derivative.
//
// The tilt exponents (E[D] - eps) - v_i cancel to -eps in expectation; the
// certificate eps values sit far below the rounding floor of the stored mean
// (eps0 can be ~1e-20 while ulp(E[D]) ~ 1e-16), so naive evaluation loses the
// minimum entirely. Two regimes:
//
//  - eps >= 1e-6 max(1, E[D]): slopes a_i = (E[D] - eps) - v_i carry eps
//    faithfully; psi = sum p_i (expm1(t a_i) - t a_i) - t eps_eff with the
//    effective drift eps_eff = -sum p_i a_i accumulated exactly (fma products
//    + compensated summation). Both addends are positive and cancel by a
//    benign factor of about two at the minimizer.
//
//  - eps below that: the mean enters as an exact hi/lo pair per atom
//    (g_i = E[D] - v_i = g_hi + g_lo) and eps stays symbolic in the linear
//    term, using exp(t (g - eps)) = exp(t g_hi) (1 + t (g_lo - eps)) + O((t eps)^2):
//      psi(t) = sum p_i (expm1(t g_hi) - t g_hi)     curvature, >= 0
//             + t sum p_i g_lo expm1(t g_hi)         split correction
//             + t residual                           exact sum p_i g_i, ~1e-32
//             - t eps sum p_i exp(t g_hi)            linear in eps
//    The dropped second-order term is O((t eps)^2 / psi) ~ eps relative, far
//    below any tolerance in this regime.
struct TiltTerms {
    bool split_mode;
    std::vector<double> p, s_hi, s_lo;  // slopes (plain: s_hi = a_i, s_lo unused)
    double residual = 0.0;              // exact sum of p_i * slopes
    double eps;
    double margin = 0.0;                // (E[D] - eps) - v_min

    TiltTerms(const std::vector<std::pair<double, double>>& atoms, double eps_in) : eps(eps_in) {
        NeumaierSum mass, dot;
        for (const auto& [v, prob] : atoms) {
            mass.add(prob);
            dot.add_product(prob, v);
        }
        // mean as a hi/lo pair: one Newton correction of the quotient against
        // the unrounded mass pair (the compensation term of a probability sum
        // near one is itself below one ulp and must not be collapsed away)
        const double mass_hi = mass.sum, mass_lo = mass.comp;
        const double d_hi = dot.sum, d_lo = dot.comp;
        const double mu_hi = (d_hi + d_lo) / (mass_hi + mass_lo);
        const double e1 = mu_hi * mass_hi;
        const double e2 = std::fma(mu_hi, mass_hi, -e1);
        const double mu_lo = (((d_hi - e1) - e2) + (d_lo - mu_hi * mass_lo)) / mass_hi;

        split_mode = eps < 1e-6 * std::max(1.0, std::abs(mu_hi));
        NeumaierSum res;
        double max_slope = -std::numeric_limits<double>::infinity();
        for (const auto& [v, prob] : atoms) {
            double hi, lo;
            two_diff(mu_hi, v, hi, lo);
            lo += mu_lo;
            max_slope = std::max(max_slope, (hi + lo) - eps);
            p.push_back(prob);
            if (split_mode) {
                s_hi.push_back(hi);
                s_lo.push_back(lo);
            } else {
                const double a = (mu_hi - eps) - v;
                s_hi.push_back(a);
                s_lo.push_back(0.0);
            }
            res.add_product(prob, s_hi.back());
            res.add_product(prob, s_lo.back());
        }
        residual = res.value();
        margin = max_slope;
    }

    double psi(double theta) const {
        double curved = 0.0, split = 0.0, lin = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double x = theta * s_hi[i];
            curved += p[i] * expm1_minus_x(x);
            if (split_mode) {
                const double em = x > 700.0 ? std::exp(700.0) : std::expm1(x);
                split += p[i] * s_lo[i] * em;
                lin += p[i] * (1.0 + em);
            }
        }
        if (!split_mode) return curved + theta * residual;  // residual = -eps_eff
        return curved + theta * split + theta * residual - theta * eps * lin;
    }

    // Strictly increasing derivative, negative at zero.
    double dpsi(double theta) const {
        double acc = 0.0, lin = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double x = theta * s_hi[i];
            const double em = x > 700.0 ? std::exp(700.0) : std::expm1(x);
            acc += p[i] * (s_hi[i] + s_lo[i]) * em;
            if (split_mode) lin += p[i] * (1.0 + em);
        }
        return split_mode ? acc + residual - eps * lin : acc + residual;
    }
};

}  // namespace

double tilted_transform(const Instance& inst, double eps, double theta) {
    if (!(eps > 0.0) || eps > inst.demand.mean() + 1e-12)
        throw std::invalid_argument("tilted_transform: eps must lie in (0, E[D]]");
    if (theta < 0.0) throw std::invalid_argument("tilted_transform: theta must be nonnegative");
    const double e = theta * (inst.demand.mean() - eps);
    return (e > 700.0 ? std::exp(700.0) : std::exp(e)) * inst.demand.laplace(theta);
}

TiltMinimum tilt_minimum(const Instance& inst, double eps) {
    if (!(eps > 0.0) || eps > inst.demand.mean() + 1e-12)
        throw std::invalid_argument("tilt_minimum: eps must lie in (0, E[D]]");
    const auto atoms = inst.demand.atoms();
    const TiltTerms terms(atoms, eps);

    TiltMinimum out;
    const double margin = terms.margin;  // (E[D] - eps) - v_min
    if (margin <= 1e-12 * std::max(1.0, inst.demand.mean())) {
        // The transform decreases toward its limit: no atom lies strictly
        // below the drift, so the infimum is approached as theta -> inf.
        out.attained = false;
        out.vartheta = std::numeric_limits<double>::infinity();
        const double limit = std::abs(margin) <= 1e-12 ? atoms.front().second : 0.0;
        out.gamma = limit;
        out.one_minus_gamma = 1.0 - limit;
        return out;
    }

    // Doubling expansion until the transform turns upward.
    double t_prev = 0.0, t_cur = 1.0;
    double psi_prev = 0.0, psi_cur = terms.psi(t_cur);
    while (psi_cur < psi_prev) {
        t_prev = t_cur;
        psi_prev = psi_cur;
        t_cur *= 2.0;
        psi_cur = terms.psi(t_cur);
        if (t_cur > 1e18) break;  // unreachable for drift > v_min; safety stop
    }
    const double lo0 = t_prev > 1.0 ? t_prev / 2.0 : 0.0;
    const double hi0 = t_cur;

    // Golden-section to 1e-12 relative bracket width.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = lo0, hi = hi0;
    double m1 = hi - inv_phi * (hi - lo);
    double m2 = lo + inv_phi * (hi - lo);
    double f1 = terms.psi(m1), f2 = terms.psi(m2);
    for (int it = 0; it < 400 && (hi - lo) > 1e-12 * std::max(1e-300, hi); ++it) {
        if (f1 <= f2) {
            hi = m2;
            m2 = m1;
            f2 = f1;
            m1 = hi - inv_phi * (hi - lo);
            f1 = terms.psi(m1);
        } else {
            lo = m1;
            m1 = m2;
            f1 = f2;
            m2 = lo + inv_phi * (hi - lo);
            f2 = terms.psi(m2);
        }
    }
    // Near the minimum the transform is flat to second order, which lets the
    // golden comparisons stall on rounding noise; polish with a bisection on
    // the strictly increasing derivative over the certified bracket.
    double blo = lo0, bhi = hi0;
    for (int it = 0; it < 600 && (bhi - blo) > 1e-15 * bhi; ++it) {
        const double mid = 0.5 * (blo + bhi);
        (terms.dpsi(mid) < 0.0 ? blo : bhi) = mid;
    }
    const double t_star = 0.5 * (blo + bhi);
    const double psi_star = terms.psi(t_star);
    out.attained = true;
    out.vartheta = t_star;
    out.gamma = 1.0 + psi_star;
    out.one_minus_gamma = -psi_star;
    return out;
}

double GapCertificate::min_L_for(double eps) const {
    if (!(eps > 0.0)) throw std::invalid_argument("min_L_for: eps must be positive");
    const double threshold = 1.0 / (eps0 * eps0) + Y0 / (eps * eps);
    return std::floor(threshold) + 1.0;
}

GapCertificate certificate(const Instance& inst) {
    const ReducedInstance red = reduce_regular_cost(inst);
    const Instance& ri = red.instance;
    const DemandDistribution& d = ri.demand;
    const double mean = d.mean();
    const double min_bh = std::min(ri.b, ri.h);
    const double max_bh = std::max(ri.b, ri.h);

    GapCertificate cert;
    double p0 = 0.0;
    for (const auto& [v, p] : d.atoms())
        if (v < mean - 1e-12) p0 += p;
    cert.p0 = p0;
    cert.p_hat0 = std::sqrt(0.5 * p0 * (1.0 - p0));
    cert.Q0 = d.dist().quantile(0.5 * p0);
    cert.eta0 = d.min_mean_abs_dev();
    cert.c0 = min_bh * cert.p_hat0 * cert.eta0 / 240.0;
    cert.U0 = 64.0 * (ri.L0 + 1) * max_bh * max_bh / min_bh * mean;

    const LatticeDistribution lead = convolve_n(d, ri.L0 + 1);
    const double fractile = lead.quantile(ri.b / (ri.b + ri.h));
    cert.g = lead.expect([&](double v) {
        const double y = fractile - v;
        return y >= 0.0 ? ri.h * y : -ri.b * y;
    });
    cert.U = ri.premium() * mean + lead.expect([&](double v) { return ri.b * v; });

    const double pow2 = std::pow(2.0, ri.L0);
    const double term1 = mean - cert.Q0;
    const double term2 = 0.25 * cert.eta0 * cert.eta0 * cert.p_hat0 * cert.p_hat0;
    const double term3 = -std::expm1(-cert.p_hat0 * cert.p_hat0 / 400.0 * std::log(2.0));
    const double denom = cert.U0 * pow2 + cert.eta0 + cert.U + 1.0;
    const double term4 = cert.c0 * cert.c0 / 625.0 / (denom * denom);
    cert.eps0 = std::min(std::min(term1, term2), std::min(term3, term4));

    const TiltMinimum tm = tilt_minimum(ri, cert.eps0);
    cert.gamma_eps0 = tm.gamma;
    cert.one_minus_gamma_eps0 = tm.one_minus_gamma;
    cert.vartheta_eps0 = tm.vartheta;
    cert.vartheta_attained = tm.attained;

    const double inv_vartheta = tm.attained ? 1.0 / tm.vartheta : 0.0;
    const double walk_term =
        max_bh * tm.gamma * inv_vartheta / (tm.one_minus_gamma * tm.one_minus_gamma);
    const double a = cert.U0 * pow2 + walk_term;
    cert.Y0 = 25.0 / (cert.g * cert.g) * a * a + ri.L0 + 1;
    return cert;
}

AdditiveGap additive_gap_bound(const GapCertificate& cert, double L0, double max_bh, double L) {
    AdditiveGap out;
    out.min_valid_L = 1.0 / (cert.eps0 * cert.eps0) + L0 + 1.0;
    out.applicable = L > out.min_valid_L;
    const double inv_vartheta = cert.vartheta_attained ? 1.0 / cert.vartheta_eps0 : 0.0;
    const double walk_term = max_bh * cert.gamma_eps0 * inv_vartheta /
                             (cert.one_minus_gamma_eps0 * cert.one_minus_gamma_eps0);
    out.gap = 5.0 * std::log(L) / L * (cert.U0 * std::pow(2.0, L0) + walk_term);
    out.ratio_bound = 1.0 + out.gap / cert.g;
    return out;
}

AdditiveGap additive_gap_bound(const Instance& inst, double L) {
    if (!(L >= 2.0)) throw std::invalid_argument("additive_gap_bound: L must be >= 2");
    const GapCertificate cert = certificate(inst);
    return additive_gap_bound(cert, inst.L0, std::max(inst.b, inst.h), L);
}

double prefix_max_tail_bound(const Instance& inst, double eps, int n) {
    if (n < 1) throw std::invalid_argument("prefix_max_tail_bound: n must be >= 1");
    if (!(eps > 0.0) || eps >= inst.demand.mean())
        throw std::invalid_argument("prefix_max_tail_bound: eps must lie in (0, E[D])");
    const TiltMinimum tm = tilt_minimum(inst, eps);
    if (!tm.attained) return 0.0;  // walk maxima vanish identically in this regime
    return std::pow(tm.gamma, n) / (tm.vartheta * tm.one_minus_gamma);
}

}  // namespace dualsrc
