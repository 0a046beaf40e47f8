#pragma once

#include "dualsrc/cost.hpp"

namespace dualsrc {

// Minimum of the exponentially tilted transform over theta >= 0, the decay
// rate of the running-maximum tail of the walk with increments r - D for
// r <= E[D] - eps. one_minus_gamma is computed through expm1 so it stays
// accurate when gamma is within a few ulps of one.
struct TiltMinimum {
    double gamma = 1.0;            // inf_theta exp(theta (E[D]-eps)) E[exp(-theta D)]
    double one_minus_gamma = 0.0;
    double vartheta = 0.0;         // minimizing theta; +inf when unattained
    bool attained = true;
};

// exp(theta (E[D] - eps)) * E[exp(-theta D)] for theta >= 0, eps in (0, E[D]].
double tilted_transform(const Instance& inst, double eps, double theta);

// Bracketing expansion (doubling theta) followed by golden-section search to
// 1e-12 relative bracket width. When the transform keeps decreasing (no
// demand atom below E[D] - eps), the infimum is unattained: vartheta = +inf
// and gamma is the analytic limit.
TiltMinimum tilt_minimum(const Instance& inst, double eps);

// Explicit constants certifying the asymptotic optimality of the best TBS
// policy, all computed on the premium-only (c_R = 0) reduction.
struct GapCertificate {
    double p0 = 0.0;      // P(D < E[D])
    double p_hat0 = 0.0;  // sqrt(p0 (1 - p0) / 2)
    double Q0 = 0.0;      // smallest x with P(D <= x) >= p0 / 2
    double eta0 = 0.0;    // min_z E|z - D|
    double c0 = 0.0;      // min(b,h) p_hat0 eta0 / 240
    double U0 = 0.0;      // 64 (L0+1) max(b,h)^2 / min(b,h) * E[D]
    double g = 0.0;       // newsvendor floor: min_x E[cost(x - lead-time demand)]
    double U = 0.0;       // cost of the (0,0) policy, an upper bound on OPT
    double eps0 = 0.0;    // min of the four containment terms; always < 0.002
    double Y0 = 0.0;
    double gamma_eps0 = 0.0;
    double one_minus_gamma_eps0 = 0.0;
    double vartheta_eps0 = 0.0;
    bool vartheta_attained = true;

    // Smallest integer L with L > eps0^-2 + Y0 * eps^-2 (as a double; the
    // thresholds routinely exceed 2^53).
    double min_L_for(double eps) const;
};

GapCertificate certificate(const Instance& inst);

// Additive bound on best-TBS cost minus OPT(L):
//   5 log(L)/L * (U0 2^L0 + max(b,h) gamma vartheta^-1 (1-gamma)^-2),
// valid for L > eps0^-2 + L0 + 1. Outside the validity region the value is
// still reported but flagged inapplicable.
struct AdditiveGap {
    double gap = 0.0;
    double ratio_bound = 0.0;  // 1 + gap / g
    bool applicable = false;
    double min_valid_L = 0.0;
};
AdditiveGap additive_gap_bound(const Instance& inst, double L);
AdditiveGap additive_gap_bound(const GapCertificate& cert, double L0, double max_bh, double L);

// Geometric tail bound gamma^n / (vartheta (1 - gamma)) dominating
// M_inf - M_n for every r <= E[D] - eps. Zero (by the 1/inf = 0 convention)
// when the tilt minimum is unattained, in which case the walk maximum is
// identically zero for such r.
double prefix_max_tail_bound(const Instance& inst, double eps, int n);

}  // namespace dualsrc
