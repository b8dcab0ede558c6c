// Next-step adjusters: DCM-based prediction of the divergence at touchdown
// and proportional correction of the next footstep location and of the
// remaining step time.
#pragma once

#include <cmath>
#include <stdexcept>

#include "dcmwalk/planar.hpp"

namespace dcmwalk {

struct AdjusterGains {
    double k_sa = 1.0;               // location feedback gain
    double k_f = 0.1;                // step-time lag filter weight, in (0, 1]
    double compliance_margin = 0.02;  // dead band on the landing error norm [m]
    double max_step = 0.95;          // landing displacement limit [m]
    double dt_sat = 0.2;             // step-time change saturation [s]
    double retarget_cutoff = 0.8;    // location retargets allowed while t < cutoff * T_ss
};

/// Predicted DCM at touchdown: the divergence from the support foot grows
/// exponentially over the remaining single-support time,
/// f_p = f_i + (zeta_t - f_i) e^{w (T_ss - t)}.
inline PlanarVec predict_dcm_at_landing(const PlanarVec& dcm, const PlanarVec& support,
                                        double t, double t_ss, double omega) {
    return support + (dcm - support) * std::exp(omega * (t_ss - t));
}

/// Landing error: predicted touchdown DCM minus the next planned position.
inline PlanarVec step_location_error(const PlanarVec& predicted, const PlanarVec& next_print) {
    return predicted - next_print;
}

/// Proportional location adjustment dp = -k_sa df, dead-banded by the
/// compliance margin to avoid unnecessary adjustments.
inline PlanarVec adjust_location(const PlanarVec& delta_f, const AdjusterGains& g) {
    if (delta_f.norm() <= g.compliance_margin) return {0.0, 0.0};
    return delta_f * -g.k_sa;
}

struct TimeAdjustment {
    double delta_t = 0.0;   // requested landing-time change after saturation [s]
    double t_ss_new = 0.0;  // lag-filtered single-support duration [s]
};

/// Solves f_i + (zeta_t - f_i) e^{w (T' - t)} = target for the touchdown time
/// T' on the axis with the largest predicted error, where
/// target = next_print + target_dcm_offset (the unperturbed gait's own
/// touchdown DCM). The change is saturated at +-dt_sat and blended through a
/// first-order lag: T_new = T_ss (1 - k_f) + (T_ss + dt) k_f.
inline TimeAdjustment adjust_time(const PlanarVec& dcm, const PlanarVec& support,
                                  const PlanarVec& next_print,
                                  const PlanarVec& target_dcm_offset, double t, double t_ss,
                                  double omega, const AdjusterGains& g) {
    const PlanarVec target = next_print + target_dcm_offset;
    const PlanarVec predicted = predict_dcm_at_landing(dcm, support, t, t_ss, omega);
    const PlanarVec err = predicted - target;

    const bool use_x = std::abs(err.x) >= std::abs(err.y);
    const double num = use_x ? target.x - support.x : target.y - support.y;
    const double den = use_x ? dcm.x - support.x : dcm.y - support.y;

    TimeAdjustment out;
    if (std::abs(den) < 1e-12) {
        out.t_ss_new = t_ss;
        return out;  // no divergence on the dominant axis; nothing to solve
    }
    const double ratio = num / den;
    double dt;
    if (ratio <= 0.0) {
        // DCM already past the target on the wrong side: step down as fast as allowed.
        dt = -g.dt_sat;
    } else {
        const double t_land = t + std::log(ratio) / omega;
        dt = clamp(t_land - t_ss, -g.dt_sat, g.dt_sat);
    }
    out.delta_t = dt;
    out.t_ss_new = t_ss * (1.0 - g.k_f) + (t_ss + dt) * g.k_f;
    return out;
}

}  // namespace dcmwalk
