#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dcmwalk/lipm.hpp"
#include "dcmwalk/step_adjuster.hpp"

using namespace dcmwalk;

namespace {
const double kOmega = std::sqrt(9.81);
}

TEST_CASE("touchdown prediction") {
    const PlanarVec f{0.1, -0.1};

    // DCM at the support foot never diverges.
    CHECK(predict_dcm_at_landing(f, f, 0.2, 0.8, kOmega) == f);

    // Zero horizon returns the current DCM.
    const PlanarVec z{0.15, -0.05};
    CHECK(predict_dcm_at_landing(z, f, 0.8, 0.8, kOmega) == z);

    // Offset of 0.01 with w (T_ss - t) = 2 grows to 0.0739.
    const double horizon = 2.0 / kOmega;
    const PlanarVec p = predict_dcm_at_landing({f.x + 0.01, f.y}, f, 0.0, horizon, kOmega);
    CHECK(std::abs((p.x - f.x) - 0.01 * std::exp(2.0)) < 1e-12);
    CHECK(std::abs(p.x - f.x - 0.0739) < 1e-4);

    // Identical to the DCM propagation closed form.
    const PlanarVec via_prop = propagate_dcm({f.x + 0.01, f.y}, f, horizon, kOmega);
    CHECK(std::abs(p.x - via_prop.x) < 1e-12);
}

TEST_CASE("landing error is a plain difference") {
    CHECK(step_location_error({0.3, 0.1}, {0.3, 0.1}).norm() == 0.0);
    CHECK(step_location_error({0.5, 0.0}, {0.3, 0.0}) == PlanarVec{0.2, 0.0});
}

TEST_CASE("location adjustment dead band and proportional law") {
    AdjusterGains g;
    CHECK(adjust_location({0.015, 0.0}, g) == PlanarVec{0.0, 0.0});
    CHECK(adjust_location({0.02, 0.0}, g) == PlanarVec{0.0, 0.0});  // boundary inside

    const PlanarVec dp = adjust_location({0.1, 0.0}, g);
    CHECK(dp == PlanarVec{-0.1, 0.0});

    g.k_sa = 0.5;
    CHECK(adjust_location({0.1, -0.04}, g) == PlanarVec{-0.05, 0.02});

    // The margin applies to the norm, not per axis.
    CHECK(adjust_location({0.015, 0.015}, g).norm() > 0.0);
}

TEST_CASE("time adjustment is zero when the prediction already hits the target") {
    AdjusterGains g;
    const PlanarVec f_i{0.0, -0.1};
    const PlanarVec f_next{0.0, 0.1};
    const double t = 0.25, t_ss = 0.8;

    const PlanarVec zeta{0.01, -0.02};
    const PlanarVec predicted = predict_dcm_at_landing(zeta, f_i, t, t_ss, kOmega);
    const PlanarVec offset = predicted - f_next;  // make the target exactly nominal
    const TimeAdjustment ta = adjust_time(zeta, f_i, f_next, offset, t, t_ss, kOmega, g);
    CHECK(std::abs(ta.delta_t) < 1e-9);
    CHECK(std::abs(ta.t_ss_new - t_ss) < 1e-9);
}

TEST_CASE("a faster-diverging dcm steps sooner") {
    AdjusterGains g;
    g.k_f = 1.0;
    const PlanarVec f_i{0.0, 0.0};
    const PlanarVec f_next{0.0, 0.0};
    const double t = 0.2, t_ss = 0.8;

    // Target: where a modest divergence would land at nominal time.
    const PlanarVec nominal_dcm{0.01, 0.0};
    const PlanarVec target_offset =
        predict_dcm_at_landing(nominal_dcm, f_i, t, t_ss, kOmega) - f_next;

    // The measured DCM diverges twice as fast.
    const TimeAdjustment ta =
        adjust_time({0.02, 0.0}, f_i, f_next, target_offset, t, t_ss, kOmega, g);
    CHECK(ta.delta_t < 0.0);
    CHECK(ta.t_ss_new < t_ss);

    // Analytically: T' - T_ss = -ln(2)/w.
    CHECK(std::abs(ta.delta_t + std::log(2.0) / kOmega) < 1e-12);
}

TEST_CASE("time adjustment saturates at +-dt_sat") {
    AdjusterGains g;
    g.k_f = 1.0;
    const PlanarVec f_i{0.0, 0.0};
    const PlanarVec f_next{0.0, 0.0};
    const double t = 0.0, t_ss = 0.8;

    // Request -0.35 s: the target is reached 0.35 s before nominal.
    const double t_land = t_ss - 0.35;
    const PlanarVec zeta{0.01, 0.0};
    const PlanarVec target = predict_dcm_at_landing(zeta, f_i, t, t_land, kOmega);
    const TimeAdjustment early =
        adjust_time(zeta, f_i, f_next, target - f_next, t, t_ss, kOmega, g);
    CHECK(early.delta_t == -0.2);

    // Request +0.35 s.
    const PlanarVec target_late = predict_dcm_at_landing(zeta, f_i, t, t_ss + 0.35, kOmega);
    const TimeAdjustment late =
        adjust_time(zeta, f_i, f_next, target_late - f_next, t, t_ss, kOmega, g);
    CHECK(late.delta_t == 0.2);
}

TEST_CASE("lag filter endpoints and monotonicity") {
    const PlanarVec f_i{0.0, 0.0};
    const PlanarVec f_next{0.0, 0.0};
    const double t = 0.1, t_ss = 0.8;
    const PlanarVec zeta{0.02, 0.0};
    const PlanarVec target = predict_dcm_at_landing({0.01, 0.0}, f_i, t, t_ss, kOmega);

    AdjusterGains full;
    full.k_f = 1.0;
    const TimeAdjustment ta_full =
        adjust_time(zeta, f_i, f_next, target - f_next, t, t_ss, kOmega, full);
    CHECK(std::abs(ta_full.t_ss_new - (t_ss + ta_full.delta_t)) < 1e-12);

    for (double k_f : {0.05, 0.1, 0.3, 0.7, 0.95}) {
        AdjusterGains g;
        g.k_f = k_f;
        const TimeAdjustment ta =
            adjust_time(zeta, f_i, f_next, target - f_next, t, t_ss, kOmega, g);
        // Filtered value lies between the current duration and the request.
        CHECK(ta.t_ss_new <= t_ss + 1e-12);
        CHECK(ta.t_ss_new >= t_ss + ta.delta_t - 1e-12);
        CHECK(std::abs(ta.t_ss_new - (t_ss + k_f * ta.delta_t)) < 1e-12);
    }
}

TEST_CASE("dcm past the target on the wrong side pins the fastest step-down") {
    AdjusterGains g;
    g.k_f = 1.0;
    // Target behind the support while the DCM diverges ahead: the log
    // argument is negative, so the adjuster steps down as fast as allowed.
    const TimeAdjustment ta = adjust_time({0.05, 0.0}, {0.0, 0.0}, {-0.2, 0.0},
                                          {0.0, 0.0}, 0.1, 0.8, kOmega, g);
    CHECK(ta.delta_t == -g.dt_sat);
}

TEST_CASE("degenerate dcm at the support yields no time adjustment") {
    AdjusterGains g;
    const TimeAdjustment ta = adjust_time({0.0, 0.0}, {0.0, 0.0}, {0.1, 0.0}, {0.0, 0.0},
                                          0.1, 0.8, kOmega, g);
    CHECK(ta.delta_t == 0.0);
    CHECK(ta.t_ss_new == 0.8);
}
