// LQG tracking controller: per-axis [COM, DCM] state space, LQR feedback
// with integral action on the DCM error, and a steady-state Kalman filter.
//
// Taking the DCM definition's derivative and substituting the pendulum
// dynamics gives, per axis,
//
//   d/dt [c]   [-w  w] [c]   [ 0]
//        [z] = [ 0  w] [z] + [-w] p
//
// The COM row is stable (it converges to the DCM on its own); only the DCM
// row needs control. Both states are measured each cycle. The axes share one
// gain set since the sagittal and frontal dynamics are identical.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

#include "dcmwalk/gait.hpp"
#include "dcmwalk/planar.hpp"
#include "dcmwalk/plant.hpp"
#include "dcmwalk/riccati.hpp"

namespace dcmwalk {

struct AxisStateSpace {
    Eigen::Matrix2d A;
    Eigen::Vector2d B;
};

inline AxisStateSpace build_state_space(double omega) {
    if (!(omega > 0.0)) throw std::domain_error("build_state_space: omega must be positive");
    AxisStateSpace ss;
    ss.A << -omega, omega, 0.0, omega;
    ss.B << 0.0, -omega;
    return ss;
}

struct DiscreteStateSpace {
    Eigen::Matrix2d A;
    Eigen::Vector2d B;
};

/// Exact zero-order-hold discretization via the matrix exponential of the
/// augmented [A B; 0 0] block.
inline DiscreteStateSpace discretize(const AxisStateSpace& ss, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("discretize: dt must be positive");
    Eigen::Matrix3d aug = Eigen::Matrix3d::Zero();
    aug.topLeftCorner<2, 2>() = ss.A;
    aug.topRightCorner<2, 1>() = ss.B;
    const Eigen::Matrix3d expm = (aug * dt).exp();
    DiscreteStateSpace d;
    d.A = expm.topLeftCorner<2, 2>();
    d.B = expm.topRightCorner<2, 1>();
    return d;
}

struct ControllerWeights {
    double q_com = 10.0;        // COM tracking error weight
    double q_dcm = 100.0;       // DCM tracking error weight
    double q_integral = 1.0;    // integral state weight
    double r_zmp = 1.0;         // control effort weight
    double process_cov = 1e-6;  // Kalman process covariance (per state)
    double meas_cov = 6.25e-4;  // Kalman measurement covariance (per channel)
    double integral_limit = 0.5;  // anti-windup clamp on the DCM-error integral [m s]
};

/// Synthesized gains for one (omega, dt) pair; shared by both axes.
struct GainSet {
    double omega = 0.0;
    double dt = 0.0;
    DiscreteStateSpace plant;     // discretized [c, z] model
    Eigen::Matrix3d A_aug;        // [c, z, integral] design model
    Eigen::Vector3d B_aug;
    Eigen::RowVector3d K;         // feedback over [c err, z err, integral]
    Eigen::Matrix2d L;            // Kalman innovation gain
    Eigen::Matrix3d P_lqr;        // stabilizing DARE solutions, kept for diagnostics
    Eigen::Matrix2d P_kf;
    ControllerWeights weights;
};

inline GainSet synthesize_gains(double omega, double dt, const ControllerWeights& w) {
    GainSet g;
    g.omega = omega;
    g.dt = dt;
    g.weights = w;
    g.plant = discretize(build_state_space(omega), dt);

    // Integral state accumulates the DCM tracking error: xi+ = xi + dt * z_err.
    g.A_aug = Eigen::Matrix3d::Zero();
    g.A_aug.topLeftCorner<2, 2>() = g.plant.A;
    g.A_aug(2, 1) = dt;
    g.A_aug(2, 2) = 1.0;
    g.B_aug << g.plant.B(0), g.plant.B(1), 0.0;

    const Eigen::Matrix3d Q = Eigen::Vector3d(w.q_com, w.q_dcm, w.q_integral).asDiagonal();
    const Eigen::MatrixXd R = Eigen::MatrixXd::Constant(1, 1, w.r_zmp);
    Eigen::MatrixXd P;
    g.K = lqr_gain(g.A_aug, g.B_aug, Q, R, &P);
    g.P_lqr = P;

    const Eigen::Matrix2d Qp = Eigen::Matrix2d::Identity() * w.process_cov;
    const Eigen::Matrix2d Rm = Eigen::Matrix2d::Identity() * w.meas_cov;
    Eigen::MatrixXd Pk;
    g.L = kalman_gain(g.plant.A, Eigen::Matrix2d::Identity(), Qp, Rm, &Pk);
    g.P_kf = Pk;
    return g;
}

/// Per-axis estimator + integrator state. The estimate is seeded from the
/// first measurement to avoid a spurious startup transient.
struct ControllerState {
    std::array<Eigen::Vector2d, 2> estimate{Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero()};
    PlanarVec integral;
    PlanarVec last_input;
    bool initialized = false;
};

/// Kalman update: predict with the last applied input, correct with the
/// measurement y = (c, zeta) per axis.
inline void kf_observe(ControllerState& cs, const GainSet& g, const Measurement& meas) {
    const std::array<double, 2> y_com{meas.com.x, meas.com.y};
    const std::array<double, 2> y_dcm{meas.dcm.x, meas.dcm.y};
    const std::array<double, 2> u_last{cs.last_input.x, cs.last_input.y};
    for (size_t a = 0; a < 2; ++a) {
        Eigen::Vector2d& xh = cs.estimate[a];
        const Eigen::Vector2d y(y_com[a], y_dcm[a]);
        if (cs.initialized) {
            xh = g.plant.A * xh + g.plant.B * u_last[a];
            xh += g.L * (y - xh);
        } else {
            xh = y;
        }
    }
    cs.initialized = true;
}

inline PlanarVec estimate_com(const ControllerState& cs) {
    return {cs.estimate[0](0), cs.estimate[1](0)};
}

inline PlanarVec estimate_dcm(const ControllerState& cs) {
    return {cs.estimate[0](1), cs.estimate[1](1)};
}

/// Feedback law: integrate the estimated DCM error (with anti-windup) and
/// command p = p_ref - K [x^ - x_des; xi] per axis.
inline PlanarVec lqg_command(ControllerState& cs, const GainSet& g, const ReferenceFrame& ref,
                             double dt) {
    const std::array<double, 2> ref_com{ref.com_ref.x, ref.com_ref.y};
    const std::array<double, 2> ref_dcm{ref.dcm_ref.x, ref.dcm_ref.y};
    const std::array<double, 2> ref_zmp{ref.zmp_ref.x, ref.zmp_ref.y};
    std::array<double, 2> integral{cs.integral.x, cs.integral.y};
    std::array<double, 2> u{};
    for (size_t a = 0; a < 2; ++a) {
        const double err_c = cs.estimate[a](0) - ref_com[a];
        const double err_z = cs.estimate[a](1) - ref_dcm[a];
        double xi = integral[a] + err_z * dt;
        xi = clamp(xi, -g.weights.integral_limit, g.weights.integral_limit);
        integral[a] = xi;
        u[a] = ref_zmp[a] - (g.K(0) * err_c + g.K(1) * err_z + g.K(2) * xi);
    }
    cs.integral = {integral[0], integral[1]};
    cs.last_input = {u[0], u[1]};
    return cs.last_input;
}

/// One full LQG cycle (observe + command).
inline PlanarVec control_step(const Measurement& meas, const ReferenceFrame& ref,
                              ControllerState& cs, const GainSet& g, double dt) {
    kf_observe(cs, g, meas);
    return lqg_command(cs, g, ref, dt);
}

/// Tells the estimator what the plant actually received (the command after
/// support-polygon saturation), keeping the prediction consistent.
inline void note_applied_input(ControllerState& cs, const PlanarVec& applied) {
    cs.last_input = applied;
}

}  // namespace dcmwalk
