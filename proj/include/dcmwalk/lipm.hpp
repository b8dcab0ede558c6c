// Linear inverted pendulum math shared by planners, controller, adjusters
// and the simulated plant.
//
// The model is the constant-height pendulum
//
//     c_ddot = w^2 (c - p),       w = sqrt((g + z_ddot) / z_c)
//
// whose coordinates split into a stable component (the COM converging to the
// DCM) and an unstable one (the DCM, zeta = c + c_dot / w, diverging away
// from the ZMP p). Both have closed-form solutions for piecewise-constant p,
// which this header exposes; everything else in the library is built on top
// of these. Sagittal and frontal axes decouple, so every operation is the
// same scalar formula applied per axis.
#pragma once

#include <cmath>
#include <stdexcept>

#include "dcmwalk/planar.hpp"

namespace dcmwalk {

struct PendulumParams {
    double com_height = 1.0;          // z_c [m]
    double com_vertical_accel = 0.0;  // z_ddot [m/s^2]
    double gravity = 9.81;            // g [m/s^2]
    double omega = 0.0;               // natural frequency [1/s]
};

struct LipmState {
    PlanarVec com;           // c [m]
    PlanarVec com_velocity;  // c_dot [m/s]
};

/// Natural frequency w = sqrt((g + z_ddot) / z_c).
inline double natural_frequency(double com_height, double com_vertical_accel, double gravity) {
    if (!(com_height > 0.0))
        throw std::domain_error("natural_frequency: com_height must be positive");
    const double vertical = gravity + com_vertical_accel;
    if (!(vertical > 0.0))
        throw std::domain_error("natural_frequency: g + z_ddot must be positive");
    return std::sqrt(vertical / com_height);
}

inline PendulumParams make_pendulum(double com_height, double gravity,
                                    double com_vertical_accel = 0.0) {
    PendulumParams p;
    p.com_height = com_height;
    p.com_vertical_accel = com_vertical_accel;
    p.gravity = gravity;
    p.omega = natural_frequency(com_height, com_vertical_accel, gravity);
    return p;
}

/// COM acceleration w^2 (c - p) under pivot p.
inline PlanarVec com_acceleration(const PlanarVec& com, const PlanarVec& zmp, double omega) {
    require_finite(com, "com_acceleration: com");
    require_finite(zmp, "com_acceleration: zmp");
    return (com - zmp) * (omega * omega);
}

/// DCM of a state: zeta = c + c_dot / w.
inline PlanarVec dcm_of_state(const LipmState& s, double omega) {
    return s.com + s.com_velocity / omega;
}

/// Exact DCM propagation under constant ZMP:
/// zeta(t + dt) = p + (zeta(t) - p) e^{w dt}.
inline PlanarVec propagate_dcm(const PlanarVec& dcm, const PlanarVec& zmp, double dt,
                               double omega) {
    return zmp + (dcm - zmp) * std::exp(omega * dt);
}

/// Exact COM propagation under constant ZMP, integrating the stable row
/// c_dot = -w (c - zeta) against the exponential DCM path anchored at `dcm`:
///
///     c(t + dt) = p + (c - p) e^{-w dt} + (zeta - p) sinh(w dt)
inline PlanarVec propagate_com(const PlanarVec& com, const PlanarVec& dcm, const PlanarVec& zmp,
                               double dt, double omega) {
    const double decay = std::exp(-omega * dt);
    const double sh = std::sinh(omega * dt);
    return zmp + (com - zmp) * decay + (dcm - zmp) * sh;
}

/// Exact full-state propagation under constant ZMP over dt.
inline LipmState propagate_state(const LipmState& s, const PlanarVec& zmp, double dt,
                                 double omega) {
    const PlanarVec dcm0 = dcm_of_state(s, omega);
    const PlanarVec dcm1 = propagate_dcm(dcm0, zmp, dt, omega);
    const PlanarVec com1 = propagate_com(s.com, dcm0, zmp, dt, omega);
    // c_dot recovered from the DCM definition keeps the pair consistent.
    return LipmState{com1, (dcm1 - com1) * omega};
}

}  // namespace dcmwalk
