// Simulated robot: LIPM dynamics under the applied ZMP with support-polygon
// saturation, external push forces and measurement noise.
#pragma once

#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcmwalk/lipm.hpp"
#include "dcmwalk/planar.hpp"

namespace dcmwalk {

struct RobotPhysicalParams {
    double mass = 30.0;         // [kg]
    double com_height = 1.0;    // [m]
    double foot_length = 0.15;  // [m]
    double foot_width = 0.075;  // [m]
};

inline std::vector<std::string> validate_robot(const RobotPhysicalParams& r) {
    std::vector<std::string> bad;
    if (!(r.mass > 0.0)) bad.push_back("mass must be > 0");
    if (!(r.com_height > 0.0)) bad.push_back("com_height must be > 0");
    if (!(r.foot_length > 0.0)) bad.push_back("foot_length must be > 0");
    if (!(r.foot_width > 0.0)) bad.push_back("foot_width must be > 0");
    return bad;
}

/// External push applied at the COM as a constant force over a time window.
struct PushEvent {
    PlanarVec force;          // [N]
    double start_time = 0.0;  // [s]
    double duration = 0.01;   // [s]

    bool active_at(double t) const { return t >= start_time && t < start_time + duration; }
};

struct NoiseModel {
    double measurement_variance = 0.0;  // [m^2] per measured channel
    unsigned long long rng_seed = 0;
};

/// Axis-aligned rectangle of admissible ZMP positions.
struct SupportPolygon {
    PlanarVec center;
    double half_length = 0.075;  // x half-extent
    double half_width = 0.0375;  // y half-extent

    bool contains(const PlanarVec& p) const {
        return std::abs(p.x - center.x) <= half_length && std::abs(p.y - center.y) <= half_width;
    }
};

inline SupportPolygon single_support_polygon(const PlanarVec& foot,
                                             const RobotPhysicalParams& r) {
    return {foot, 0.5 * r.foot_length, 0.5 * r.foot_width};
}

/// Double support approximated by the bounding rectangle of both feet.
inline SupportPolygon double_support_polygon(const PlanarVec& foot_a, const PlanarVec& foot_b,
                                             const RobotPhysicalParams& r) {
    const double hl = 0.5 * r.foot_length;
    const double hw = 0.5 * r.foot_width;
    const double x_lo = std::min(foot_a.x, foot_b.x) - hl;
    const double x_hi = std::max(foot_a.x, foot_b.x) + hl;
    const double y_lo = std::min(foot_a.y, foot_b.y) - hw;
    const double y_hi = std::max(foot_a.y, foot_b.y) + hw;
    return {{0.5 * (x_lo + x_hi), 0.5 * (y_lo + y_hi)}, 0.5 * (x_hi - x_lo), 0.5 * (y_hi - y_lo)};
}

/// Componentwise clamp of the commanded ZMP into the support rectangle.
inline PlanarVec saturate_zmp(const PlanarVec& p_cmd, const SupportPolygon& poly) {
    return {clamp(p_cmd.x, poly.center.x - poly.half_length, poly.center.x + poly.half_length),
            clamp(p_cmd.y, poly.center.y - poly.half_width, poly.center.y + poly.half_width)};
}

/// Integrates c_ddot = w^2 (c - p) + F/m over [t, t+dt) with p held constant.
/// A constant force shifts the effective pivot by -F/(m w^2), so each
/// sub-interval (split at the push window edges) propagates exactly.
inline LipmState step_dynamics(const LipmState& s, const PlanarVec& p_applied,
                               const std::optional<PushEvent>& push, double t, double dt,
                               const PendulumParams& pend, double mass) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_dynamics: dt must be positive");
    const double omega = pend.omega;

    double cuts[4] = {t, t + dt, t + dt, t + dt};
    if (push) {
        cuts[1] = clamp(push->start_time, t, t + dt);
        cuts[2] = clamp(push->start_time + push->duration, t, t + dt);
    }

    LipmState cur = s;
    for (int k = 0; k < 3; ++k) {
        const double a = cuts[k];
        const double b = cuts[k + 1];
        if (b <= a) continue;
        PlanarVec pivot = p_applied;
        if (push && push->active_at(0.5 * (a + b))) {
            pivot -= push->force / (mass * omega * omega);
        }
        cur = propagate_state(cur, pivot, b - a, omega);
    }
    return cur;
}

struct Measurement {
    PlanarVec com;
    PlanarVec com_vel;
    PlanarVec dcm;
};

/// Fall test: the DCM has left the recoverable neighbourhood of the support,
/// or the COM has run away from the stance. Thresholds are simulation
/// conventions, not physical constants.
inline bool is_fallen(const LipmState& s, const SupportPolygon& support, double omega,
                      double fall_radius = 1.2, double com_excursion = 2.0) {
    if (!s.com.finite() || !s.com_velocity.finite()) return true;
    const PlanarVec dcm = dcm_of_state(s, omega);
    if ((dcm - support.center).norm() > fall_radius) return true;
    if ((s.com - support.center).norm() > com_excursion) return true;
    return false;
}

/// Owns the simulated rigid state, the simulation clock and the measurement
/// noise stream.
class LipmPlant {
  public:
    LipmPlant(const LipmState& initial, const PendulumParams& pend,
              const RobotPhysicalParams& robot, const NoiseModel& noise)
        : state_(initial), pendulum_(pend), robot_(robot), noise_(noise),
          rng_(noise.rng_seed) {}

    const LipmState& state() const { return state_; }
    double time() const { return time_; }
    const PendulumParams& pendulum() const { return pendulum_; }
    const RobotPhysicalParams& robot() const { return robot_; }

    void step(const PlanarVec& p_applied, const std::optional<PushEvent>& push, double dt) {
        state_ = step_dynamics(state_, p_applied, push, time_, dt, pendulum_, robot_.mass);
        time_ += dt;
    }

    /// Noisy (c, c_dot) with the DCM derived from the noisy channels.
    Measurement measure() {
        Measurement m;
        const double sd = std::sqrt(noise_.measurement_variance);
        m.com = state_.com + PlanarVec{sd * gauss_(rng_), sd * gauss_(rng_)};
        m.com_vel = state_.com_velocity + PlanarVec{sd * gauss_(rng_), sd * gauss_(rng_)};
        m.dcm = m.com + m.com_vel / pendulum_.omega;
        return m;
    }

  private:
    LipmState state_;
    PendulumParams pendulum_;
    RobotPhysicalParams robot_;
    NoiseModel noise_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> gauss_{0.0, 1.0};
    double time_ = 0.0;
};

}  // namespace dcmwalk
