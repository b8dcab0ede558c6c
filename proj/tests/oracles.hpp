// Independent numerical oracles for the closed-form solutions under test:
// RK4 integration of the raw ODEs and a shooting-method boundary value
// solver. These deliberately avoid the library's exponential formulas.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace oracles {

/// RK4 on x' = f(t, x) for a scalar state.
inline double rk4_scalar(std::function<double(double, double)> f, double x0, double t0,
                         double t1, int steps) {
    const double h = (t1 - t0) / steps;
    double x = x0;
    double t = t0;
    for (int i = 0; i < steps; ++i) {
        const double k1 = f(t, x);
        const double k2 = f(t + 0.5 * h, x + 0.5 * h * k1);
        const double k3 = f(t + 0.5 * h, x + 0.5 * h * k2);
        const double k4 = f(t + h, x + h * k3);
        x += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
        t += h;
    }
    return x;
}

struct SecondOrderState {
    double pos;
    double vel;
};

/// RK4 on pos'' = acc(t, pos, vel).
inline SecondOrderState rk4_second_order(
    std::function<double(double, double, double)> acc, SecondOrderState s0, double t0,
    double t1, int steps) {
    const double h = (t1 - t0) / steps;
    SecondOrderState s = s0;
    double t = t0;
    for (int i = 0; i < steps; ++i) {
        const double k1p = s.vel;
        const double k1v = acc(t, s.pos, s.vel);
        const double k2p = s.vel + 0.5 * h * k1v;
        const double k2v = acc(t + 0.5 * h, s.pos + 0.5 * h * k1p, s.vel + 0.5 * h * k1v);
        const double k3p = s.vel + 0.5 * h * k2v;
        const double k3v = acc(t + 0.5 * h, s.pos + 0.5 * h * k2p, s.vel + 0.5 * h * k2v);
        const double k4p = s.vel + h * k3v;
        const double k4v = acc(t + h, s.pos + h * k3p, s.vel + h * k3v);
        s.pos += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
        s.vel += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
        t += h;
    }
    return s;
}

/// Shooting-method solve of the pendulum boundary value problem
/// c'' = w^2 (c - p), c(t0) = c0, c(tf) = cf: finds the initial velocity by
/// secant iteration on the RK4 endpoint, then integrates to the query time.
class ShootingBvp {
  public:
    ShootingBvp(double p, double c0, double cf, double t0, double tf, double omega)
        : p_(p), c0_(c0), cf_(cf), t0_(t0), tf_(tf), omega_(omega) {
        double v_lo = -10.0, v_hi = 10.0;
        double f_lo = endpoint(v_lo) - cf_;
        double f_hi = endpoint(v_hi) - cf_;
        // The endpoint is affine in the initial velocity, so one secant step
        // is exact up to integration error; iterate a few times anyway.
        double v = v_lo;
        for (int i = 0; i < 50; ++i) {
            v = v_lo - f_lo * (v_hi - v_lo) / (f_hi - f_lo);
            const double fv = endpoint(v) - cf_;
            if (std::abs(fv) < 1e-13) break;
            v_lo = v_hi;
            f_lo = f_hi;
            v_hi = v;
            f_hi = fv;
        }
        v0_ = v;
    }

    double initial_velocity() const { return v0_; }

    double eval(double t) const {
        if (t < t0_ || t > tf_) throw std::out_of_range("ShootingBvp: t outside interval");
        const int steps = std::max(1, static_cast<int>(std::ceil((t - t0_) / 1e-4)));
        return rk4_second_order(acc(), {c0_, v0_}, t0_, t, steps).pos;
    }

  private:
    std::function<double(double, double, double)> acc() const {
        const double w2 = omega_ * omega_;
        const double p = p_;
        return [w2, p](double, double pos, double) { return w2 * (pos - p); };
    }

    double endpoint(double v0) const {
        const int steps = static_cast<int>(std::ceil((tf_ - t0_) / 1e-4));
        return rk4_second_order(acc(), {c0_, v0}, t0_, tf_, steps).pos;
    }

    double p_, c0_, cf_, t0_, tf_, omega_;
    double v0_ = 0.0;
};

}  // namespace oracles
