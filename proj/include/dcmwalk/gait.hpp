// Gait planning: footprints, step timing, and the ZMP / swing-foot / COM /
// DCM reference trajectories.
//
// The COM reference solves the pendulum dynamics as a boundary value problem
// per step. For a ZMP that is affine in time on an interval [t0, tf],
// p(t) = p0 + sigma (t - t0), the general solution of c_ddot = w^2 (c - p) is
//
//   c(t) = p(t) + [ (pf - cf) sinh(w (t - t0)) + (c0 - p0) sinh(w (t - tf)) ]
//                 / sinh(w (t0 - tf))
//
// which reduces to the constant-ZMP form when p0 = pf. Steps with a double
// support phase are planned as two chained segments (constant ZMP during
// single support, linear ZMP transfer during double support) joined with a
// velocity-continuous interior knot, so the planned COM is consistent with
// the planned ZMP at every sample.
#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcmwalk/lipm.hpp"
#include "dcmwalk/planar.hpp"
#include "dcmwalk/state_machine.hpp"

namespace dcmwalk {

struct GaitParams {
    PlanarVec step_length{0.5, 0.5};  // SL: advance of a foot relative to its last print [m]
    double t_ss = 0.8;                // single support duration [s]
    double t_ds = 0.2;                // double support duration [s]
    double swing_height = 0.025;      // z_s [m]
    double com_height = 1.0;          // z_c [m]
    double max_step = 0.95;           // kinematic landing displacement limit [m]
    double lateral_offset = 0.1;      // home half-distance between feet [m]
};

inline std::vector<std::string> validate_gait(const GaitParams& g) {
    std::vector<std::string> bad;
    if (!(g.t_ss > 0.0)) bad.push_back("t_ss must be > 0");
    if (!(g.t_ds >= 0.0)) bad.push_back("t_ds must be >= 0");
    if (!(g.swing_height > 0.0)) bad.push_back("swing_height must be > 0");
    if (!(g.com_height > 0.0)) bad.push_back("com_height must be > 0");
    if (!(g.max_step > 0.0)) bad.push_back("max_step must be > 0");
    if (!(g.lateral_offset >= 0.0)) bad.push_back("lateral_offset must be >= 0");
    if (g.step_length.norm() > g.max_step) bad.push_back("step_length exceeds max_step");
    return bad;
}

struct Footprint {
    PlanarVec position;
    int index = 0;
    Side side = Side::Left;
};

inline PlanarVec home_position(Side side, const GaitParams& g) {
    return {0.0, side == Side::Left ? g.lateral_offset : -g.lateral_offset};
}

/// Clamps a landing target so its displacement from the support foot does not
/// exceed max_step, preserving the displacement direction.
inline PlanarVec clamp_step(const PlanarVec& target, const PlanarVec& support, double max_step) {
    return support + clamp_norm(target - support, max_step);
}

/// Footprint ladder for n steps. Index 0 is the initial position of the foot
/// that swings first, index 1 the first support foot; entry k >= 2 is the
/// landing of step k-2, advanced by the step length from the previous print
/// of the same side. Step i is supported on entry i+1 while the swing foot
/// travels from entry i to entry i+2.
inline std::vector<Footprint> build_footprints(int n_steps, const GaitParams& g,
                                               Side first_support) {
    if (n_steps < 1) throw std::invalid_argument("build_footprints: n_steps must be >= 1");
    const auto bad = validate_gait(g);
    if (!bad.empty()) throw std::invalid_argument("build_footprints: " + bad.front());

    std::vector<Footprint> prints;
    prints.reserve(static_cast<size_t>(n_steps) + 2);
    const Side first_swing = other_side(first_support);
    prints.push_back({home_position(first_swing, g), 0, first_swing});
    prints.push_back({home_position(first_support, g), 1, first_support});
    for (int k = 2; k < n_steps + 2; ++k) {
        const Footprint& prev_same_side = prints[static_cast<size_t>(k) - 2];
        prints.push_back({prev_same_side.position + g.step_length, k, prev_same_side.side});
    }
    return prints;
}

/// Footprint plan with the upcoming landing (entry 2) shifted by `shift` and
/// clamped against the current support foot (entry 1).
inline std::vector<Footprint> plan_footprints(int n_steps, const GaitParams& g,
                                              Side first_support, const PlanarVec& shift) {
    auto prints = build_footprints(n_steps, g, first_support);
    prints[2].position =
        clamp_step(prints[2].position + shift, prints[1].position, g.max_step);
    return prints;
}

/// ZMP reference within one step: the support print during single support,
/// then a linear transfer to the next print during double support.
inline PlanarVec plan_zmp(double t, const Footprint& support, const Footprint& next,
                          const GaitParams& g) {
    if (t < 0.0 || t >= g.t_ss + g.t_ds)
        throw std::out_of_range("plan_zmp: t outside the step window");
    if (t < g.t_ss) return support.position;
    return lerp(support.position, next.position, (t - g.t_ss) / g.t_ds);
}

struct PosVel {
    PlanarVec pos;
    PlanarVec vel;
};

namespace detail {

// Scalar boundary value solution for affine p(t) on [t0, tf].
inline void com_bvp_axis(double t, double p0, double pf, double c0, double cf, double t0,
                         double tf, double omega, double& pos, double& vel) {
    const double span = tf - t0;
    const double sigma = (pf - p0) / span;
    const double denom = std::sinh(omega * (t0 - tf));
    const double s_a = std::sinh(omega * (t - t0));
    const double s_b = std::sinh(omega * (t - tf));
    const double c_a = std::cosh(omega * (t - t0));
    const double c_b = std::cosh(omega * (t - tf));
    pos = p0 + sigma * (t - t0) + ((pf - cf) * s_a + (c0 - p0) * s_b) / denom;
    vel = sigma + omega * ((pf - cf) * c_a + (c0 - p0) * c_b) / denom;
}

}  // namespace detail

/// COM boundary value segment with an affine ZMP profile. Satisfies
/// c(t0) = c0, c(tf) = cf and c_ddot = w^2 (c - p(t)) throughout.
struct ComSegment {
    double t0 = 0.0, tf = 1.0;
    PlanarVec c0, cf;  // COM at the segment ends
    PlanarVec p0, pf;  // ZMP at the segment ends (constant when equal)

    PosVel eval(double t, double omega) const {
        if (!(tf > t0)) throw std::invalid_argument("ComSegment: degenerate interval");
        PosVel out;
        detail::com_bvp_axis(t, p0.x, pf.x, c0.x, cf.x, t0, tf, omega, out.pos.x, out.vel.x);
        detail::com_bvp_axis(t, p0.y, pf.y, c0.y, cf.y, t0, tf, omega, out.pos.y, out.vel.y);
        return out;
    }

    PlanarVec zmp(double t) const {
        return lerp(p0, pf, (t - t0) / (tf - t0));
    }
};

/// Evaluates the constant-ZMP boundary value solution and its derivative.
inline PosVel plan_com(double t, const PlanarVec& zmp, const PlanarVec& c0, const PlanarVec& cf,
                       double t0, double tf, double omega) {
    if (!(tf > t0)) throw std::invalid_argument("plan_com: degenerate interval");
    return ComSegment{t0, tf, c0, cf, zmp, zmp}.eval(t, omega);
}

inline PlanarVec plan_dcm(const PlanarVec& com, const PlanarVec& com_vel, double omega) {
    return com + com_vel / omega;
}

namespace detail {

// Scalar interior COM knot joining a constant-ZMP segment of length ss
// (pivot P0, from a) to an affine-ZMP segment of length ds (pivot ramping
// P0 -> P1, ending at b) with continuous velocity at the junction.
inline double c1_knot_axis(double a, double b, double P0, double P1, double ss, double ds,
                           double omega) {
    const double coth_s = std::cosh(omega * ss) / std::sinh(omega * ss);
    const double coth_d = std::cosh(omega * ds) / std::sinh(omega * ds);
    const double sigma = (P1 - P0) / ds;
    const double rhs = sigma - omega * (P1 - b) / std::sinh(omega * ds) +
                       omega * (a - P0) / std::sinh(omega * ss);
    return P0 + rhs / (omega * (coth_s + coth_d));
}

struct EdgeVelocities {
    double v_start = 0.0;
    double v_end = 0.0;
};

// Start and end COM velocity of one whole step (single support + transfer)
// running from boundary position a to b; both are affine in (a, b).
inline EdgeVelocities step_edge_velocities_axis(double a, double b, double P0, double P1,
                                                double ss, double ds, double omega) {
    EdgeVelocities ev;
    double pos;
    if (ds > 0.0) {
        const double k = c1_knot_axis(a, b, P0, P1, ss, ds, omega);
        com_bvp_axis(0.0, P0, P0, a, k, 0.0, ss, omega, pos, ev.v_start);
        com_bvp_axis(ds, P0, P1, k, b, 0.0, ds, omega, pos, ev.v_end);
    } else {
        com_bvp_axis(0.0, P0, P0, a, b, 0.0, ss, omega, pos, ev.v_start);
        com_bvp_axis(ss, P0, P0, a, b, 0.0, ss, omega, pos, ev.v_end);
    }
    return ev;
}

// Interior step-boundary COM positions making the whole walk velocity-
// continuous. b_first and b_last are pinned; the interior positions solve a
// tridiagonal system (for a steady periodic gait they converge to the
// consecutive-footprint midpoints).
inline std::vector<double> solve_c1_chain_axis(const std::vector<double>& p_support,
                                               const std::vector<double>& p_next,
                                               double b_first, double b_last, double ss,
                                               double ds, double omega) {
    const size_t n = p_support.size();
    std::vector<double> b(n + 1);
    b.front() = b_first;
    b.back() = b_last;
    if (n <= 1) return b;

    // Linearize each step's edge velocities: v = k0 + k1 a + k2 b.
    std::vector<double> s0(n), s1(n), s2(n), e0(n), e1(n), e2(n);
    for (size_t i = 0; i < n; ++i) {
        const auto base = step_edge_velocities_axis(0, 0, p_support[i], p_next[i], ss, ds, omega);
        const auto da = step_edge_velocities_axis(1, 0, p_support[i], p_next[i], ss, ds, omega);
        const auto db = step_edge_velocities_axis(0, 1, p_support[i], p_next[i], ss, ds, omega);
        s0[i] = base.v_start;
        s1[i] = da.v_start - base.v_start;
        s2[i] = db.v_start - base.v_start;
        e0[i] = base.v_end;
        e1[i] = da.v_end - base.v_end;
        e2[i] = db.v_end - base.v_end;
    }

    // Velocity continuity at interior boundary i:
    //   e1[i-1] b[i-1] + (e2[i-1] - s1[i]) b[i] - s2[i] b[i+1] = s0[i] - e0[i-1]
    const size_t m = n - 1;  // unknowns b[1..n-1]
    std::vector<double> lower(m), diag(m), upper(m), rhs(m);
    for (size_t i = 1; i <= m; ++i) {
        const size_t r = i - 1;
        lower[r] = e1[i - 1];
        diag[r] = e2[i - 1] - s1[i];
        upper[r] = -s2[i];
        rhs[r] = s0[i] - e0[i - 1];
    }
    rhs[0] -= lower[0] * b_first;
    rhs[m - 1] -= upper[m - 1] * b_last;

    // Thomas algorithm.
    for (size_t r = 1; r < m; ++r) {
        const double w = lower[r] / diag[r - 1];
        diag[r] -= w * upper[r - 1];
        rhs[r] -= w * rhs[r - 1];
    }
    b[m] = rhs[m - 1] / diag[m - 1];
    for (size_t r = m - 1; r >= 1; --r) {
        b[r] = (rhs[r - 1] - upper[r - 1] * b[r + 1]) / diag[r - 1];
    }
    return b;
}

}  // namespace detail

/// Interior COM knot for one step, velocity-continuous at the single-to-double
/// support junction (planar wrapper of the scalar solve).
inline PlanarVec solve_c1_knot(const PlanarVec& a, const PlanarVec& b,
                               const PlanarVec& p_support, const PlanarVec& p_next, double ss,
                               double ds, double omega) {
    return {detail::c1_knot_axis(a.x, b.x, p_support.x, p_next.x, ss, ds, omega),
            detail::c1_knot_axis(a.y, b.y, p_support.y, p_next.y, ss, ds, omega)};
}

/// Rest-to-gait transfer: a COM segment over [0, duration] that starts at
/// c_init with zero velocity and ends at (c_end, v_end), realized by an
/// affine ZMP whose endpoints are solved from those four conditions.
struct InitSegment {
    double duration = 1.0;
    PlanarVec zmp_start, zmp_end;
    PlanarVec coeff_grow, coeff_decay;  // c(t) = p(t) + A e^{wt} + B e^{-wt}
    PlanarVec c_init;

    static InitSegment solve(const PlanarVec& c_init, const PlanarVec& c_end,
                             const PlanarVec& v_end, double duration, double omega) {
        InitSegment seg;
        seg.duration = duration;
        seg.c_init = c_init;
        const double E = std::exp(omega * duration);
        const double wT = omega * duration;
        auto axis = [&](double ci, double ce, double ve, double& pa, double& pb, double& A,
                        double& B) {
            // A (E - 1 - wT) + B (1/E - 1 + wT) = ce - ci
            // A (E - 1)      + B (1 - 1/E)      = ve / w
            const double m11 = E - 1.0 - wT, m12 = 1.0 / E - 1.0 + wT;
            const double m21 = E - 1.0, m22 = 1.0 - 1.0 / E;
            const double r1 = ce - ci, r2 = ve / omega;
            const double det = m11 * m22 - m12 * m21;
            A = (r1 * m22 - m12 * r2) / det;
            B = (m11 * r2 - r1 * m21) / det;
            pa = ci - A - B;
            pb = pa + omega * (B - A) * duration;
        };
        axis(c_init.x, c_end.x, v_end.x, seg.zmp_start.x, seg.zmp_end.x, seg.coeff_grow.x,
             seg.coeff_decay.x);
        axis(c_init.y, c_end.y, v_end.y, seg.zmp_start.y, seg.zmp_end.y, seg.coeff_grow.y,
             seg.coeff_decay.y);
        return seg;
    }

    PlanarVec zmp(double t) const { return lerp(zmp_start, zmp_end, t / duration); }

    PosVel eval(double t, double omega) const {
        const double eg = std::exp(omega * t);
        const double ed = std::exp(-omega * t);
        const PlanarVec sigma = (zmp_end - zmp_start) / duration;
        PosVel out;
        out.pos = zmp(t) + coeff_grow * eg + coeff_decay * ed;
        out.vel = sigma + (coeff_grow * eg - coeff_decay * ed) * omega;
        return out;
    }
};

struct ComBoundaries {
    PlanarVec c0, cf;
    double t0 = 0.0, tf = 0.0;
};

/// Per-step COM boundary positions on the stepping timeline (t = 0 at the
/// first single support). Interior boundaries are consecutive-footprint
/// midpoints; the first step starts from the COM placed over the first
/// support foot.
inline ComBoundaries com_step_boundaries(const std::vector<Footprint>& prints, int step_index,
                                         const GaitParams& g) {
    const size_t i = static_cast<size_t>(step_index);
    if (step_index < 0 || i + 2 >= prints.size())
        throw std::out_of_range("com_step_boundaries: step index outside plan");
    const double step_duration = g.t_ss + g.t_ds;
    ComBoundaries cb;
    cb.t0 = step_index * step_duration;
    cb.tf = cb.t0 + step_duration;
    cb.c0 = step_index == 0 ? prints[1].position
                            : midpoint(prints[i].position, prints[i + 1].position);
    cb.cf = midpoint(prints[i + 1].position, prints[i + 2].position);
    return cb;
}

struct SwingPoint {
    PlanarVec horizontal;
    double height = 0.0;
    PlanarVec horizontal_vel;
    double height_vel = 0.0;
};

/// Nominal swing curve: horizontal Bezier blend with zero boundary velocity,
/// quartic vertical arc with apex swing_height at mid-swing.
inline SwingPoint plan_swing(double t, const PlanarVec& lift_from, const PlanarVec& land_at,
                             const GaitParams& g) {
    const double u = clamp(t / g.t_ss, 0.0, 1.0);
    const double blend = u * u * (3.0 - 2.0 * u);
    const double dblend = 6.0 * u * (1.0 - u) / g.t_ss;
    SwingPoint sp;
    sp.horizontal = lerp(lift_from, land_at, blend);
    sp.horizontal_vel = (land_at - lift_from) * dblend;
    const double s = u * (1.0 - u);
    sp.height = 16.0 * g.swing_height * s * s;
    sp.height_vel = 32.0 * g.swing_height * s * (1.0 - 2.0 * u) / g.t_ss;
    return sp;
}

/// Swing trajectory with mid-flight retargeting. The nominal curve is the
/// plan_swing shape; a retarget replaces the remainder with cubic segments
/// fitted to the current position and velocity, so the foot path stays C1.
class SwingTrajectory {
  public:
    SwingTrajectory() = default;
    SwingTrajectory(const PlanarVec& lift_from, const PlanarVec& land_at, const GaitParams& g)
        : gait_(g), lift_from_(lift_from), land_at_(land_at) {}

    const PlanarVec& landing_target() const { return land_at_; }

    SwingPoint eval(double t) const {
        if (!refit_) {
            return plan_swing(t, lift_from_, land_at_, gait_);
        }
        const double tt = clamp(t, refit_->t0, refit_->t1);
        SwingPoint sp;
        sp.horizontal = {refit_->x.eval(tt), refit_->y.eval(tt)};
        sp.horizontal_vel = {refit_->x.eval_vel(tt), refit_->y.eval_vel(tt)};
        sp.height = std::max(0.0, refit_->z.eval(tt));
        sp.height_vel = refit_->z.eval_vel(tt);
        return sp;
    }

    /// Re-plans the remaining flight from the state at t_now to land at
    /// new_target (zero touchdown velocity) at time t_land.
    void retarget(double t_now, const PlanarVec& new_target, double t_land) {
        if (t_land <= t_now) t_land = t_now + 1e-6;
        const SwingPoint now = eval(t_now);
        Refit rf;
        rf.t0 = t_now;
        rf.t1 = t_land;
        rf.x = Hermite{t_now, t_land, now.horizontal.x, now.horizontal_vel.x, new_target.x, 0.0};
        rf.y = Hermite{t_now, t_land, now.horizontal.y, now.horizontal_vel.y, new_target.y, 0.0};
        rf.z = Hermite{t_now, t_land, now.height, now.height_vel, 0.0, 0.0};
        refit_ = rf;
        land_at_ = new_target;
    }

  private:
    struct Hermite {
        double t0 = 0.0, t1 = 1.0;
        double p0 = 0.0, v0 = 0.0, p1 = 0.0, v1 = 0.0;

        double eval(double t) const {
            const double h = t1 - t0;
            const double u = (t - t0) / h;
            const double u2 = u * u, u3 = u2 * u;
            return (2 * u3 - 3 * u2 + 1) * p0 + (u3 - 2 * u2 + u) * h * v0 +
                   (-2 * u3 + 3 * u2) * p1 + (u3 - u2) * h * v1;
        }
        double eval_vel(double t) const {
            const double h = t1 - t0;
            const double u = (t - t0) / h;
            const double u2 = u * u;
            return ((6 * u2 - 6 * u) * p0 + (3 * u2 - 4 * u + 1) * h * v0 +
                    (-6 * u2 + 6 * u) * p1 + (3 * u2 - 2 * u) * h * v1) /
                   h;
        }
    };
    struct Refit {
        double t0, t1;
        Hermite x, y, z;
    };

    GaitParams gait_;
    PlanarVec lift_from_, land_at_;
    std::optional<Refit> refit_;
};

struct ReferenceFrame {
    PlanarVec zmp_ref;
    PlanarVec com_ref;
    PlanarVec com_vel_ref;
    PlanarVec dcm_ref;
    SwingPoint swing;
};

/// The assembled nominal reference plan for a whole walk.
///
/// Timeline: t = 0 is walk start; during [0, init_duration) the Initialize
/// segment carries the COM from standing rest at the feet midpoint onto the
/// first support foot; step i then occupies [init + i T, init + (i+1) T).
/// Interior step-boundary COM positions are solved so the whole COM
/// reference is velocity-continuous. Past the last step the references hold
/// at the final feet midpoint.
class ReferencePlan {
  public:
    ReferencePlan(const GaitParams& g, const PendulumParams& pend, int n_steps,
                  Side first_support)
        : gait_(g), pendulum_(pend), n_steps_(n_steps), first_support_(first_support) {
        prints_ = build_footprints(n_steps, g, first_support);
        const PhaseClock clock{0.0, g.t_ss, g.t_ds};
        init_duration_ = initialize_duration(clock);
        build_segments();
    }

    const std::vector<Footprint>& footprints() const { return prints_; }
    const GaitParams& gait() const { return gait_; }
    const PendulumParams& pendulum() const { return pendulum_; }
    int n_steps() const { return n_steps_; }
    Side first_support() const { return first_support_; }
    double init_duration() const { return init_duration_; }
    double step_duration() const { return gait_.t_ss + gait_.t_ds; }
    double stepping_start() const { return init_duration_; }
    double walk_end() const { return init_duration_ + n_steps_ * step_duration(); }
    double step_start(int i) const { return init_duration_ + i * step_duration(); }

    const Footprint& support_print(int step) const { return prints_[static_cast<size_t>(step) + 1]; }
    const Footprint& landing_print(int step) const { return prints_[static_cast<size_t>(step) + 2]; }
    const Footprint& lift_print(int step) const { return prints_[static_cast<size_t>(step)]; }

    /// Reference DCM at touchdown (end of single support) minus the planned
    /// landing print; the unperturbed gait's own landing offset, used as the
    /// zero point for the step adjusters.
    PlanarVec landing_dcm_offset(int step) const {
        return landing_offsets_[static_cast<size_t>(step)];
    }

    /// COM position at the boundary between step i-1 and step i (index 0 is
    /// the start of the first step, index n_steps the end of the walk).
    const PlanarVec& boundary(int i) const { return boundaries_[static_cast<size_t>(i)]; }

    const InitSegment& init_segment() const { return init_; }

    int step_of(double t) const {
        const double s = (t - init_duration_) / step_duration();
        const int i = static_cast<int>(std::floor(s));
        return i < 0 ? 0 : (i >= n_steps_ ? n_steps_ - 1 : i);
    }

    const ComSegment& ss_segment(int step) const { return segments_[static_cast<size_t>(step)].ss; }
    const std::optional<ComSegment>& ds_segment(int step) const {
        return segments_[static_cast<size_t>(step)].ds;
    }

    ReferenceFrame eval(double t) const {
        const double omega = pendulum_.omega;
        ReferenceFrame f;
        if (t < init_duration_) {
            const PosVel pv = init_.eval(std::max(t, 0.0), omega);
            f.com_ref = pv.pos;
            f.com_vel_ref = pv.vel;
            f.dcm_ref = plan_dcm(pv.pos, pv.vel, omega);
            f.zmp_ref = init_.zmp(std::max(t, 0.0));
            f.swing.horizontal = prints_[0].position;
            return f;
        }
        if (t >= walk_end()) {
            const PlanarVec hold = midpoint(prints_[prints_.size() - 2].position,
                                            prints_.back().position);
            f.zmp_ref = f.com_ref = f.dcm_ref = hold;
            f.swing.horizontal = prints_.back().position;
            return f;
        }
        const int i = step_of(t);
        const double local = t - step_start(i);
        const StepSegments& seg = segments_[static_cast<size_t>(i)];
        const bool in_ds = seg.ds && t >= seg.ds->t0;
        const ComSegment& active = in_ds ? *seg.ds : seg.ss;
        const PosVel pv = active.eval(t, omega);
        f.com_ref = pv.pos;
        f.com_vel_ref = pv.vel;
        f.dcm_ref = plan_dcm(pv.pos, pv.vel, omega);
        f.zmp_ref = in_ds ? active.zmp(t) : active.p0;
        if (local <= gait_.t_ss) {
            f.swing = plan_swing(local, lift_print(i).position, landing_print(i).position, gait_);
        } else {
            f.swing.horizontal = landing_print(i).position;
        }
        return f;
    }

  private:
    struct StepSegments {
        ComSegment ss;
        std::optional<ComSegment> ds;
    };

    void build_segments() {
        const double omega = pendulum_.omega;
        const size_t n = static_cast<size_t>(n_steps_);

        // Boundary COM positions: first pinned over the first support foot,
        // last at the final feet midpoint, interior solved for velocity
        // continuity across steps.
        std::vector<double> sup_x(n), sup_y(n), nxt_x(n), nxt_y(n);
        for (size_t i = 0; i < n; ++i) {
            sup_x[i] = prints_[i + 1].position.x;
            sup_y[i] = prints_[i + 1].position.y;
            nxt_x[i] = prints_[i + 2].position.x;
            nxt_y[i] = prints_[i + 2].position.y;
        }
        const PlanarVec b_first = prints_[1].position;
        const PlanarVec b_last =
            midpoint(prints_[n].position, prints_[n + 1].position);
        const auto bx = detail::solve_c1_chain_axis(sup_x, nxt_x, b_first.x, b_last.x,
                                                    gait_.t_ss, gait_.t_ds, omega);
        const auto by = detail::solve_c1_chain_axis(sup_y, nxt_y, b_first.y, b_last.y,
                                                    gait_.t_ss, gait_.t_ds, omega);
        boundaries_.resize(n + 1);
        for (size_t i = 0; i <= n; ++i) boundaries_[i] = {bx[i], by[i]};

        segments_.clear();
        landing_offsets_.clear();
        for (int i = 0; i < n_steps_; ++i) {
            const double t0 = step_start(i);
            const PlanarVec c0 = boundaries_[static_cast<size_t>(i)];
            const PlanarVec cf = boundaries_[static_cast<size_t>(i) + 1];
            const PlanarVec support = support_print(i).position;
            const PlanarVec next = landing_print(i).position;
            StepSegments seg;
            if (gait_.t_ds > 0.0) {
                const PlanarVec knot =
                    solve_c1_knot(c0, cf, support, next, gait_.t_ss, gait_.t_ds, omega);
                seg.ss = ComSegment{t0, t0 + gait_.t_ss, c0, knot, support, support};
                seg.ds = ComSegment{t0 + gait_.t_ss, t0 + step_duration(), knot, cf,
                                    support, next};
            } else {
                seg.ss = ComSegment{t0, t0 + gait_.t_ss, c0, cf, support, support};
            }
            segments_.push_back(seg);

            const PosVel land = seg.ss.eval(t0 + gait_.t_ss, omega);
            landing_offsets_.push_back(plan_dcm(land.pos, land.vel, omega) - next);
        }

        // Rest-to-gait transfer into the first step.
        const PosVel first = segments_.front().ss.eval(stepping_start(), omega);
        const PlanarVec c_stand = midpoint(prints_[0].position, prints_[1].position);
        init_ = InitSegment::solve(c_stand, first.pos, first.vel, init_duration_, omega);
    }

    GaitParams gait_;
    PendulumParams pendulum_;
    int n_steps_;
    Side first_support_;
    double init_duration_ = 1.0;
    std::vector<Footprint> prints_;
    std::vector<StepSegments> segments_;
    std::vector<PlanarVec> boundaries_;
    std::vector<PlanarVec> landing_offsets_;
    InitSegment init_;
};

}  // namespace dcmwalk
