// Closed-loop walking simulation: state machine -> planners -> next-step
// adjusters -> LQG controller -> LIPM plant, at a fixed control rate.
//
// The nominal plan provides footprint targets and the unperturbed gait's
// touchdown DCM offsets. During a step the live references are rebuilt from
// the current reference state whenever an adjuster retargets the landing or
// changes the step time, so the commanded feedforward always matches a
// trajectory that is dynamically consistent with the live ZMP plan.
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "dcmwalk/gait.hpp"
#include "dcmwalk/lipm.hpp"
#include "dcmwalk/lqg.hpp"
#include "dcmwalk/planar.hpp"
#include "dcmwalk/plant.hpp"
#include "dcmwalk/state_machine.hpp"
#include "dcmwalk/step_adjuster.hpp"

namespace dcmwalk {

struct WalkSimConfig {
    GaitParams gait;
    RobotPhysicalParams robot;
    double gravity = 9.81;
    ControllerWeights weights;
    AdjusterGains adjuster;
    NoiseModel noise;
    double dt = 0.002;
    int n_steps = 6;
    Side first_support = Side::Right;
    bool location_adjustment = false;
    bool time_adjustment = false;
    bool adjusters_use_estimate = true;  // feed the KF DCM to the adjusters, not raw noise
    double fall_radius = 1.2;
    double com_excursion = 2.0;
    double settle_dcm_error = 0.05;  // terminal DCM tracking error bound for "recovered"
    double settle_hold = 0.0;        // post-walk stance duration before the verdict [s]

    PendulumParams pendulum() const { return make_pendulum(gait.com_height, gravity); }
};

struct CycleLog {
    double t = 0.0;
    int step = -1;
    int phase = 0;  // WalkPhase as int
    PlanarVec zmp_ref, com_ref, com_vel_ref, dcm_ref;
    PlanarVec swing_pos;
    double swing_height = 0.0;
    PlanarVec com_meas, dcm_meas;
    PlanarVec com, com_vel, dcm;  // true plant state
    PlanarVec p_cmd, p_applied;
    PlanarVec delta_f;   // predicted touchdown error vs the nominal landing DCM
    PlanarVec delta_p;   // proportional adjuster output (zero when inactive)
    PlanarVec retarget;  // applied landing shift away from the nominal print
    double dt_adjust = 0.0;     // current T_ss minus nominal
    double landing_disp = 0.0;  // ‖landing target - support print‖
};

struct TrialResult {
    bool fell = false;
    bool recovered = false;
    double fall_time = -1.0;
    double peak_dcm_error = 0.0;      // over the stepping window
    double rms_dcm_error = 0.0;       // over the stepping window
    double terminal_dcm_error = 0.0;  // at the last simulated cycle
    int adjustment_cycles = 0;
    double max_landing_disp = 0.0;
    double max_time_adjustment = 0.0;
    double walk_end_time = 0.0;
    std::vector<CycleLog> log;
};

class WalkSimulation {
  public:
    explicit WalkSimulation(const WalkSimConfig& cfg, std::optional<PushEvent> push = {})
        : cfg_(cfg),
          push_(push),
          pendulum_(cfg.pendulum()),
          plan_(cfg.gait, pendulum_, cfg.n_steps, cfg.first_support),
          gains_(synthesize_gains(pendulum_.omega, cfg.dt, cfg.weights)),
          plant_({plan_.eval(0.0).com_ref, plan_.eval(0.0).com_vel_ref}, pendulum_,
                 cfg.robot, cfg.noise),
          clock_{0.0, cfg.gait.t_ss, cfg.gait.t_ds} {
        foot_[side_index(plan_.footprints()[0].side)] = plan_.footprints()[0].position;
        foot_[side_index(plan_.footprints()[1].side)] = plan_.footprints()[1].position;
        support_side_ = plan_.footprints()[1].side;
    }

    const GainSet& gains() const { return gains_; }
    const ReferencePlan& plan() const { return plan_; }

    TrialResult run(bool keep_log = false) {
        TrialResult res;
        const double dt = cfg_.dt;
        const double omega = pendulum_.omega;
        const double hard_cap = plan_.walk_end() + cfg_.n_steps * cfg_.adjuster.dt_sat +
                                cfg_.settle_hold + 5.0;

        double t = 0.0;
        bool started = false;
        double err_sq_sum = 0.0;
        long err_samples = 0;
        double last_err = 0.0;

        while (t < hard_cap) {
            const Measurement meas = plant_.measure();
            kf_observe(cs_, gains_, meas);

            CycleLog row;
            row.t = t;
            row.step = in_step_ ? step_index_ : -1;
            row.phase = static_cast<int>(phase_);

            const double t_local = in_step_ ? t - step_start_ : 0.0;
            const bool in_swing = in_step_ && !landed_ && t_local < t_ss_cur_;
            if (in_swing) {
                const PlanarVec zeta =
                    cfg_.adjusters_use_estimate ? estimate_dcm(cs_) : meas.dcm;
                run_adjusters(t, t_local, zeta, row, res);
            }

            const ReferenceFrame ref = eval_reference(t);
            const PlanarVec p_cmd = lqg_command(cs_, gains_, ref, dt);
            const SupportPolygon poly = current_polygon(in_swing);
            const PlanarVec p_applied = saturate_zmp(p_cmd, poly);
            note_applied_input(cs_, p_applied);

            row.zmp_ref = ref.zmp_ref;
            row.com_ref = ref.com_ref;
            row.com_vel_ref = ref.com_vel_ref;
            row.dcm_ref = ref.dcm_ref;
            row.swing_pos = ref.swing.horizontal;
            row.swing_height = ref.swing.height;
            row.com_meas = meas.com;
            row.dcm_meas = meas.dcm;
            row.com = plant_.state().com;
            row.com_vel = plant_.state().com_velocity;
            row.dcm = dcm_of_state(plant_.state(), omega);
            row.p_cmd = p_cmd;
            row.p_applied = p_applied;
            if (in_step_) {
                row.dt_adjust = t_ss_cur_ - cfg_.gait.t_ss;
                row.landing_disp = (landing_target_ - support_pos_).norm();
                row.retarget = landing_target_ - nominal_landing_;
                res.max_landing_disp = std::max(res.max_landing_disp, row.landing_disp);
                res.max_time_adjustment =
                    std::max(res.max_time_adjustment, std::abs(row.dt_adjust));
            }

            const double err = (row.dcm - row.dcm_ref).norm();
            last_err = err;
            if (started && !walk_done_) {
                res.peak_dcm_error = std::max(res.peak_dcm_error, err);
                err_sq_sum += err * err;
                ++err_samples;
            }
            if (keep_log) res.log.push_back(row);

            plant_.step(p_applied, push_, dt);

            if (is_fallen(plant_.state(), poly, omega, cfg_.fall_radius, cfg_.com_excursion)) {
                res.fell = true;
                res.fall_time = t + dt;
                break;
            }

            // Touchdown: the swing foot plants at its current target.
            if (in_step_ && !landed_ && (t + dt - step_start_) >= t_ss_cur_) {
                landed_ = true;
                foot_[side_index(other_side(support_side_))] = landing_target_;
            }

            WalkCommand cmd = WalkCommand::None;
            if (!started) {
                cmd = WalkCommand::Start;
                started = true;
            } else if (in_step_ && step_index_ == cfg_.n_steps - 1) {
                cmd = WalkCommand::Stop;
            }
            const TickResult tr = tick(phase_, clock_, dt, cmd);
            phase_ = tr.phase;
            clock_ = tr.clock;
            if (tr.stepping_began) {
                begin_step(0, t + dt - clock_.t);
            } else if (tr.step_completed) {
                if (step_index_ + 1 < cfg_.n_steps) {
                    begin_step(step_index_ + 1, t + dt - clock_.t);
                } else {
                    in_step_ = false;
                    walk_done_ = true;
                    walk_end_ = t + dt - clock_.t;
                }
            }

            t += dt;
            if (walk_done_ && t >= walk_end_ + cfg_.settle_hold) break;
        }

        res.walk_end_time = walk_done_ ? walk_end_ : t;
        res.terminal_dcm_error = last_err;
        res.rms_dcm_error = err_samples > 0 ? std::sqrt(err_sq_sum / err_samples) : 0.0;
        res.recovered =
            !res.fell && walk_done_ && res.terminal_dcm_error <= cfg_.settle_dcm_error;
        return res;
    }

  private:
    static size_t side_index(Side s) { return s == Side::Left ? 0 : 1; }

    void begin_step(int index, double start) {
        step_index_ = index;
        step_start_ = start;
        t_ss_cur_ = cfg_.gait.t_ss;
        clock_.t_ss = t_ss_cur_;
        landed_ = false;
        in_step_ = true;

        support_side_ = support_foot(index, plan_.footprints()[1].side);
        support_pos_ = foot_[side_index(support_side_)];
        swing_origin_ = foot_[side_index(other_side(support_side_))];

        // Footprint targets are step vectors relative to the current stance:
        // after an adjusted landing the gait continues around the new
        // location instead of fighting its way back to the original prints.
        const PlanarVec rel =
            plan_.landing_print(index).position - plan_.support_print(index).position;
        nominal_landing_ = clamp_step(support_pos_ + rel, support_pos_,
                                      cfg_.adjuster.max_step);
        landing_target_ = nominal_landing_;

        const PlanarVec c0 = index == 0 ? plan_.boundary(0) : step_end_com_;
        swing_ = SwingTrajectory(swing_origin_, landing_target_, swing_gait());
        build_segments(start, c0);
    }

    GaitParams swing_gait() const {
        GaitParams g = cfg_.gait;
        g.t_ss = t_ss_cur_;
        return g;
    }

    void build_segments(double t_anchor, const PlanarVec& c_anchor) {
        const double omega = pendulum_.omega;
        const double t_land = step_start_ + t_ss_cur_;
        const double t_end = t_land + cfg_.gait.t_ds;
        // Nominal chain boundary translated along with the live stance.
        const PlanarVec nominal_mid =
            midpoint(plan_.support_print(step_index_).position,
                     plan_.landing_print(step_index_).position);
        const PlanarVec cf = plan_.boundary(step_index_ + 1) +
                             (midpoint(support_pos_, landing_target_) - nominal_mid);
        step_end_com_ = cf;
        if (cfg_.gait.t_ds > 0.0) {
            const PlanarVec knot = solve_c1_knot(c_anchor, cf, support_pos_, landing_target_,
                                                 t_land - t_anchor, cfg_.gait.t_ds, omega);
            live_ss_ = ComSegment{t_anchor, t_land, c_anchor, knot, support_pos_, support_pos_};
            live_ds_ = ComSegment{t_land, t_end, knot, cf, support_pos_, landing_target_};
        } else {
            live_ss_ = ComSegment{t_anchor, t_land, c_anchor, cf, support_pos_, support_pos_};
            live_ds_.reset();
        }
    }

    void rebuild_from(double t) {
        const PosVel now = eval_live_com(t);
        build_segments(t, now.pos);
    }

    PosVel eval_live_com(double t) const {
        const double omega = pendulum_.omega;
        if (live_ds_ && t >= live_ds_->t0) return live_ds_->eval(t, omega);
        return live_ss_.eval(t, omega);
    }

    void run_adjusters(double t, double t_local, const PlanarVec& zeta, CycleLog& row,
                       TrialResult& res) {
        const double omega = pendulum_.omega;
        const AdjusterGains& adj = cfg_.adjuster;
        const PlanarVec offset = plan_.landing_dcm_offset(step_index_);

        const PlanarVec predicted =
            predict_dcm_at_landing(zeta, support_pos_, t_local, t_ss_cur_, omega);
        // Location feedback measures against the current (possibly already
        // retargeted) landing; time feedback against the nominal print, so
        // it keeps reacting to the raw divergence while the foot retargets.
        const PlanarVec delta_f = step_location_error(predicted, landing_target_ + offset);
        const PlanarVec delta_f_nominal =
            step_location_error(predicted, nominal_landing_ + offset);
        row.delta_f = delta_f;

        if (cfg_.location_adjustment && t_local < adj.retarget_cutoff * t_ss_cur_) {
            const PlanarVec dp = adjust_location(delta_f, adj);
            row.delta_p = dp;
            if (dp.x != 0.0 || dp.y != 0.0) {
                // The proportional law reports dp = -k_sa (predicted - target);
                // moving the landing toward the predicted DCM means shifting
                // the print by the negated output.
                const PlanarVec desired = landing_target_ - dp;
                const PlanarVec clamped = clamp_step(desired, support_pos_, adj.max_step);
                if ((clamped - landing_target_).norm() > 1e-12) {
                    landing_target_ = clamped;
                    swing_.retarget(t_local, landing_target_, t_ss_cur_);
                    rebuild_from(t);
                    ++res.adjustment_cycles;
                }
            }
        }

        if (cfg_.time_adjustment && delta_f_nominal.norm() > adj.compliance_margin) {
            const TimeAdjustment ta = adjust_time(zeta, support_pos_, nominal_landing_,
                                                  offset, t_local, t_ss_cur_, omega, adj);
            // Landing cannot move into the past, and the accumulated change
            // stays within the saturation window around the nominal duration.
            double t_new = std::max(ta.t_ss_new, t_local + cfg_.dt);
            t_new = clamp(t_new, cfg_.gait.t_ss - adj.dt_sat, cfg_.gait.t_ss + adj.dt_sat);
            if (std::abs(t_new - t_ss_cur_) > 1e-12) {
                t_ss_cur_ = t_new;
                clock_.t_ss = t_new;
                swing_.retarget(t_local, landing_target_, t_ss_cur_);
                rebuild_from(t);
                ++res.adjustment_cycles;
            }
        }
    }

    ReferenceFrame eval_reference(double t) const {
        const double omega = pendulum_.omega;
        ReferenceFrame f;
        if (!in_step_) {
            if (!walk_done_) return plan_.eval(t);
            const PlanarVec hold = midpoint(foot_[0], foot_[1]);
            f.zmp_ref = f.com_ref = f.dcm_ref = hold;
            f.swing.horizontal = foot_[side_index(other_side(support_side_))];
            return f;
        }
        const double t_local = t - step_start_;
        const PosVel pv = eval_live_com(t);
        f.com_ref = pv.pos;
        f.com_vel_ref = pv.vel;
        f.dcm_ref = plan_dcm(pv.pos, pv.vel, omega);
        if (!landed_ && t_local < t_ss_cur_) {
            f.zmp_ref = support_pos_;
            f.swing = swing_.eval(t_local);
        } else {
            const double u = cfg_.gait.t_ds > 0.0 ? (t_local - t_ss_cur_) / cfg_.gait.t_ds : 1.0;
            f.zmp_ref = lerp(support_pos_, landing_target_, clamp(u, 0.0, 1.0));
            f.swing.horizontal = landing_target_;
        }
        return f;
    }

    SupportPolygon current_polygon(bool in_swing) const {
        if (in_swing) {
            return single_support_polygon(support_pos_, cfg_.robot);
        }
        if (in_step_) {
            return double_support_polygon(support_pos_, landing_target_, cfg_.robot);
        }
        return double_support_polygon(foot_[0], foot_[1], cfg_.robot);
    }

    WalkSimConfig cfg_;
    std::optional<PushEvent> push_;
    PendulumParams pendulum_;
    ReferencePlan plan_;
    GainSet gains_;
    LipmPlant plant_;

    WalkPhase phase_ = WalkPhase::Idle;
    PhaseClock clock_;
    ControllerState cs_;

    bool in_step_ = false;
    bool walk_done_ = false;
    bool landed_ = false;
    int step_index_ = -1;
    double step_start_ = 0.0;
    double t_ss_cur_ = 0.0;
    double walk_end_ = 0.0;
    Side support_side_ = Side::Right;
    PlanarVec support_pos_, swing_origin_, landing_target_, nominal_landing_, step_end_com_;
    PlanarVec foot_[2];  // indexed by side_index
    SwingTrajectory swing_;
    ComSegment live_ss_;
    std::optional<ComSegment> live_ds_;
};

}  // namespace dcmwalk
