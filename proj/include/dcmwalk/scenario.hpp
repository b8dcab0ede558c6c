// Experiment harness: the single-support stability grid, the analytic
// capturability oracle, and the push-recovery force sweep with strategy
// ablations.
#pragma once

#include <atomic>
#include <cmath>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "dcmwalk/simulation.hpp"

namespace dcmwalk {

/// 0-step capturability of the ZMP-clamped pendulum: the robot can come to
/// rest over the stance iff the DCM is within ZMP range of the foot center,
/// per axis.
inline bool capturability_oracle(const LipmState& s, double p_max, double omega) {
    const PlanarVec dcm = dcm_of_state(s, omega);
    return std::abs(dcm.x) <= p_max && std::abs(dcm.y) <= p_max;
}

struct GridSpec {
    double c_min = -0.2, c_max = 0.2, c_step = 0.02;        // COM position range [m]
    double cdot_min = -1.0, cdot_max = 1.0, cdot_step = 0.1;  // COM velocity range [m/s]
    double time_limit = 2.0;                                  // [s]
    double settle_pos = 0.01;   // ‖c‖ bound for "returned to (0,0)" [m]
    double settle_vel = 0.02;   // ‖c_dot‖ bound [m/s]

    int n_pos() const { return static_cast<int>(std::lround((c_max - c_min) / c_step)) + 1; }
    int n_vel() const {
        return static_cast<int>(std::lround((cdot_max - cdot_min) / cdot_step)) + 1;
    }
};

struct StandingConfig {
    RobotPhysicalParams robot;
    double gravity = 9.81;
    ControllerWeights weights;
    NoiseModel noise;  // variance 0 keeps the grid exactly symmetric
    double dt = 0.002;
    double fall_radius = 1.2;
    double com_excursion = 2.0;
};

struct StandingOutcome {
    bool recovered = false;
    double settle_time = -1.0;
};

/// Regulates a single-support stance at the origin from the given initial
/// state; recovered iff the state enters the settle ball within the limit.
inline StandingOutcome run_standing_trial(const StandingConfig& cfg, const LipmState& initial,
                                          double time_limit, double settle_pos,
                                          double settle_vel) {
    const PendulumParams pend = make_pendulum(cfg.robot.com_height, cfg.gravity);
    const SupportPolygon poly = single_support_polygon({0.0, 0.0}, cfg.robot);
    LipmPlant plant(initial, pend, cfg.robot, cfg.noise);
    const GainSet gains = synthesize_gains(pend.omega, cfg.dt, cfg.weights);
    ControllerState cs;
    ReferenceFrame ref;  // everything zero: stand still over the foot

    StandingOutcome out;
    for (double t = 0.0; t < time_limit; t += cfg.dt) {
        const Measurement meas = plant.measure();
        const PlanarVec p_cmd = control_step(meas, ref, cs, gains, cfg.dt);
        const PlanarVec p_applied = saturate_zmp(p_cmd, poly);
        note_applied_input(cs, p_applied);
        plant.step(p_applied, std::nullopt, cfg.dt);
        if (plant.state().com.norm() < settle_pos &&
            plant.state().com_velocity.norm() < settle_vel) {
            out.recovered = true;
            out.settle_time = t + cfg.dt;
            return out;
        }
        if (is_fallen(plant.state(), poly, pend.omega, cfg.fall_radius, cfg.com_excursion)) {
            return out;
        }
    }
    return out;
}

struct GridCell {
    double c0 = 0.0;
    double cdot0 = 0.0;
    bool recovered = false;
    bool oracle_capturable = false;
};

struct GridResult {
    GridSpec spec;
    std::vector<GridCell> cells;  // row-major: position outer, velocity inner

    const GridCell& at(int i_pos, int i_vel) const {
        return cells[static_cast<size_t>(i_pos) * static_cast<size_t>(spec.n_vel()) +
                     static_cast<size_t>(i_vel)];
    }
};

/// Runs the full stability grid (sagittal initial conditions, frontal at
/// rest). Trials are independent; `jobs` > 1 fans them out across threads
/// with index-ordered aggregation.
inline GridResult run_stability_grid(const GridSpec& spec, const StandingConfig& cfg,
                                     int jobs = 1) {
    const PendulumParams pend = make_pendulum(cfg.robot.com_height, cfg.gravity);
    const double p_max = 0.5 * cfg.robot.foot_length;
    const int np = spec.n_pos();
    const int nv = spec.n_vel();

    GridResult result;
    result.spec = spec;
    result.cells.resize(static_cast<size_t>(np) * static_cast<size_t>(nv));

    auto run_cell = [&](int idx) {
        const int i_pos = idx / nv;
        const int i_vel = idx % nv;
        GridCell cell;
        cell.c0 = spec.c_min + i_pos * spec.c_step;
        cell.cdot0 = spec.cdot_min + i_vel * spec.cdot_step;
        const LipmState initial{{cell.c0, 0.0}, {cell.cdot0, 0.0}};
        cell.oracle_capturable = capturability_oracle(initial, p_max, pend.omega);
        cell.recovered = run_standing_trial(cfg, initial, spec.time_limit, spec.settle_pos,
                                            spec.settle_vel)
                             .recovered;
        result.cells[static_cast<size_t>(idx)] = cell;
    };

    const int total = np * nv;
    if (jobs <= 1) {
        for (int i = 0; i < total; ++i) run_cell(i);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> workers;
        const int n_workers = std::min(jobs, total);
        workers.reserve(static_cast<size_t>(n_workers));
        for (int w = 0; w < n_workers; ++w) {
            workers.emplace_back([&] {
                for (int i = next.fetch_add(1); i < total; i = next.fetch_add(1)) run_cell(i);
            });
        }
        for (auto& th : workers) th.join();
    }
    return result;
}

enum class RecoveryStrategy { TorqueOnly, Location, LocationTime };

inline const char* strategy_name(RecoveryStrategy s) {
    switch (s) {
        case RecoveryStrategy::TorqueOnly: return "torque_only";
        case RecoveryStrategy::Location: return "location";
        case RecoveryStrategy::LocationTime: return "location_time";
    }
    return "?";
}

struct PushSweepSpec {
    double push_time = 2.2;      // [s] after stepping begins (end of Initialize)
    double push_duration = 0.01;  // [s]
    double force_lo = 0.0;       // [N], expected to recover
    double force_hi = 4000.0;    // [N], expected to fall
    double bisection_tol = 1.0;  // [N]
};

inline WalkSimConfig apply_strategy(WalkSimConfig cfg, RecoveryStrategy s) {
    cfg.location_adjustment =
        s == RecoveryStrategy::Location || s == RecoveryStrategy::LocationTime;
    cfg.time_adjustment = s == RecoveryStrategy::LocationTime;
    return cfg;
}

/// One walking-in-place push trial at the given sagittal force. The push
/// time is measured from the first single support, so the gait phase it hits
/// does not depend on the initialization length.
inline TrialResult run_push_trial(const WalkSimConfig& base, RecoveryStrategy strategy,
                                  double force_x, const PushSweepSpec& spec,
                                  bool keep_log = false) {
    const PhaseClock clock{0.0, base.gait.t_ss, base.gait.t_ds};
    const PushEvent push{{force_x, 0.0}, initialize_duration(clock) + spec.push_time,
                         spec.push_duration};
    WalkSimulation sim(apply_strategy(base, strategy), push);
    return sim.run(keep_log);
}

struct SweepProbe {
    double force = 0.0;
    bool recovered = false;
};

struct SweepResult {
    RecoveryStrategy strategy = RecoveryStrategy::TorqueOnly;
    double f_max = 0.0;
    std::vector<SweepProbe> probes;
    std::string diagnostic;  // non-empty when the bracket assumptions failed
    double max_landing_disp = 0.0;
    double max_time_adjustment = 0.0;
};

/// Bisection on the push magnitude for the largest recovered force. The
/// verdict is assumed monotone in the magnitude; the bracket ends are
/// spot-checked and reported if they disagree.
inline SweepResult max_recoverable_push(const WalkSimConfig& base, RecoveryStrategy strategy,
                                        const PushSweepSpec& spec) {
    SweepResult out;
    out.strategy = strategy;

    auto probe = [&](double force) {
        const TrialResult r = run_push_trial(base, strategy, force, spec);
        out.probes.push_back({force, r.recovered});
        out.max_landing_disp = std::max(out.max_landing_disp, r.max_landing_disp);
        out.max_time_adjustment = std::max(out.max_time_adjustment, r.max_time_adjustment);
        return r.recovered;
    };

    double lo = spec.force_lo;
    double hi = spec.force_hi;
    if (!probe(lo)) {
        out.diagnostic = "lower bracket fell; sweep aborted";
        out.f_max = 0.0;
        return out;
    }
    if (probe(hi)) {
        out.diagnostic = "upper bracket recovered; f_max is a lower bound";
        out.f_max = hi;
        return out;
    }
    while (hi - lo > spec.bisection_tol) {
        const double mid = 0.5 * (lo + hi);
        if (probe(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    out.f_max = lo;
    return out;
}

struct ImprovementReport {
    double location_vs_baseline_pct = 0.0;
    double time_vs_location_pct = 0.0;
    double combined_vs_baseline_pct = 0.0;
};

inline ImprovementReport improvement_report(double f_baseline, double f_location,
                                            double f_location_time) {
    ImprovementReport r;
    r.location_vs_baseline_pct = (f_location / f_baseline - 1.0) * 100.0;
    r.time_vs_location_pct = (f_location_time / f_location - 1.0) * 100.0;
    r.combined_vs_baseline_pct = (f_location_time / f_baseline - 1.0) * 100.0;
    return r;
}

}  // namespace dcmwalk
