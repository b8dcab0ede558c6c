// Run configuration: a flat JSON schema with the simulated robot's
// parameters as defaults. Every field can be overridden from a config file;
// validation reports all violations at once.
#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dcmwalk/scenario.hpp"
#include "dcmwalk/simulation.hpp"

namespace dcmwalk {

struct RunConfig {
    // physics
    double gravity = 9.81;
    double mass = 30.0;
    double com_height = 1.0;
    double foot_length = 0.15;
    double foot_width = 0.075;

    // gait
    double step_length_x = 0.5;
    double step_length_y = 0.5;
    double t_ss = 0.8;
    double t_ds = 0.2;
    double swing_height = 0.025;
    double max_step = 0.95;
    double lateral_offset = 0.1;
    int n_steps = 6;
    std::string first_support = "right";

    // controller
    double q_com = 10.0;
    double q_dcm = 100.0;
    double q_integral = 1.0;
    double r_zmp = 1.0;
    double process_cov = 1e-6;
    double meas_cov = 6.25e-4;
    double integral_limit = 0.5;

    // step adjusters
    double k_sa = 1.0;
    double k_f = 0.1;
    double compliance_margin = 0.02;
    double dt_sat = 0.2;
    double retarget_cutoff = 0.8;
    bool adjusters_use_estimate = true;

    // simulation
    double noise_variance = 0.0;
    double dt = 0.002;
    double fall_radius = 1.2;
    double com_excursion = 2.0;
    double settle_dcm_error = 0.05;
    double settle_hold = 0.0;

    // push sweep
    double push_time = 2.2;
    double push_duration = 0.01;
    double force_lo = 0.0;
    double force_hi = 4000.0;
    double bisection_tol = 1.0;
    std::string strategy = "all";

    // stability grid
    double grid_c_min = -0.2;
    double grid_c_max = 0.2;
    double grid_c_step = 0.02;
    double grid_cdot_min = -1.0;
    double grid_cdot_max = 1.0;
    double grid_cdot_step = 0.1;
    double grid_time_limit = 2.0;
    double grid_settle_pos = 0.01;
    double grid_settle_vel = 0.02;

    std::uint64_t seed = 0;
    int jobs = 1;
};

/// Baseline parameter sets per command.
inline RunConfig default_plan_config() { return RunConfig{}; }

inline RunConfig default_walk_config() {
    RunConfig c;
    c.step_length_x = 0.5;
    c.step_length_y = 0.0;
    c.t_ss = 1.0;
    c.t_ds = 0.0;
    c.noise_variance = 6.25e-4;
    return c;
}

inline RunConfig default_scenario1_config() {
    RunConfig c;
    c.noise_variance = 0.0;
    return c;
}

inline RunConfig default_scenario2_config() {
    RunConfig c;
    c.step_length_x = 0.0;
    c.step_length_y = 0.0;
    c.t_ss = 0.8;
    c.t_ds = 0.2;
    c.n_steps = 12;
    c.noise_variance = 0.0;
    c.settle_hold = 2.0;
    return c;
}

namespace detail {

template <typename T>
void put(nlohmann::json& j, const char* key, const T& v) {
    j[key] = v;
}

template <typename T>
void take(const nlohmann::json& j, const char* key, T& v, std::vector<std::string>& unknown) {
    (void)unknown;
    if (j.contains(key)) v = j.at(key).get<T>();
}

}  // namespace detail

#define DCMWALK_CONFIG_FIELDS(X)                                                              \
    X(gravity) X(mass) X(com_height) X(foot_length) X(foot_width) X(step_length_x)           \
    X(step_length_y) X(t_ss) X(t_ds) X(swing_height) X(max_step) X(lateral_offset)           \
    X(n_steps) X(first_support) X(q_com) X(q_dcm) X(q_integral) X(r_zmp) X(process_cov)      \
    X(meas_cov) X(integral_limit) X(k_sa) X(k_f) X(compliance_margin) X(dt_sat)              \
    X(retarget_cutoff) X(adjusters_use_estimate) X(noise_variance) X(dt) X(fall_radius)      \
    X(com_excursion) X(settle_dcm_error) X(settle_hold) X(push_time) X(push_duration)        \
    X(force_lo) X(force_hi) X(bisection_tol) X(strategy) X(grid_c_min) X(grid_c_max)         \
    X(grid_c_step) X(grid_cdot_min) X(grid_cdot_max) X(grid_cdot_step) X(grid_time_limit)    \
    X(grid_settle_pos) X(grid_settle_vel) X(seed) X(jobs)

inline nlohmann::json to_json(const RunConfig& c) {
    nlohmann::json j;
#define DCMWALK_PUT(name) detail::put(j, #name, c.name);
    DCMWALK_CONFIG_FIELDS(DCMWALK_PUT)
#undef DCMWALK_PUT
    return j;
}

/// Overlays fields present in `j` onto `c`; unknown keys are collected so
/// validation can report them.
inline std::vector<std::string> overlay_config(RunConfig& c, const nlohmann::json& j) {
    std::vector<std::string> unknown;
    for (auto it = j.begin(); it != j.end(); ++it) {
        static const char* known[] = {
#define DCMWALK_NAME(name) #name,
            DCMWALK_CONFIG_FIELDS(DCMWALK_NAME)
#undef DCMWALK_NAME
        };
        bool found = false;
        for (const char* k : known) {
            if (it.key() == k) {
                found = true;
                break;
            }
        }
        if (!found) unknown.push_back("unknown field: " + it.key());
    }
#define DCMWALK_TAKE(name) detail::take(j, #name, c.name, unknown);
    DCMWALK_CONFIG_FIELDS(DCMWALK_TAKE)
#undef DCMWALK_TAKE
    return unknown;
}

inline std::vector<std::string> load_config_file(RunConfig& c, const std::string& path) {
    std::ifstream in(path);
    if (!in) return {"cannot open config file: " + path};
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        return {std::string("config parse error: ") + e.what()};
    }
    return overlay_config(c, j);
}

inline GaitParams gait_of(const RunConfig& c) {
    GaitParams g;
    g.step_length = {c.step_length_x, c.step_length_y};
    g.t_ss = c.t_ss;
    g.t_ds = c.t_ds;
    g.swing_height = c.swing_height;
    g.com_height = c.com_height;
    g.max_step = c.max_step;
    g.lateral_offset = c.lateral_offset;
    return g;
}

inline RobotPhysicalParams robot_of(const RunConfig& c) {
    return {c.mass, c.com_height, c.foot_length, c.foot_width};
}

inline ControllerWeights weights_of(const RunConfig& c) {
    ControllerWeights w;
    w.q_com = c.q_com;
    w.q_dcm = c.q_dcm;
    w.q_integral = c.q_integral;
    w.r_zmp = c.r_zmp;
    w.process_cov = c.process_cov;
    w.meas_cov = c.meas_cov;
    w.integral_limit = c.integral_limit;
    return w;
}

inline AdjusterGains adjuster_of(const RunConfig& c) {
    AdjusterGains a;
    a.k_sa = c.k_sa;
    a.k_f = c.k_f;
    a.compliance_margin = c.compliance_margin;
    a.max_step = c.max_step;
    a.dt_sat = c.dt_sat;
    a.retarget_cutoff = c.retarget_cutoff;
    return a;
}

inline WalkSimConfig sim_config_of(const RunConfig& c) {
    WalkSimConfig s;
    s.gait = gait_of(c);
    s.robot = robot_of(c);
    s.gravity = c.gravity;
    s.weights = weights_of(c);
    s.adjuster = adjuster_of(c);
    s.noise = {c.noise_variance, c.seed};
    s.dt = c.dt;
    s.n_steps = c.n_steps;
    s.first_support = c.first_support == "left" ? Side::Left : Side::Right;
    s.adjusters_use_estimate = c.adjusters_use_estimate;
    s.fall_radius = c.fall_radius;
    s.com_excursion = c.com_excursion;
    s.settle_dcm_error = c.settle_dcm_error;
    s.settle_hold = c.settle_hold;
    return s;
}

inline StandingConfig standing_config_of(const RunConfig& c) {
    StandingConfig s;
    s.robot = robot_of(c);
    s.gravity = c.gravity;
    s.weights = weights_of(c);
    s.noise = {c.noise_variance, c.seed};
    s.dt = c.dt;
    s.fall_radius = c.fall_radius;
    s.com_excursion = c.com_excursion;
    return s;
}

inline GridSpec grid_spec_of(const RunConfig& c) {
    GridSpec g;
    g.c_min = c.grid_c_min;
    g.c_max = c.grid_c_max;
    g.c_step = c.grid_c_step;
    g.cdot_min = c.grid_cdot_min;
    g.cdot_max = c.grid_cdot_max;
    g.cdot_step = c.grid_cdot_step;
    g.time_limit = c.grid_time_limit;
    g.settle_pos = c.grid_settle_pos;
    g.settle_vel = c.grid_settle_vel;
    return g;
}

inline PushSweepSpec sweep_spec_of(const RunConfig& c) {
    PushSweepSpec s;
    s.push_time = c.push_time;
    s.push_duration = c.push_duration;
    s.force_lo = c.force_lo;
    s.force_hi = c.force_hi;
    s.bisection_tol = c.bisection_tol;
    return s;
}

/// Collects every violated field; an empty result means the config is valid.
inline std::vector<std::string> validate_config(const RunConfig& c) {
    std::vector<std::string> bad;
    auto positive = [&](double v, const char* name) {
        if (!(v > 0.0)) bad.push_back(std::string(name) + " must be > 0");
    };
    auto non_negative = [&](double v, const char* name) {
        if (!(v >= 0.0)) bad.push_back(std::string(name) + " must be >= 0");
    };
    positive(c.gravity, "gravity");
    positive(c.mass, "mass");
    positive(c.com_height, "com_height");
    positive(c.foot_length, "foot_length");
    positive(c.foot_width, "foot_width");
    positive(c.t_ss, "t_ss");
    non_negative(c.t_ds, "t_ds");
    positive(c.swing_height, "swing_height");
    positive(c.max_step, "max_step");
    non_negative(c.lateral_offset, "lateral_offset");
    if (c.n_steps < 1) bad.push_back("n_steps must be >= 1");
    if (c.first_support != "left" && c.first_support != "right")
        bad.push_back("first_support must be \"left\" or \"right\"");
    for (auto g : validate_gait(gait_of(c))) bad.push_back(g);
    positive(c.q_com, "q_com");
    positive(c.q_dcm, "q_dcm");
    non_negative(c.q_integral, "q_integral");
    positive(c.r_zmp, "r_zmp");
    positive(c.process_cov, "process_cov");
    positive(c.meas_cov, "meas_cov");
    positive(c.integral_limit, "integral_limit");
    if (!(c.k_sa > 0.0)) bad.push_back("k_sa must be > 0");
    if (!(c.k_f > 0.0 && c.k_f <= 1.0)) bad.push_back("k_f must be in (0, 1]");
    non_negative(c.compliance_margin, "compliance_margin");
    positive(c.dt_sat, "dt_sat");
    if (!(c.retarget_cutoff > 0.0 && c.retarget_cutoff <= 1.0))
        bad.push_back("retarget_cutoff must be in (0, 1]");
    non_negative(c.noise_variance, "noise_variance");
    positive(c.dt, "dt");
    positive(c.fall_radius, "fall_radius");
    positive(c.com_excursion, "com_excursion");
    positive(c.settle_dcm_error, "settle_dcm_error");
    non_negative(c.settle_hold, "settle_hold");
    positive(c.push_duration, "push_duration");
    non_negative(c.push_time, "push_time");
    if (!(c.force_lo < c.force_hi)) bad.push_back("force_lo must be < force_hi");
    positive(c.bisection_tol, "bisection_tol");
    if (c.strategy != "all" && c.strategy != "torque_only" && c.strategy != "location" &&
        c.strategy != "location_time")
        bad.push_back("strategy must be one of all|torque_only|location|location_time");
    if (!(c.grid_c_step > 0.0)) bad.push_back("grid_c_step must be > 0");
    if (!(c.grid_cdot_step > 0.0)) bad.push_back("grid_cdot_step must be > 0");
    if (!(c.grid_c_min <= c.grid_c_max)) bad.push_back("grid_c_min must be <= grid_c_max");
    if (!(c.grid_cdot_min <= c.grid_cdot_max))
        bad.push_back("grid_cdot_min must be <= grid_cdot_max");
    positive(c.grid_time_limit, "grid_time_limit");
    positive(c.grid_settle_pos, "grid_settle_pos");
    positive(c.grid_settle_vel, "grid_settle_vel");
    if (c.jobs < 1) bad.push_back("jobs must be >= 1");
    return bad;
}

/// FNV-1a over the canonical JSON dump; recorded in every CSV header.
inline std::uint64_t config_hash(const RunConfig& c) {
    const std::string s = to_json(c).dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace dcmwalk
