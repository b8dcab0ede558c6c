// dcmwalk CLI: plans reference gaits, runs the tracking walk, and reproduces
// the stability-grid and push-sweep experiments as CSV data.
#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include "dcmwalk/config.hpp"
#include "dcmwalk/csv.hpp"
#include "dcmwalk/scenario.hpp"
#include "dcmwalk/simulation.hpp"
#include "dcmwalk/trial_io.hpp"

namespace fs = std::filesystem;
using namespace dcmwalk;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
    bool dump_gains = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON config file overlaying the defaults");
    cmd->add_option("--out", args.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--seed", args.seed, "RNG seed");
    cmd->add_option("--jobs", args.jobs, "worker threads for independent trials");
    cmd->add_flag("--dump-gains", args.dump_gains, "write the synthesized gain matrices");
}

/// Returns the finalized config, or nullopt after printing every violation.
std::optional<RunConfig> finalize(RunConfig cfg, const CommonArgs& args) {
    std::vector<std::string> problems;
    if (!args.config_path.empty()) problems = load_config_file(cfg, args.config_path);
    if (args.seed) cfg.seed = *args.seed;
    if (args.jobs) cfg.jobs = *args.jobs;
    for (const auto& v : validate_config(cfg)) problems.push_back(v);
    if (!problems.empty()) {
        std::fprintf(stderr, "invalid configuration:\n");
        for (const auto& p : problems) std::fprintf(stderr, "  - %s\n", p.c_str());
        return std::nullopt;
    }
    fs::create_directories(args.out_dir);
    return cfg;
}

void dump_gains_csv(const RunConfig& cfg, const fs::path& dir) {
    const GainSet g = synthesize_gains(make_pendulum(cfg.com_height, cfg.gravity).omega,
                                       cfg.dt, weights_of(cfg));
    CsvWriter csv(dir / "gains.csv");
    csv.comment(hash_comment(cfg));
    csv.header({"name", "row", "col", "value"});
    auto emit = [&](const std::string& name, const Eigen::MatrixXd& m) {
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c)
                csv.row().add(name).add(static_cast<int>(r)).add(static_cast<int>(c)).add(
                    m(r, c));
    };
    emit("A_d", g.plant.A);
    emit("B_d", g.plant.B);
    emit("K", g.K);
    emit("L", g.L);
    emit("P_lqr", g.P_lqr);
    emit("P_kf", g.P_kf);
}

int cmd_plan(const RunConfig& cfg, const CommonArgs& args) {
    const PendulumParams pend = make_pendulum(cfg.com_height, cfg.gravity);
    const Side first = cfg.first_support == "left" ? Side::Left : Side::Right;
    const ReferencePlan plan(gait_of(cfg), pend, cfg.n_steps, first);

    {
        CsvWriter csv(fs::path(args.out_dir) / "footprints.csv");
        csv.comment(hash_comment(cfg));
        csv.header({"index", "side", "x", "y"});
        for (const Footprint& f : plan.footprints()) {
            csv.row()
                .add(f.index)
                .add(std::string(f.side == Side::Left ? "left" : "right"))
                .add(f.position.x)
                .add(f.position.y);
        }
    }

    CsvWriter csv(fs::path(args.out_dir) / "plan.csv");
    csv.comment(hash_comment(cfg));
    csv.header({"t", "zmp_x", "zmp_y", "com_x", "com_y", "comd_x", "comd_y", "dcm_x", "dcm_y",
                "swing_x", "swing_y", "swing_z"});
    const long n = std::lround(plan.walk_end() / cfg.dt);
    for (long k = 0; k <= n; ++k) {
        const double t = k * cfg.dt;
        const ReferenceFrame f = plan.eval(t);
        csv.row()
            .add(t)
            .add(f.zmp_ref.x)
            .add(f.zmp_ref.y)
            .add(f.com_ref.x)
            .add(f.com_ref.y)
            .add(f.com_vel_ref.x)
            .add(f.com_vel_ref.y)
            .add(f.dcm_ref.x)
            .add(f.dcm_ref.y)
            .add(f.swing.horizontal.x)
            .add(f.swing.horizontal.y)
            .add(f.swing.height);
    }
    std::printf("plan: %d steps, %s/plan.csv + footprints.csv written\n", cfg.n_steps,
                args.out_dir.c_str());
    return 0;
}

int cmd_walk(const RunConfig& cfg, const CommonArgs& args) {
    WalkSimulation sim(sim_config_of(cfg));
    const TrialResult res = sim.run(true);

    CsvWriter csv(fs::path(args.out_dir) / "walk.csv");
    csv.comment(hash_comment(cfg));
    write_trial_rows(csv, res.log);

    std::printf("walk: %s, rms dcm tracking error %.4f m, peak %.4f m\n",
                res.fell ? "FELL" : "completed", res.rms_dcm_error, res.peak_dcm_error);
    return res.fell ? 1 : 0;
}

int cmd_scenario1(const RunConfig& cfg, const CommonArgs& args) {
    const GridResult grid = run_stability_grid(grid_spec_of(cfg), standing_config_of(cfg),
                                               cfg.jobs);
    write_grid_csv(fs::path(args.out_dir) / "grid.csv", cfg, grid);
    int recovered = 0;
    for (const GridCell& cell : grid.cells) recovered += cell.recovered ? 1 : 0;
    std::printf("scenario1: %zu trials, %d recovered, %s/grid.csv written\n",
                grid.cells.size(), recovered, args.out_dir.c_str());
    return 0;
}

int cmd_scenario2(const RunConfig& cfg, const CommonArgs& args) {
    const WalkSimConfig base = sim_config_of(cfg);
    const PushSweepSpec spec = sweep_spec_of(cfg);

    std::vector<RecoveryStrategy> strategies;
    if (cfg.strategy == "all") {
        strategies = {RecoveryStrategy::TorqueOnly, RecoveryStrategy::Location,
                      RecoveryStrategy::LocationTime};
    } else if (cfg.strategy == "torque_only") {
        strategies = {RecoveryStrategy::TorqueOnly};
    } else if (cfg.strategy == "location") {
        strategies = {RecoveryStrategy::Location};
    } else {
        strategies = {RecoveryStrategy::LocationTime};
    }

    CsvWriter csv(fs::path(args.out_dir) / "sweep.csv");
    csv.comment(hash_comment(cfg));
    {
        // The push lands a fixed time after stepping begins; record the phase.
        const ReferencePlan plan(base.gait, base.pendulum(), base.n_steps,
                                 base.first_support);
        const double t_abs = plan.stepping_start() + cfg.push_time;
        const int step = plan.step_of(t_abs);
        const double local = t_abs - plan.step_start(step);
        char buf[112];
        std::snprintf(buf, sizeof(buf),
                      "push at %g s after stepping begins: step %d, %.3f s into the step",
                      cfg.push_time, step, local);
        csv.comment(buf);
    }
    csv.header({"record", "strategy", "force", "verdict_or_value"});

    std::vector<double> f_max(strategies.size(), 0.0);
    for (size_t i = 0; i < strategies.size(); ++i) {
        const SweepResult sr = max_recoverable_push(base, strategies[i], spec);
        f_max[i] = sr.f_max;
        for (const SweepProbe& p : sr.probes) {
            csv.row()
                .add(std::string("probe"))
                .add(std::string(strategy_name(sr.strategy)))
                .add(p.force)
                .add(std::string(p.recovered ? "recovered" : "fallen"));
        }
        csv.row()
            .add(std::string("f_max"))
            .add(std::string(strategy_name(sr.strategy)))
            .add(sr.f_max)
            .add(std::string(sr.diagnostic.empty() ? "ok" : sr.diagnostic));
        std::printf("scenario2 %-13s f_max = %7.1f N%s%s\n", strategy_name(sr.strategy),
                    sr.f_max, sr.diagnostic.empty() ? "" : " | ",
                    sr.diagnostic.c_str());

        // Per-cycle log of the strongest recovered trial for this strategy.
        const TrialResult logged =
            run_push_trial(base, strategies[i], sr.f_max, spec, true);
        CsvWriter trial_csv(fs::path(args.out_dir) /
                            (std::string("trial_") + strategy_name(sr.strategy) + ".csv"));
        trial_csv.comment(hash_comment(cfg));
        write_trial_rows(trial_csv, logged.log);
    }

    if (strategies.size() == 3) {
        const ImprovementReport rep = improvement_report(f_max[0], f_max[1], f_max[2]);
        csv.row()
            .add(std::string("improvement"))
            .add(std::string("location_vs_baseline"))
            .add(rep.location_vs_baseline_pct)
            .add(std::string("percent"));
        csv.row()
            .add(std::string("improvement"))
            .add(std::string("time_vs_location"))
            .add(rep.time_vs_location_pct)
            .add(std::string("percent"));
        csv.row()
            .add(std::string("improvement"))
            .add(std::string("combined_vs_baseline"))
            .add(rep.combined_vs_baseline_pct)
            .add(std::string("percent"));
        std::printf(
            "scenario2 improvements: location %+.1f%%, time over location %+.1f%%, combined "
            "%+.1f%%\n",
            rep.location_vs_baseline_pct, rep.time_vs_location_pct,
            rep.combined_vs_baseline_pct);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DCM-based robust walking simulation"};
    app.require_subcommand(1);

    CommonArgs plan_args, walk_args, s1_args, s2_args;
    CLI::App* plan = app.add_subcommand("plan", "emit the reference trajectory tables");
    add_common(plan, plan_args);
    CLI::App* walk = app.add_subcommand("walk", "closed-loop tracking walk with noise");
    add_common(walk, walk_args);
    CLI::App* s1 = app.add_subcommand("scenario1", "single-support stability grid");
    add_common(s1, s1_args);
    CLI::App* s2 = app.add_subcommand("scenario2", "push-recovery force sweep");
    add_common(s2, s2_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (plan->parsed()) {
            auto cfg = finalize(default_plan_config(), plan_args);
            if (!cfg) return 2;
            if (plan_args.dump_gains) dump_gains_csv(*cfg, plan_args.out_dir);
            return cmd_plan(*cfg, plan_args);
        }
        if (walk->parsed()) {
            auto cfg = finalize(default_walk_config(), walk_args);
            if (!cfg) return 2;
            if (walk_args.dump_gains) dump_gains_csv(*cfg, walk_args.out_dir);
            return cmd_walk(*cfg, walk_args);
        }
        if (s1->parsed()) {
            auto cfg = finalize(default_scenario1_config(), s1_args);
            if (!cfg) return 2;
            if (s1_args.dump_gains) dump_gains_csv(*cfg, s1_args.out_dir);
            return cmd_scenario1(*cfg, s1_args);
        }
        auto cfg = finalize(default_scenario2_config(), s2_args);
        if (!cfg) return 2;
        if (s2_args.dump_gains) dump_gains_csv(*cfg, s2_args.out_dir);
        return cmd_scenario2(*cfg, s2_args);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
