// CSV emission of trial logs, grids and sweeps, shared by the CLI and the
// test harness.
#pragma once

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "dcmwalk/config.hpp"
#include "dcmwalk/csv.hpp"
#include "dcmwalk/scenario.hpp"
#include "dcmwalk/simulation.hpp"

namespace dcmwalk {

inline std::string hash_comment(const RunConfig& cfg) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "config_hash=%016" PRIx64 " seed=%llu", config_hash(cfg),
                  static_cast<unsigned long long>(cfg.seed));
    return buf;
}

inline const std::vector<std::string>& trial_columns() {
    static const std::vector<std::string> cols = {
        "t",          "step",       "phase",      "zmp_ref_x",  "zmp_ref_y",  "com_ref_x",
        "com_ref_y",  "comd_ref_x", "comd_ref_y", "dcm_ref_x",  "dcm_ref_y",  "swing_x",
        "swing_y",    "swing_z",    "com_meas_x", "com_meas_y", "dcm_meas_x", "dcm_meas_y",
        "com_x",      "com_y",      "comd_x",     "comd_y",     "dcm_x",      "dcm_y",
        "p_cmd_x",    "p_cmd_y",    "p_app_x",    "p_app_y",    "delta_f_x",  "delta_f_y",
        "delta_p_x",  "delta_p_y",  "retarget_x", "retarget_y", "dt_adjust",  "landing_disp"};
    return cols;
}

inline void write_trial_rows(CsvWriter& csv, const std::vector<CycleLog>& log) {
    csv.header(trial_columns());
    for (const CycleLog& r : log) {
        csv.row()
            .add(r.t)
            .add(r.step)
            .add(r.phase)
            .add(r.zmp_ref.x)
            .add(r.zmp_ref.y)
            .add(r.com_ref.x)
            .add(r.com_ref.y)
            .add(r.com_vel_ref.x)
            .add(r.com_vel_ref.y)
            .add(r.dcm_ref.x)
            .add(r.dcm_ref.y)
            .add(r.swing_pos.x)
            .add(r.swing_pos.y)
            .add(r.swing_height)
            .add(r.com_meas.x)
            .add(r.com_meas.y)
            .add(r.dcm_meas.x)
            .add(r.dcm_meas.y)
            .add(r.com.x)
            .add(r.com.y)
            .add(r.com_vel.x)
            .add(r.com_vel.y)
            .add(r.dcm.x)
            .add(r.dcm.y)
            .add(r.p_cmd.x)
            .add(r.p_cmd.y)
            .add(r.p_applied.x)
            .add(r.p_applied.y)
            .add(r.delta_f.x)
            .add(r.delta_f.y)
            .add(r.delta_p.x)
            .add(r.delta_p.y)
            .add(r.retarget.x)
            .add(r.retarget.y)
            .add(r.dt_adjust)
            .add(r.landing_disp);
    }
}

inline void write_grid_csv(const std::filesystem::path& path, const RunConfig& cfg,
                           const GridResult& grid) {
    CsvWriter csv(path);
    csv.comment(hash_comment(cfg));
    csv.header({"c0", "cdot0", "verdict"});
    for (const GridCell& cell : grid.cells) {
        csv.row()
            .add(cell.c0)
            .add(cell.cdot0)
            .add(std::string(cell.recovered ? "recovered" : "fallen"));
    }
}

}  // namespace dcmwalk
