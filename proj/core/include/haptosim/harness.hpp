#pragma once

#include <string>
#include <vector>

#include "haptosim/config.hpp"
#include "haptosim/mms.hpp"

namespace haptosim {

struct ExitReport {
    int exit_code = 0;  ///< 0 ok, 2 blowup_suspected, 3 dt_underflow
    StepStatus status = StepStatus::Ok;
    std::string output_dir;
    RunResult result;
};

/// Execute the configured run; writes diagnostics.csv, snapshot field dumps
/// and report.txt into cfg.output_dir.
ExitReport run_simulation(const RunConfig& cfg);

struct SweepRow {
    double value = 0.0;
    StepStatus status = StepStatus::Ok;
    double final_linf_u = 0.0;
    double max_blowup_witness = 0.0;  ///< max over time of |a|oo + |grad w|_L5
    std::string error;                ///< non-empty when the row failed outright
};

struct SweepResult {
    std::string axis;
    std::vector<SweepRow> rows;
};

/// Independent runs of `base` with `axis` in {mu, chi, xi, eta} swept over
/// `values`; rows run concurrently, capped by HAPTOSIM_THREADS. Writes
/// sweep.csv into base.output_dir.
SweepResult run_sweep(const RunConfig& base, const std::string& axis,
                      const std::vector<double>& values);

struct MMSLevel {
    int nx = 0, ny = 0;
    double h = 0.0;
    double dt = 0.0;
    double err_u = 0.0, err_v = 0.0, err_w = 0.0;  ///< L2 errors at t_end
};

struct MMSResult {
    std::vector<MMSLevel> levels;
    double slope_u = 0.0, slope_v = 0.0, slope_w = 0.0;
    double slope_min = 0.0;
    bool pass = true;
    std::string table;  ///< printable convergence table
};

/// Manufactured-solution convergence study of the full scheme.
MMSResult run_mms(const MMSConfig& mms, const ModelParams& params,
                  const StepperConfig& stepper, const StencilConfig& stencil);

/// Serialize records with the fixed column order: t, mass_u, l2_v_sq,
/// grad_v_l2_sq, linf_u, linf_a, linf_v, grad_w_l5, lp_a_<p>..., energy_<p>...
/// (ascending p), clamped_cells.
std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& records);

std::string format_report(const RunConfig& cfg, const RunResult& res, double rho0);

} // namespace haptosim
