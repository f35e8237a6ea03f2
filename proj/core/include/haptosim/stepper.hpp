#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "haptosim/diagnostics.hpp"
#include "haptosim/model.hpp"
#include "haptosim/spatial_ops.hpp"

namespace haptosim {

enum class PositivityMode {
    ClampReport,  ///< clamp negative cells to zero and count them
    Reject,       ///< reject the step and halve dt
};

enum class WUpdate {
    Explicit,       ///< forward Euler on w' = w(alpha - eta w)
    ExactLogistic,  ///< closed-form logistic solution with alpha frozen per cell
};

enum class VSource {
    LaggedU,  ///< v solved once with u^n as source
    FreshU,   ///< v re-solved after the u update with u^{n+1} as source
};

enum class StepStatus {
    Ok,
    BlowupSuspected,  ///< non-finite values appeared, or the blow-up functional crossed its threshold
    DtUnderflow,      ///< rejection halving drove dt below dt_min
};

const char* to_string(StepStatus s);

struct StepperConfig {
    double dt_init = 1e-2;
    double dt_min = 1e-10;
    double cfl_safety = 0.5;
    double cg_rel_tol = 1e-10;
    int cg_max_iter = 10000;
    PositivityMode positivity_mode = PositivityMode::ClampReport;
    WUpdate w_update = WUpdate::ExactLogistic;
    VSource v_source = VSource::FreshU;
    /// Cells in [-positivity_tol*(1+|u|_inf), 0) are linear-solver dust: they
    /// are snapped to zero and reported in StepOutcome::dust_cells, not
    /// counted as clamp events.
    double positivity_tol = 1e-10;
    /// Threshold on |a|_inf + |grad w|_L5 for detect_blowup.
    double blowup_threshold = 1e6;
    /// Evolve (a, v, w) via the weighted-diffusion form instead of (u, v, w).
    bool solve_transformed = false;

    void validate() const;
};

struct StepOutcome {
    State state;
    double dt_used = 0.0;
    int cg_iters_u = 0;      ///< u-solve (a-solve on the transformed path)
    int cg_iters_v = 0;      ///< v-solve; sum of both solves in FreshU mode
    int clamped_cells = 0;   ///< genuine negative cells clamped to zero
    int dust_cells = 0;      ///< near-zero negatives snapped within tolerance
    StepStatus status = StepStatus::Ok;
    /// |(int u^{n+1} - int u^n)/dt - mu int u^n(1 - u^n - w^{n+1})|, tracked on
    /// source-free primitive steps (diffusion and taxis integrate to zero).
    std::optional<double> mass_residual;
};

/// Per-equation forcing terms for manufactured-solution runs.
class SourceTerms {
public:
    virtual ~SourceTerms() = default;
    virtual void eval_u(const Grid2D& g, double t, Field& out) const = 0;
    virtual void eval_v(const Grid2D& g, double t, Field& out) const = 0;
    virtual void eval_w(const Grid2D& g, double t, Field& out) const = 0;
};

/// One IMEX Euler step, update order w -> v -> u:
///   (i)  w: pointwise logistic ODE with alpha = eta(1-u^n) - v^n frozen,
///        advanced in closed form (or forward Euler);
///   (ii) v: (I + dt/tau - (dt/tau) Lap_h) v = v^n + (dt/tau) u_src, CG;
///   (iii) u: (I - dt Lap_h) u = u^n + dt(-taxis(u^n, v, chi)
///        - taxis(u^n, w^{n+1}, xi) + mu u^n (1 - u^n - w^{n+1})), CG;
/// then the FreshU re-solve of v with u^{n+1}. Negative cells are handled per
/// positivity_mode. dt is the controller's proposal; Reject mode may halve it.
StepOutcome step(const State& s, const ModelParams& p, const Grid2D& g,
                 const StepperConfig& cfg, const StencilConfig& stencil, double dt,
                 const SourceTerms* sources = nullptr);

/// CFL-style proposal:
///   dt = cfl_safety * min( h_min / max_cells(chi|grad v| + xi|grad w| + eps),
///                          1/(mu(1 + 2|u|oo + |w|oo) + eps),
///                          1/(|v|oo + eta(1 + |u|oo + 2|w|oo) + eps) )
/// clamped to [dt_min, dt_init], eps = 1e-30.
double stable_dt(const State& s, const ModelParams& p, const Grid2D& g,
                 const StepperConfig& cfg);

/// True iff |a|_inf + |grad w|_L5 exceeds the threshold or any monitored
/// quantity is non-finite.
bool detect_blowup(const DiagnosticsRecord& d, double threshold);

struct RunResult {
    State final_state;
    std::vector<DiagnosticsRecord> records;
    StepStatus status = StepStatus::Ok;
    long steps_taken = 0;
    long total_clamped = 0;
    long total_dust = 0;
    /// max over steps of mass_residual / ((1 + |u^n|oo) * area)
    double max_mass_residual_ratio = 0.0;
};

struct RunHooks {
    /// Called at every emitted diagnostics sample.
    std::function<void(const State&, const DiagnosticsRecord&)> on_sample;
    /// Called when the run lands on one of extra_event_times.
    std::function<void(const State&)> on_event;
    /// Extra times the integrator must land on exactly (snapshots).
    std::vector<double> extra_event_times;
};

/// Advance from initial to t_end with stable_dt + step, emitting a
/// DiagnosticsRecord at t = 0, every sample_every, and at t_end. Stops early
/// on blow-up or dt underflow; the status carries through.
RunResult run(const State& initial, const ModelParams& p, const Grid2D& g,
              const StepperConfig& cfg, const StencilConfig& stencil,
              double t_end, double sample_every,
              const std::vector<double>& exponents = {2.0},
              const SourceTerms* sources = nullptr,
              const RunHooks* hooks = nullptr);

} // namespace haptosim
