#include "haptosim/stepper.hpp"

#include <algorithm>
#include <cmath>

#include "haptosim/linsolve.hpp"

namespace haptosim {

const char* to_string(StepStatus s) {
    switch (s) {
        case StepStatus::Ok: return "ok";
        case StepStatus::BlowupSuspected: return "blowup_suspected";
        case StepStatus::DtUnderflow: return "dt_underflow";
    }
    return "unknown";
}

void StepperConfig::validate() const {
    if (!(dt_init > 0.0) || !(dt_min > 0.0) || dt_min > dt_init)
        throw ConfigError("StepperConfig: need 0 < dt_min <= dt_init");
    if (!(cfl_safety > 0.0) || cfl_safety > 1.0)
        throw ConfigError("StepperConfig: cfl_safety must be in (0,1]");
    if (!(cg_rel_tol > 0.0)) throw ConfigError("StepperConfig: cg_rel_tol must be positive");
    if (cg_max_iter < 1) throw ConfigError("StepperConfig: cg_max_iter must be >= 1");
    if (!(positivity_tol >= 0.0)) throw ConfigError("StepperConfig: positivity_tol must be >= 0");
    if (!(blowup_threshold > 0.0)) throw ConfigError("StepperConfig: blowup_threshold must be positive");
}

namespace {

/// Closed form for w' = w (alpha - eta w) over dt with frozen alpha:
/// w(dt) = w0 e^{alpha dt} / (1 + eta w0 phi), phi = (e^{alpha dt} - 1)/alpha.
/// phi > 0 for dt > 0, so w0 >= 0 keeps the denominator >= 1: the update can
/// neither cross zero nor blow through the logistic cap.
inline double logistic_advance(double w0, double alpha, double eta, double dt) {
    const double x = alpha * dt;
    const double ex = std::exp(x);
    const double phi = (std::abs(x) > 1e-8) ? std::expm1(x) / alpha : dt * (1.0 + 0.5 * x);
    return w0 * ex / (1.0 + eta * w0 * phi);
}

struct StepScratch {
    Field w_new, v_new, u_new, b, expl, tax;
    CgWorkspace cg;
    explicit StepScratch(const Grid2D& g)
        : w_new(g), v_new(g), u_new(g), b(g), expl(g), tax(g), cg(g) {}
};

void advance_w(const State& s, const ModelParams& p, const Grid2D& g,
               const StepperConfig& cfg, double dt, const SourceTerms* sources,
               Field& w_new, Field& src_scratch) {
    const std::size_t n = g.size();
    if (cfg.w_update == WUpdate::ExactLogistic) {
        for (std::size_t k = 0; k < n; ++k) {
            const double alpha = p.eta * (1.0 - s.u[k]) - s.v[k];
            w_new[k] = logistic_advance(s.w[k], alpha, p.eta, dt);
        }
    } else {
        for (std::size_t k = 0; k < n; ++k) {
            const double alpha = p.eta * (1.0 - s.u[k]) - s.v[k];
            w_new[k] = s.w[k] + dt * s.w[k] * (alpha - p.eta * s.w[k]);
        }
    }
    if (sources) {
        sources->eval_w(g, s.t, src_scratch);
        for (std::size_t k = 0; k < n; ++k) w_new[k] += dt * src_scratch[k];
    }
}

int solve_v(const Field& v_old, const Field& u_src, const ModelParams& p, const Grid2D& g,
            const StepperConfig& cfg, double dt, double t_next, const SourceTerms* sources,
            Field& v_new, Field& b, Field& src_scratch, CgWorkspace& cg) {
    const std::size_t n = g.size();
    const double dtt = dt / p.tau;
    for (std::size_t k = 0; k < n; ++k) b[k] = v_old[k] + dtt * u_src[k];
    if (sources) {
        sources->eval_v(g, t_next, src_scratch);
        for (std::size_t k = 0; k < n; ++k) b[k] += dt * src_scratch[k];
    }
    v_new = v_old;  // warm start
    Field lap(g);
    auto apply = [&](const Field& x, Field& out) {
        laplacian_neumann(x, g, lap);
        for (std::size_t k = 0; k < n; ++k) out[k] = x[k] + dtt * (x[k] - lap[k]);
    };
    return conjugate_gradient(apply, b, v_new, cfg.cg_rel_tol, cfg.cg_max_iter, cg, "v-solve");
}

/// Snap tiny negatives to zero, clamp genuine ones, count both.
void enforce_nonnegative(Field& f, double dust_tol, int& clamped, int& dust) {
    for (double& x : f.data) {
        if (x < 0.0) {
            if (x < -dust_tol)
                ++clamped;
            else
                ++dust;
            x = 0.0;
        }
    }
}

StepOutcome attempt_step_primitive(const State& s, const ModelParams& p, const Grid2D& g,
                                   const StepperConfig& cfg, const StencilConfig& stencil,
                                   double dt, const SourceTerms* sources, StepScratch& ws) {
    const std::size_t n = g.size();
    const double t_next = s.t + dt;
    StepOutcome out;

    // (i) w
    advance_w(s, p, g, cfg, dt, sources, ws.w_new, ws.expl);

    // (ii) v with the lagged source u^n
    out.cg_iters_v = solve_v(s.v, s.u, p, g, cfg, dt, t_next, sources,
                             ws.v_new, ws.b, ws.expl, ws.cg);

    // (iii) u: explicit taxis + reaction, implicit diffusion
    taxis_div(s.u, ws.v_new, p.chi, g, stencil, ws.tax);
    for (std::size_t k = 0; k < n; ++k) ws.expl[k] = -ws.tax[k];
    taxis_div(s.u, ws.w_new, p.xi, g, stencil, ws.tax);
    double reaction_sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double re = p.mu * s.u[k] * (1.0 - s.u[k] - ws.w_new[k]);
        reaction_sum += re;
        ws.expl[k] += -ws.tax[k] + re;
    }
    if (sources) {
        sources->eval_u(g, t_next, ws.tax);
        for (std::size_t k = 0; k < n; ++k) ws.expl[k] += ws.tax[k];
    }
    for (std::size_t k = 0; k < n; ++k) ws.b[k] = s.u[k] + dt * ws.expl[k];
    ws.u_new = s.u;  // warm start
    Field lap(g);
    auto apply_u = [&](const Field& x, Field& outf) {
        laplacian_neumann(x, g, lap);
        for (std::size_t k = 0; k < n; ++k) outf[k] = x[k] - dt * lap[k];
    };
    out.cg_iters_u = conjugate_gradient(apply_u, ws.b, ws.u_new, cfg.cg_rel_tol,
                                        cfg.cg_max_iter, ws.cg, "u-solve");

    // FreshU: replace v^{n+1} by the solve sourced with u^{n+1}
    if (cfg.v_source == VSource::FreshU) {
        Field v2(g);
        out.cg_iters_v += solve_v(s.v, ws.u_new, p, g, cfg, dt, t_next, sources,
                                  v2, ws.b, ws.expl, ws.cg);
        ws.v_new = std::move(v2);
    }

    const double dust_tol = cfg.positivity_tol * (1.0 + max_abs(s.u));
    int clamped = 0, dust = 0;
    enforce_nonnegative(ws.u_new, dust_tol, clamped, dust);
    enforce_nonnegative(ws.v_new, dust_tol, clamped, dust);
    enforce_nonnegative(ws.w_new, dust_tol, clamped, dust);
    out.clamped_cells = clamped;
    out.dust_cells = dust;

    if (!sources) {
        const double m_res =
            std::abs((cell_sum(ws.u_new) - cell_sum(s.u)) / dt - reaction_sum) * g.cell_area();
        out.mass_residual = m_res;
    }

    out.state.u = ws.u_new;
    out.state.v = ws.v_new;
    out.state.w = ws.w_new;
    out.state.t = t_next;
    out.dt_used = dt;
    out.status = (all_finite(out.state.u) && all_finite(out.state.v) && all_finite(out.state.w))
                     ? StepStatus::Ok
                     : StepStatus::BlowupSuspected;
    return out;
}

StepOutcome attempt_step_transformed(const State& s, const ModelParams& p, const Grid2D& g,
                                     const StepperConfig& cfg, const StencilConfig& stencil,
                                     double dt, const SourceTerms* sources, StepScratch& ws) {
    if (sources)
        throw ConfigError("step: manufactured sources are not supported on the transformed path");
    const std::size_t n = g.size();
    const double t_next = s.t + dt;
    StepOutcome out;

    // (i) w, identical to the primitive path (u^n, v^n frozen)
    advance_w(s, p, g, cfg, dt, nullptr, ws.w_new, ws.expl);

    // (ii) v with the lagged source u^n = a^n e^{xi w^n}
    out.cg_iters_v = solve_v(s.v, s.u, p, g, cfg, dt, t_next, nullptr,
                             ws.v_new, ws.b, ws.expl, ws.cg);

    // (iii) a-equation, multiplied through by E = e^{xi w^{n+1}}:
    //   (E - dt div(E grad)) a^{n+1} = E a^n + dt [ -chi taxis(u^n, v)
    //     + E a^n ( xi v w + (mu - xi eta w)(1 - E a^n - w) ) ]
    Field a(g), ew(g);
    for (std::size_t k = 0; k < n; ++k) {
        a[k] = s.u[k] * std::exp(-p.xi * s.w[k]);
        ew[k] = std::exp(p.xi * ws.w_new[k]);
    }
    taxis_div(s.u, ws.v_new, p.chi, g, stencil, ws.tax);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = ws.w_new[k];
        const double ea = ew[k] * a[k];
        const double react = ea * (p.xi * ws.v_new[k] * w +
                                   (p.mu - p.xi * p.eta * w) * (1.0 - ea - w));
        ws.b[k] = ew[k] * a[k] + dt * (-ws.tax[k] + react);
    }
    Field a_new = a;  // warm start
    Field wl(g);
    auto apply_a = [&](const Field& x, Field& outf) {
        weighted_laplacian_neumann(x, ew, g, wl);
        for (std::size_t k = 0; k < n; ++k) outf[k] = ew[k] * x[k] - dt * wl[k];
    };
    out.cg_iters_u = conjugate_gradient(apply_a, ws.b, a_new, cfg.cg_rel_tol,
                                        cfg.cg_max_iter, ws.cg, "a-solve");

    const double dust_tol = cfg.positivity_tol * (1.0 + max_abs(a));
    int clamped = 0, dust = 0;
    enforce_nonnegative(a_new, dust_tol, clamped, dust);

    for (std::size_t k = 0; k < n; ++k) ws.u_new[k] = ew[k] * a_new[k];

    if (cfg.v_source == VSource::FreshU) {
        Field v2(g);
        out.cg_iters_v += solve_v(s.v, ws.u_new, p, g, cfg, dt, t_next, nullptr,
                                  v2, ws.b, ws.expl, ws.cg);
        ws.v_new = std::move(v2);
    }
    enforce_nonnegative(ws.v_new, dust_tol, clamped, dust);
    enforce_nonnegative(ws.w_new, dust_tol, clamped, dust);
    out.clamped_cells = clamped;
    out.dust_cells = dust;

    out.state.u = ws.u_new;
    out.state.v = ws.v_new;
    out.state.w = ws.w_new;
    out.state.t = t_next;
    out.dt_used = dt;
    out.status = (all_finite(out.state.u) && all_finite(out.state.v) && all_finite(out.state.w))
                     ? StepStatus::Ok
                     : StepStatus::BlowupSuspected;
    return out;
}

} // namespace

StepOutcome step(const State& s, const ModelParams& p, const Grid2D& g,
                 const StepperConfig& cfg, const StencilConfig& stencil, double dt,
                 const SourceTerms* sources) {
    require_on_grid(s.u, g, "step(u)");
    require_on_grid(s.v, g, "step(v)");
    require_on_grid(s.w, g, "step(w)");
    if (!(dt > 0.0)) throw ConfigError("step: dt must be positive");

    StepScratch ws(g);
    double dt_try = dt;
    for (;;) {
        StepOutcome out = cfg.solve_transformed
                              ? attempt_step_transformed(s, p, g, cfg, stencil, dt_try, sources, ws)
                              : attempt_step_primitive(s, p, g, cfg, stencil, dt_try, sources, ws);
        if (cfg.positivity_mode == PositivityMode::Reject &&
            (out.clamped_cells > 0 || out.status == StepStatus::BlowupSuspected)) {
            dt_try *= 0.5;
            if (dt_try < cfg.dt_min) {
                StepOutcome fail;
                fail.state = s;
                fail.dt_used = dt_try;
                fail.status = StepStatus::DtUnderflow;
                return fail;
            }
            continue;
        }
        return out;
    }
}

double stable_dt(const State& s, const ModelParams& p, const Grid2D& g,
                 const StepperConfig& cfg) {
    constexpr double eps = 1e-30;
    const std::size_t n = g.size();

    Field gv = grad_sq_neumann(s.v, g);
    Field gw = grad_sq_neumann(s.w, g);
    double speed = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double c = p.chi * std::sqrt(gv[k]) + p.xi * std::sqrt(gw[k]);
        speed = std::max(speed, c);
    }
    const double h_min = std::min(g.hx, g.hy);
    const double linf_u = max_abs(s.u);
    const double linf_v = max_abs(s.v);
    const double linf_w = max_abs(s.w);

    const double t_taxis = h_min / (speed + eps);
    const double t_logistic = 1.0 / (p.mu * (1.0 + 2.0 * linf_u + linf_w) + eps);
    const double t_w = 1.0 / (linf_v + p.eta * (1.0 + linf_u + 2.0 * linf_w) + eps);

    double dt = cfg.cfl_safety * std::min({t_taxis, t_logistic, t_w});
    return std::clamp(dt, cfg.dt_min, cfg.dt_init);
}

bool detect_blowup(const DiagnosticsRecord& d, double threshold) {
    if (!d.finite) return true;
    const double witness = d.linf_a + d.grad_w_l5;
    if (!std::isfinite(witness)) return true;
    return witness > threshold;
}

RunResult run(const State& initial, const ModelParams& p, const Grid2D& g,
              const StepperConfig& cfg, const StencilConfig& stencil,
              double t_end, double sample_every,
              const std::vector<double>& exponents,
              const SourceTerms* sources, const RunHooks* hooks) {
    p.validate();
    cfg.validate();
    if (!(t_end > initial.t)) throw ConfigError("run: t_end must exceed the initial time");
    if (!(sample_every > 0.0)) throw ConfigError("run: sample_every must be positive");
    if (!all_finite(initial.u) || !all_finite(initial.v) || !all_finite(initial.w))
        throw InvalidState("run: initial state contains non-finite values");

    RunResult res;
    res.final_state = initial;

    std::vector<double> events(hooks ? hooks->extra_event_times : std::vector<double>{});
    std::sort(events.begin(), events.end());
    std::size_t next_event = 0;

    const double t0 = initial.t;
    const double t_eps = 1e-12 * (std::abs(t_end) + 1.0);

    auto emit = [&](const State& st, long clamped) {
        DiagnosticsRecord d = compute_diagnostics(st, p, g, exponents);
        d.clamped_cells = clamped;
        res.records.push_back(d);
        if (hooks && hooks->on_sample) hooks->on_sample(st, res.records.back());
        return detect_blowup(res.records.back(), cfg.blowup_threshold);
    };

    if (emit(res.final_state, 0)) {
        res.status = StepStatus::BlowupSuspected;
        return res;
    }

    long k_sample = 1;
    while (res.final_state.t < t_end - t_eps) {
        const double t = res.final_state.t;
        double target = std::min(t0 + k_sample * sample_every, t_end);
        while (next_event < events.size() && events[next_event] <= t + t_eps) ++next_event;
        if (next_event < events.size()) target = std::min(target, events[next_event]);

        double dt = stable_dt(res.final_state, p, g, cfg);
        dt = std::min(dt, target - t);

        StepOutcome out = step(res.final_state, p, g, cfg, stencil, dt, sources);
        ++res.steps_taken;
        res.total_clamped += out.clamped_cells;
        res.total_dust += out.dust_cells;
        if (out.mass_residual) {
            const double scale = (1.0 + max_abs(res.final_state.u)) * g.area();
            res.max_mass_residual_ratio =
                std::max(res.max_mass_residual_ratio, *out.mass_residual / scale);
        }
        if (out.status == StepStatus::DtUnderflow) {
            res.status = StepStatus::DtUnderflow;
            return res;
        }
        res.final_state = std::move(out.state);
        if (out.status == StepStatus::BlowupSuspected) {
            emit(res.final_state, res.total_clamped);
            res.status = StepStatus::BlowupSuspected;
            return res;
        }

        const double t_now = res.final_state.t;
        if (next_event < events.size() && std::abs(t_now - events[next_event]) <= t_eps) {
            if (hooks && hooks->on_event) hooks->on_event(res.final_state);
            ++next_event;
        }
        const bool at_sample = std::abs(t_now - (t0 + k_sample * sample_every)) <= t_eps;
        const bool at_end = t_now >= t_end - t_eps;
        if (at_sample) ++k_sample;
        if (at_sample || at_end) {
            if (emit(res.final_state, res.total_clamped)) {
                res.status = StepStatus::BlowupSuspected;
                return res;
            }
        }
    }
    res.status = StepStatus::Ok;
    return res;
}

} // namespace haptosim
