#include "haptosim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "haptosim/lemma.hpp"
#include "haptosim/snapshot_io.hpp"

namespace haptosim {

namespace {

std::string fmt_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string fmt_short(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", x);
    return buf;
}

std::string exponent_label(double p) {
    if (p == std::floor(p) && std::abs(p) < 1e9) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%ld", static_cast<long>(p));
        return buf;
    }
    return fmt_short(p);
}

} // namespace

std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& records) {
    std::ostringstream out;
    out << "t,mass_u,l2_v_sq,grad_v_l2_sq,linf_u,linf_a,linf_v,grad_w_l5";
    if (!records.empty()) {
        for (const auto& [p, _] : records.front().lp_a) out << ",lp_a_" << exponent_label(p);
        for (const auto& [p, _] : records.front().energy_p) out << ",energy_" << exponent_label(p);
    }
    out << ",clamped_cells\n";
    for (const auto& d : records) {
        out << fmt_g17(d.t) << ',' << fmt_g17(d.mass_u) << ',' << fmt_g17(d.l2_v_sq) << ','
            << fmt_g17(d.grad_v_l2_sq) << ',' << fmt_g17(d.linf_u) << ',' << fmt_g17(d.linf_a)
            << ',' << fmt_g17(d.linf_v) << ',' << fmt_g17(d.grad_w_l5);
        for (const auto& [_, val] : d.lp_a) out << ',' << fmt_g17(val);
        for (const auto& [_, val] : d.energy_p) out << ',' << fmt_g17(val);
        out << ',' << d.clamped_cells << '\n';
    }
    return out.str();
}

std::string format_report(const RunConfig& cfg, const RunResult& res, double rho0) {
    std::ostringstream out;
    out << "status = " << to_string(res.status) << "\n";
    out << "exit_code = " << (res.status == StepStatus::Ok ? 0 : res.status == StepStatus::BlowupSuspected ? 2 : 3) << "\n";
    out << "steps = " << res.steps_taken << "\n";
    out << "t_final = " << fmt_short(res.final_state.t) << "\n";
    out << "rho = " << fmt_short(rho0) << "\n";
    out << "clamped_cells_total = " << res.total_clamped << "\n";
    out << "dust_cells_total = " << res.total_dust << "\n";
    out << "max_mass_residual_ratio = " << fmt_short(res.max_mass_residual_ratio) << "\n";
    double max_u = 0, max_v = 0, max_a = 0, max_witness = 0;
    for (const auto& d : res.records) {
        max_u = std::max(max_u, d.linf_u);
        max_v = std::max(max_v, d.linf_v);
        max_a = std::max(max_a, d.linf_a);
        max_witness = std::max(max_witness, d.linf_a + d.grad_w_l5);
    }
    out << "max_linf_u = " << fmt_short(max_u) << "\n";
    out << "max_linf_v = " << fmt_short(max_v) << "\n";
    out << "max_linf_a = " << fmt_short(max_a) << "\n";
    out << "max_blowup_witness = " << fmt_short(max_witness) << "\n";
    out << "solve_transformed = " << (cfg.solve_transformed ? "true" : "false") << "\n";
    return out.str();
}

ExitReport run_simulation(const RunConfig& cfg) {
    namespace fs = std::filesystem;
    ExitReport rep;
    rep.output_dir = cfg.output_dir;

    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec) throw Error("cannot create output directory `" + cfg.output_dir + "`: " + ec.message());

    const State initial = build_initial_state(cfg.initial, cfg.grid, cfg.seed);
    const double rho0 = rho_of(initial.w);

    StepperConfig st = cfg.stepper;
    st.solve_transformed = cfg.solve_transformed;

    RunHooks hooks;
    hooks.extra_event_times = cfg.snapshot_times;
    hooks.on_event = [&](const State& s) {
        const std::string base = cfg.output_dir + "/snapshot_" + fmt_short(s.t);
        write_snapshot_field(base + "_u", s.u, cfg.grid, s.t, "u");
        write_snapshot_field(base + "_v", s.v, cfg.grid, s.t, "v");
        write_snapshot_field(base + "_w", s.w, cfg.grid, s.t, "w");
    };

    rep.result = run(initial, cfg.params, cfg.grid, st, cfg.stencil, cfg.t_end,
                     cfg.sample_every, cfg.exponents, nullptr, &hooks);
    rep.status = rep.result.status;
    rep.exit_code = rep.status == StepStatus::Ok ? 0
                    : rep.status == StepStatus::BlowupSuspected ? 2 : 3;

    {
        std::ofstream csv(cfg.output_dir + "/diagnostics.csv", std::ios::trunc | std::ios::binary);
        if (!csv) throw Error("cannot write `" + cfg.output_dir + "/diagnostics.csv`");
        csv << diagnostics_csv(rep.result.records);
    }
    {
        const State& fin = rep.result.final_state;
        const std::string base = cfg.output_dir + "/snapshot_" + fmt_short(fin.t);
        write_snapshot_field(base + "_u", fin.u, cfg.grid, fin.t, "u");
        write_snapshot_field(base + "_v", fin.v, cfg.grid, fin.t, "v");
        write_snapshot_field(base + "_w", fin.w, cfg.grid, fin.t, "w");
    }
    {
        std::ofstream report(cfg.output_dir + "/report.txt", std::ios::trunc);
        if (!report) throw Error("cannot write `" + cfg.output_dir + "/report.txt`");
        report << format_report(cfg, rep.result, rho0);
    }
    return rep;
}

namespace {

void set_axis(RunConfig& cfg, const std::string& axis, double value) {
    if (axis == "mu")
        cfg.params.mu = value;
    else if (axis == "chi")
        cfg.params.chi = value;
    else if (axis == "xi")
        cfg.params.xi = value;
    else if (axis == "eta")
        cfg.params.eta = value;
    else
        throw ConfigError("sweep axis must be one of mu, chi, xi, eta; got `" + axis + "`");
    if (value < 0.0 || !std::isfinite(value))
        throw ConfigError("sweep value for `" + axis + "` must be finite and >= 0");
}

unsigned sweep_thread_cap() {
    unsigned cap = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("HAPTOSIM_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) cap = static_cast<unsigned>(v);
    }
    return cap;
}

} // namespace

SweepResult run_sweep(const RunConfig& base, const std::string& axis,
                      const std::vector<double>& values) {
    SweepResult res;
    res.axis = axis;
    res.rows.resize(values.size());
    for (double v : values) {
        RunConfig probe = base;
        set_axis(probe, axis, v);  // validate every value up front
    }

    const unsigned n_threads = std::min<unsigned>(sweep_thread_cap(),
                                                  std::max<std::size_t>(values.size(), 1));
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= values.size()) return;
            RunConfig cfg = base;
            set_axis(cfg, axis, values[i]);
            SweepRow row;
            row.value = values[i];
            try {
                const State initial = build_initial_state(cfg.initial, cfg.grid, cfg.seed);
                StepperConfig st = cfg.stepper;
                st.solve_transformed = cfg.solve_transformed;
                RunResult r = run(initial, cfg.params, cfg.grid, st, cfg.stencil, cfg.t_end,
                                  cfg.sample_every, cfg.exponents);
                row.status = r.status;
                row.final_linf_u = r.records.empty() ? 0.0 : r.records.back().linf_u;
                for (const auto& d : r.records)
                    row.max_blowup_witness = std::max(row.max_blowup_witness,
                                                      d.linf_a + d.grad_w_l5);
            } catch (const Error& e) {
                row.error = e.what();
                row.final_linf_u = std::nan("");
                row.max_blowup_witness = std::nan("");
            }
            res.rows[i] = row;
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(base.output_dir, ec);
    std::ofstream csv(base.output_dir + "/sweep.csv", std::ios::trunc | std::ios::binary);
    if (!csv) throw Error("cannot write `" + base.output_dir + "/sweep.csv`");
    csv << "value,status,final_linf_u,max_blowup_witness\n";
    for (const auto& r : res.rows)
        csv << fmt_g17(r.value) << ',' << (r.error.empty() ? to_string(r.status) : "error") << ','
            << fmt_g17(r.final_linf_u) << ',' << fmt_g17(r.max_blowup_witness) << '\n';
    return res;
}

namespace {

double l2_error(const Field& a, const Field& b, const Grid2D& g) {
    double s = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return std::sqrt(s * g.cell_area());
}

double fit_slope(const std::vector<double>& h, const std::vector<double>& e) {
    // least-squares slope of log e against log h
    const std::size_t n = h.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::log(h[i]);
        const double y = std::log(std::max(e[i], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

MMSResult run_mms(const MMSConfig& mms, const ModelParams& params,
                  const StepperConfig& stepper, const StencilConfig& stencil) {
    if (mms.grid_levels.size() < 3)
        throw ConfigError("run_mms: need at least 3 grid levels for a slope fit");
    if (mms.manufactured_fields != "trig")
        throw ConfigError("run_mms: unknown manufactured solution `" + mms.manufactured_fields + "`");

    MMSResult res;
    res.slope_min = mms.slope_min;

    for (auto [nx, ny] : mms.grid_levels) {
        const Grid2D g(nx, ny, 1.0 / nx, 1.0 / ny);
        const double h = std::min(g.hx, g.hy);
        double dt = mms.dt_coeff;
        if (mms.dt_law == DtLaw::ProportionalToH) dt = mms.dt_coeff * h;
        if (mms.dt_law == DtLaw::ProportionalToH2) dt = mms.dt_coeff * h * h;
        const long n_steps = std::max(1L, std::lround(mms.t_end / dt));
        dt = mms.t_end / static_cast<double>(n_steps);

        const ManufacturedSolution sol(params, g);
        State s = sol.exact_state(0.0);
        for (long i = 0; i < n_steps; ++i) {
            StepOutcome out = step(s, params, g, stepper, stencil, dt, &sol);
            if (out.status != StepStatus::Ok)
                throw Error("run_mms: step failed (" + std::string(to_string(out.status)) +
                            ") at level " + std::to_string(nx));
            s = std::move(out.state);
        }

        const State exact = sol.exact_state(s.t);
        MMSLevel lvl;
        lvl.nx = nx;
        lvl.ny = ny;
        lvl.h = h;
        lvl.dt = dt;
        lvl.err_u = l2_error(s.u, exact.u, g);
        lvl.err_v = l2_error(s.v, exact.v, g);
        lvl.err_w = l2_error(s.w, exact.w, g);
        res.levels.push_back(lvl);
    }

    std::vector<double> hs, eu, ev, ew;
    for (const auto& l : res.levels) {
        hs.push_back(l.h);
        eu.push_back(l.err_u);
        ev.push_back(l.err_v);
        ew.push_back(l.err_w);
    }
    res.slope_u = fit_slope(hs, eu);
    res.slope_v = fit_slope(hs, ev);
    res.slope_w = fit_slope(hs, ew);
    res.pass = res.slope_u >= res.slope_min && res.slope_v >= res.slope_min &&
               res.slope_w >= res.slope_min;

    std::ostringstream t;
    t << "level      h          dt         err_u        err_v        err_w\n";
    for (const auto& l : res.levels) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%4dx%-4d  %-9.4g  %-9.4g  %-11.5g  %-11.5g  %-11.5g\n",
                      l.nx, l.ny, l.h, l.dt, l.err_u, l.err_v, l.err_w);
        t << buf;
    }
    {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "slopes: u=%.3f v=%.3f w=%.3f (min %.2f) -> %s\n",
                      res.slope_u, res.slope_v, res.slope_w, res.slope_min,
                      res.pass ? "pass" : "FAIL");
        t << buf;
    }
    res.table = t.str();
    return res;
}

} // namespace haptosim
