// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. The 128^2 invasion run is shared: its samples carry the w-bound
// check, its steps the mass-identity check, and its full horizon the
// boundedness check. The upwind MMS table also calibrates the dual-path
// tolerance.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "haptosim/diagnostics.hpp"
#include "haptosim/harness.hpp"
#include "haptosim/lemma.hpp"
#include "haptosim/spatial_ops.hpp"
#include "haptosim/stepper.hpp"

using namespace haptosim;

namespace {

int g_failures = 0;

class Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void report(int id, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
    std::printf("[%s] C%-2d %s: %s (%.1fs)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof(buf), f, args);
    va_end(args);
    return buf;
}

RunConfig invasion_config() {
    RunConfig cfg;
    cfg.grid = Grid2D::unit_square(128);
    cfg.params.chi = 1.0;
    cfg.params.xi = 1.0;
    cfg.params.mu = 1.0;
    cfg.params.eta = 1.0;
    cfg.initial.kind = InitialKind::GaussianBump;
    cfg.initial.center_x = 0.5;
    cfg.initial.center_y = 0.5;
    cfg.initial.width = 0.15;
    cfg.initial.base_u = 0.3;
    cfg.initial.amp_u = 0.5;
    cfg.initial.base_v = 0.2;
    cfg.initial.amp_v = 0.4;
    cfg.initial.base_w = 0.0;
    cfg.initial.amp_w = 0.8;  // |w0|oo = 0.8
    cfg.stepper.cg_rel_tol = 1e-12;
    cfg.stepper.dt_init = 0.05;
    cfg.stepper.w_update = WUpdate::ExactLogistic;
    cfg.stencil.face_averaging = FaceAveraging::Upwind;
    return cfg;
}

MMSResult mms_study(DtLaw law, double coeff, FaceAveraging mode, double slope_min) {
    MMSConfig mms;
    mms.grid_levels = {{32, 32}, {64, 64}, {128, 128}};
    mms.dt_law = law;
    mms.dt_coeff = coeff;
    mms.t_end = 0.5;
    mms.slope_min = slope_min;
    ModelParams params;  // chi = xi = mu = eta = tau = 1
    StepperConfig st;
    st.cg_rel_tol = 1e-12;
    StencilConfig stencil{mode};
    return run_mms(mms, params, st, stencil);
}

Field random_field(const Grid2D& g, std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Field f(g);
    for (auto& x : f.data) x = dist(rng);
    return f;
}

double dot(const Field& a, const Field& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

// ---------------------------------------------------------------------------

MMSResult criterion_1() {
    Timer t;
    const MMSResult r = mms_study(DtLaw::ProportionalToH2, 4.0, FaceAveraging::Central, 1.9);
    const double sec = t.seconds();
    const bool pass = r.slope_u >= 1.9 && r.slope_v >= 1.9 && r.slope_w >= 1.9 && sec < 60.0;
    report(1, "MMS spatial convergence (central, dt~h^2)", pass,
           fmt("slopes u=%.2f v=%.2f w=%.2f (need >=1.9), runtime %.1fs (<60s)", r.slope_u,
               r.slope_v, r.slope_w, sec),
           sec);
    return r;
}

MMSResult criterion_2() {
    Timer t;
    const MMSResult r = mms_study(DtLaw::ProportionalToH, 0.2, FaceAveraging::Upwind, 0.9);
    const bool pass = r.slope_u >= 0.9 && r.slope_v >= 0.9 && r.slope_w >= 0.9;
    report(2, "MMS temporal consistency (upwind, dt~h)", pass,
           fmt("slopes u=%.2f v=%.2f w=%.2f (need >=0.9)", r.slope_u, r.slope_v, r.slope_w),
           t.seconds());
    return r;
}

struct InvasionRun {
    RunResult result;
    double norm_u0 = 0.0;
    double min_w = 1e300;
    double max_w = -1e300;
    double seconds = 0.0;
};

InvasionRun run_invasion() {
    const RunConfig cfg = invasion_config();
    const State initial = build_initial_state(cfg.initial, cfg.grid, cfg.seed);

    InvasionRun inv;
    inv.norm_u0 = max_abs(initial.u);

    RunHooks hooks;
    hooks.on_sample = [&](const State& s, const DiagnosticsRecord&) {
        inv.min_w = std::min(inv.min_w, min_value(s.w));
        inv.max_w = std::max(inv.max_w, max_value(s.w));
    };

    Timer t;
    inv.result = run(initial, cfg.params, cfg.grid, cfg.stepper, cfg.stencil,
                     /*t_end=*/50.0, /*sample_every=*/0.5, {2.0}, nullptr, &hooks);
    inv.seconds = t.seconds();
    return inv;
}

void criterion_3(const InvasionRun& inv) {
    const bool pass = inv.result.status == StepStatus::Ok && inv.min_w >= -1e-12 &&
                      inv.max_w <= 1.0 + 1e-8;
    report(3, "w-bound invariant (0 <= w <= rho = 1 at every sample)", pass,
           fmt("min w = %.2e (>= -1e-12), max w = %.9f (<= 1+1e-8)", inv.min_w, inv.max_w),
           inv.seconds);
}

void criterion_4() {
    Timer t;
    const Grid2D g = Grid2D::unit_square(64);
    ModelParams p;
    StepperConfig cfg;
    StencilConfig stencil;
    const double dt = 1e-2;
    const double triples[3][3] = {{0.0, 0.0, 0.0}, {0.0, 0.0, 1.0}, {1.0, 1.0, 0.0}};
    double worst = 0.0;
    bool pass = true;
    for (const auto& tr : triples) {
        State s(g);
        for (std::size_t k = 0; k < g.size(); ++k) {
            s.u[k] = tr[0];
            s.v[k] = tr[1];
            s.w[k] = tr[2];
        }
        State cur = s;
        for (int n = 0; n < 1000 && pass; ++n) {
            StepOutcome out = step(cur, p, g, cfg, stencil, dt);
            if (out.status != StepStatus::Ok) pass = false;
            cur = std::move(out.state);
        }
        double drift = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            drift = std::max(drift, std::abs(cur.u[k] - s.u[k]));
            drift = std::max(drift, std::abs(cur.v[k] - s.v[k]));
            drift = std::max(drift, std::abs(cur.w[k] - s.w[k]));
        }
        worst = std::max(worst, drift);
    }
    pass = pass && worst <= 1e-6;
    report(4, "steady-state fixed points (1000 steps, dt=1e-2)", pass,
           fmt("max drift = %.2e (<= 1e-6)", worst), t.seconds());
}

void criterion_5(const InvasionRun& inv) {
    const bool pass = inv.result.status == StepStatus::Ok &&
                      inv.result.max_mass_residual_ratio <= 1e-8;
    report(5, "discrete mass identity per accepted step", pass,
           fmt("max |(d int u)/dt - mu int u(1-u-w)| / ((1+|u|oo) area) = %.2e (<= 1e-8), %ld steps",
               inv.result.max_mass_residual_ratio, inv.result.steps_taken),
           0.0);
}

void criterion_6(const InvasionRun& inv) {
    double max_u = 0.0;
    for (const auto& d : inv.result.records) max_u = std::max(max_u, d.linf_u);
    const double cap = 10.0 * (1.0 + inv.norm_u0);
    const bool pass = inv.result.status == StepStatus::Ok && inv.result.total_clamped == 0 &&
                      max_u <= cap && inv.seconds < 300.0;
    report(6, "boundedness to t=50 (status ok, no clamps, |u|oo capped)", pass,
           fmt("status %s, clamped %ld, max |u|oo = %.3f (<= %.1f), runtime %.1fs (<300s)",
               to_string(inv.result.status), inv.result.total_clamped, max_u, cap, inv.seconds),
           inv.seconds);
}

void criterion_7() {
    Timer t;
    bool pass = true;
    std::string detail;

    {
        const Grid2D g = Grid2D::unit_square(32);
        ModelParams p;
        State s(g);
        for (std::size_t k = 0; k < g.size(); ++k) {
            s.u[k] = 1.0;
            s.v[k] = 1.0;
            s.w[k] = 0.0;
        }
        const double r = energy_identity_residual(s, s, 0.01, 2.0, p, g);
        pass = pass && r <= 1e-10;
        detail += fmt("steady residual = %.2e (<= 1e-10)", r);
    }
    {
        const Grid2D g = Grid2D::unit_square(48);
        ModelParams p;
        StepperConfig cfg;
        cfg.cg_rel_tol = 1e-13;
        StencilConfig stencil{FaceAveraging::Central};
        State s(g);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const double c = std::cos(M_PI * g.xc(i)) * std::cos(M_PI * g.yc(j));
                s.u(i, j) = 0.7 + 0.3 * c;
                s.v(i, j) = 0.6 + 0.2 * c;
                s.w(i, j) = 0.25 * (1.0 + c);
            }
        auto residual = [&](double dt) {
            const StepOutcome out = step(s, p, g, cfg, stencil, dt);
            return energy_identity_residual(s, out.state, dt, 2.0, p, g);
        };
        const double ratio = residual(0.01) / residual(0.005);
        pass = pass && ratio >= 1.7 && ratio <= 2.3;
        detail += fmt(", dt-halving ratio = %.2f (in [1.7, 2.3])", ratio);
    }
    report(7, "energy identity audit (p=2)", pass, detail, t.seconds());
}

void criterion_8() {
    Timer t;
    bool pass = true;
    std::string detail;

    LemmaConstants pinned;
    pinned.delta = 2.0;
    pinned.chi = 1.0;
    pinned.c7 = 1.0;
    pinned.c_delta_plus_1 = 1.0;
    pinned.xi = 0.0;
    const HMinResult hm = h_min(pinned);
    pass = pass && std::abs(hm.y_star - 2.0 / 3.0) <= 1e-10 && std::abs(hm.h_min - 1.0) <= 1e-10;
    detail += fmt("y* = %.12f, h_min = %.12f", hm.y_star, hm.h_min);

    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        LemmaConstants c;
        c.delta = 1.001 + 3.0 * u01(rng);
        c.chi = std::pow(10.0, -1.0 + 2.0 * u01(rng));
        c.c7 = std::pow(10.0, -1.0 + 2.0 * u01(rng));
        c.c_delta_plus_1 = std::pow(10.0, -1.0 + 2.0 * u01(rng));
        c.xi = 5.0 * u01(rng);
        const HMinResult r = h_min(c);
        worst = std::max(worst, std::abs(r.h_min - r.h_min_oracle) / (1.0 + std::abs(r.h_min)));
    }
    pass = pass && worst <= 1e-8;
    detail += fmt(", worst oracle gap = %.2e (<= 1e-8)", worst);

    bool threw = false;
    try {
        LemmaConstants c;
        c.delta = 1.0;
        h_min(c);
    } catch (const DegenerateDelta&) {
        threw = true;
    }
    pass = pass && threw;
    detail += threw ? ", delta=1 raises DegenerateDelta" : ", delta=1 DID NOT raise";
    report(8, "minimization lemma toolkit", pass, detail, t.seconds());
}

void criterion_9() {
    Timer t;
    std::mt19937_64 rng(4096);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    bool pass = true;
    double worst_g1 = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        LemmaConstants c;
        c.mu = 0.01 + 5.0 * u01(rng);
        c.chi = 0.1 + 5.0 * u01(rng);
        c.xi = 5.0 * u01(rng);
        c.eta = 5.0 * u01(rng);
        c.rho = 1.0 + 2.0 * u01(rng);
        c.c7 = 0.1 + 3.0 * u01(rng);
        c.c_delta_plus_1 = 0.1 + 3.0 * u01(rng);
        const auto r = feasible_p0(c);
        if (!r || !(r->certificate > 0.0) || !(feasibility_margin(c, r->p0) > 0.0)) pass = false;
        worst_g1 = std::max(worst_g1, std::abs(feasibility_margin(c, 1.0) - c.mu));
    }
    pass = pass && worst_g1 <= 1e-12;
    report(9, "feasible exponent certificate (100 draws)", pass,
           fmt("all g(p0) > 0, worst |g(1) - mu| = %.2e (<= 1e-12)", worst_g1), t.seconds());
}

void criterion_10(const MMSResult& upwind_mms) {
    Timer t;
    RunConfig cfg = invasion_config();
    const State initial = build_initial_state(cfg.initial, cfg.grid, cfg.seed);

    StepperConfig prim = cfg.stepper;
    StepperConfig trans = cfg.stepper;
    trans.solve_transformed = true;

    const RunResult a = run(initial, cfg.params, cfg.grid, prim, cfg.stencil, 5.0, 1.0, {2.0});
    const RunResult b = run(initial, cfg.params, cfg.grid, trans, cfg.stencil, 5.0, 1.0, {2.0});

    double gap = 0.0;
    for (std::size_t k = 0; k < cfg.grid.size(); ++k)
        gap = std::max(gap, std::abs(a.final_state.u[k] - b.final_state.u[k]));

    const double mms_err_128 = upwind_mms.levels.back().err_u;
    const double tol = 10.0 * mms_err_128;
    const bool pass = a.status == StepStatus::Ok && b.status == StepStatus::Ok && gap <= tol;
    report(10, "primitive vs transformed agreement at t=5, 128^2", pass,
           fmt("|u_prim - u_trans|oo = %.3e (<= 10 x MMS err %.3e = %.3e)", gap, mms_err_128, tol),
           t.seconds());
}

void criterion_11() {
    Timer t;
    const Grid2D g(33, 29, 1.0 / 33, 1.0 / 29);
    std::mt19937_64 rng(31337);
    StencilConfig upwind{FaceAveraging::Upwind};
    StencilConfig central{FaceAveraging::Central};
    bool pass = true;
    double worst_cons = 0.0, worst_sym = 0.0, worst_nsd = 0.0;

    for (int trial = 0; trial < 50; ++trial) {
        const Field f = random_field(g, rng, -1.0, 1.0);
        const Field h = random_field(g, rng, -1.0, 1.0);
        const Field carrier = random_field(g, rng, 0.0, 2.0);

        const Field lap = laplacian_neumann(f, g);
        const Field du = taxis_div(carrier, f, 1.5, g, upwind);
        const Field dc = taxis_div(carrier, f, 1.5, g, central);
        const double c1 = std::abs(cell_sum(lap) * g.cell_area()) / (max_abs(lap) * g.area());
        const double c2 = std::abs(cell_sum(du) * g.cell_area()) / (max_abs(du) * g.area() + 1e-300);
        const double c3 = std::abs(cell_sum(dc) * g.cell_area()) / (max_abs(dc) * g.area() + 1e-300);
        worst_cons = std::max({worst_cons, c1, c2, c3});

        const Field lh = laplacian_neumann(h, g);
        const double sa = dot(lap, h), sb = dot(f, lh);
        worst_sym =
            std::max(worst_sym, std::abs(sa - sb) / std::max({std::abs(sa), std::abs(sb), 1.0}));

        const double q = dot(lap, f) / std::max(dot(f, f), 1e-300);
        worst_nsd = std::max(worst_nsd, q);
    }
    pass = worst_cons <= 1e-12 && worst_sym <= 1e-12 && worst_nsd <= 1e-12;
    report(11, "spatial operator property suite (50 fields each)", pass,
           fmt("conservation %.1e, symmetry %.1e, semidefiniteness %.1e (all <= 1e-12)",
               worst_cons, worst_sym, worst_nsd),
           t.seconds());
}

} // namespace

int main() {
    std::printf("haptosim acceptance suite\n");
    Timer total;

    criterion_1();
    const MMSResult upwind_mms = criterion_2();
    const InvasionRun inv = run_invasion();
    criterion_3(inv);
    criterion_4();
    criterion_5(inv);
    criterion_6(inv);
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10(upwind_mms);
    criterion_11();

    std::printf("%d criterion(s) failed, total %.1fs\n", g_failures, total.seconds());
    return g_failures == 0 ? 0 : 1;
}
