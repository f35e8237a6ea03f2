#include <benchmark/benchmark.h>

#include <cmath>

#include "haptosim/diagnostics.hpp"
#include "haptosim/linsolve.hpp"
#include "haptosim/spatial_ops.hpp"
#include "haptosim/stepper.hpp"

using namespace haptosim;

namespace {

State bump_state(const Grid2D& g) {
    State s(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double dx = g.xc(i) - 0.5, dy = g.yc(j) - 0.5;
            const double b = std::exp(-(dx * dx + dy * dy) / (2 * 0.15 * 0.15));
            s.u(i, j) = 0.3 + 0.5 * b;
            s.v(i, j) = 0.2 + 0.4 * b;
            s.w(i, j) = 0.8 * b;
        }
    return s;
}

void BM_Laplacian(benchmark::State& state) {
    const Grid2D g = Grid2D::unit_square(static_cast<int>(state.range(0)));
    const State s = bump_state(g);
    Field out(g);
    for (auto _ : state) {
        laplacian_neumann(s.u, g, out);
        benchmark::DoNotOptimize(out.data.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}
BENCHMARK(BM_Laplacian)->Arg(64)->Arg(128)->Arg(256);

void BM_TaxisDivUpwind(benchmark::State& state) {
    const Grid2D g = Grid2D::unit_square(static_cast<int>(state.range(0)));
    const State s = bump_state(g);
    StencilConfig cfg{FaceAveraging::Upwind};
    Field out(g);
    for (auto _ : state) {
        taxis_div(s.u, s.v, 1.0, g, cfg, out);
        benchmark::DoNotOptimize(out.data.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}
BENCHMARK(BM_TaxisDivUpwind)->Arg(128)->Arg(256);

void BM_GradSq(benchmark::State& state) {
    const Grid2D g = Grid2D::unit_square(static_cast<int>(state.range(0)));
    const State s = bump_state(g);
    Field out(g);
    for (auto _ : state) {
        grad_sq_neumann(s.w, g, out);
        benchmark::DoNotOptimize(out.data.data());
    }
}
BENCHMARK(BM_GradSq)->Arg(128);

void BM_HeatSolveCG(benchmark::State& state) {
    const Grid2D g = Grid2D::unit_square(static_cast<int>(state.range(0)));
    const State s = bump_state(g);
    const double dt = 1e-3;
    CgWorkspace ws(g);
    Field lap(g);
    auto apply = [&](const Field& x, Field& out) {
        laplacian_neumann(x, g, lap);
        for (std::size_t k = 0; k < g.size(); ++k) out[k] = x[k] - dt * lap[k];
    };
    for (auto _ : state) {
        Field x(g);  // cold start so every solve does full work
        const int iters = conjugate_gradient(apply, s.u, x, 1e-12, 10000, ws);
        benchmark::DoNotOptimize(iters);
    }
}
BENCHMARK(BM_HeatSolveCG)->Arg(128)->Arg(256);

void BM_StepPrimitive(benchmark::State& state) {
    const Grid2D g = Grid2D::unit_square(static_cast<int>(state.range(0)));
    ModelParams p;
    StepperConfig cfg;
    cfg.cg_rel_tol = 1e-12;
    StencilConfig stencil;
    const State s = bump_state(g);
    const double dt = 1e-3;
    for (auto _ : state) {
        StepOutcome out = step(s, p, g, cfg, stencil, dt);
        benchmark::DoNotOptimize(out.state.u.data.data());
    }
}
BENCHMARK(BM_StepPrimitive)->Arg(64)->Arg(128);

void BM_StepTransformed(benchmark::State& state) {
    const Grid2D g = Grid2D::unit_square(static_cast<int>(state.range(0)));
    ModelParams p;
    StepperConfig cfg;
    cfg.cg_rel_tol = 1e-12;
    cfg.solve_transformed = true;
    StencilConfig stencil;
    const State s = bump_state(g);
    const double dt = 1e-3;
    for (auto _ : state) {
        StepOutcome out = step(s, p, g, cfg, stencil, dt);
        benchmark::DoNotOptimize(out.state.u.data.data());
    }
}
BENCHMARK(BM_StepTransformed)->Arg(64)->Arg(128);

void BM_Diagnostics(benchmark::State& state) {
    const Grid2D g = Grid2D::unit_square(static_cast<int>(state.range(0)));
    ModelParams p;
    const State s = bump_state(g);
    for (auto _ : state) {
        DiagnosticsRecord d = compute_diagnostics(s, p, g, {2.0, 3.0});
        benchmark::DoNotOptimize(d.mass_u);
    }
}
BENCHMARK(BM_Diagnostics)->Arg(128);

} // namespace

BENCHMARK_MAIN();
