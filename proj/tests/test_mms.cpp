#include <doctest.h>

#include <cmath>
#include <random>

#include "haptosim/harness.hpp"
#include "haptosim/mms.hpp"

using namespace haptosim;

namespace {

// Finite-difference evaluation of the continuous operators at a point, used
// as the independent oracle for the symbolic forcing.
struct FD {
    double h = 1e-5;

    template <class F>
    double dx(F f, double x, double y, double t) const {
        return (f(x + h, y, t) - f(x - h, y, t)) / (2 * h);
    }
    template <class F>
    double dy(F f, double x, double y, double t) const {
        return (f(x, y + h, t) - f(x, y - h, t)) / (2 * h);
    }
    template <class F>
    double dt(F f, double x, double y, double t) const {
        return (f(x, y, t + h) - f(x, y, t - h)) / (2 * h);
    }
    template <class F>
    double lap(F f, double x, double y, double t) const {
        return (f(x + h, y, t) + f(x - h, y, t) + f(x, y + h, t) + f(x, y - h, t) -
                4 * f(x, y, t)) /
               (h * h);
    }
};

} // namespace

TEST_CASE("manufactured forcing matches finite differences of the operators") {
    ModelParams p;
    p.chi = 1.3;
    p.xi = 0.8;
    p.mu = 1.7;
    p.eta = 0.6;
    p.tau = 2.0;
    const Grid2D g = Grid2D::unit_square(8);
    const ManufacturedSolution sol(p, g);

    auto U = [](double x, double y, double t) { return ManufacturedSolution::exact_u(x, y, t); };
    auto V = [](double x, double y, double t) { return ManufacturedSolution::exact_v(x, y, t); };
    auto W = [](double x, double y, double t) { return ManufacturedSolution::exact_w(x, y, t); };

    FD fd;
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> in(0.15, 0.85);
    std::uniform_real_distribution<double> tt(0.0, 1.0);

    for (int trial = 0; trial < 25; ++trial) {
        const double x = in(rng), y = in(rng), t = tt(rng);

        // u equation: S_u = u_t - lap u + chi div(u grad v) + xi div(u grad w)
        //             - mu u(1-u-w)
        auto ugradv_x = [&](double xx, double yy, double ttt) {
            return U(xx, yy, ttt) * fd.dx(V, xx, yy, ttt);
        };
        auto ugradv_y = [&](double xx, double yy, double ttt) {
            return U(xx, yy, ttt) * fd.dy(V, xx, yy, ttt);
        };
        auto ugradw_x = [&](double xx, double yy, double ttt) {
            return U(xx, yy, ttt) * fd.dx(W, xx, yy, ttt);
        };
        auto ugradw_y = [&](double xx, double yy, double ttt) {
            return U(xx, yy, ttt) * fd.dy(W, xx, yy, ttt);
        };
        const double div_uv = fd.dx(ugradv_x, x, y, t) + fd.dy(ugradv_y, x, y, t);
        const double div_uw = fd.dx(ugradw_x, x, y, t) + fd.dy(ugradw_y, x, y, t);
        const double su = fd.dt(U, x, y, t) - fd.lap(U, x, y, t) + p.chi * div_uv +
                          p.xi * div_uw -
                          p.mu * U(x, y, t) * (1.0 - U(x, y, t) - W(x, y, t));
        CHECK(sol.source_u(x, y, t) == doctest::Approx(su).epsilon(5e-5));

        // v equation: S_v = v_t - (lap v - v + u)/tau
        const double sv = fd.dt(V, x, y, t) -
                          (fd.lap(V, x, y, t) - V(x, y, t) + U(x, y, t)) / p.tau;
        CHECK(sol.source_v(x, y, t) == doctest::Approx(sv).epsilon(5e-5));

        // w equation: S_w = w_t + v w - eta w (1-u-w)
        const double sw = fd.dt(W, x, y, t) + V(x, y, t) * W(x, y, t) -
                          p.eta * W(x, y, t) * (1.0 - U(x, y, t) - W(x, y, t));
        CHECK(sol.source_w(x, y, t) == doctest::Approx(sw).epsilon(5e-5));
    }
}

TEST_CASE("manufactured fields are Neumann-compatible and positive") {
    ModelParams p;
    const Grid2D g = Grid2D::unit_square(16);
    const ManufacturedSolution sol(p, g);
    const State s = sol.exact_state(0.3);
    CHECK(min_value(s.u) > 0.5);
    CHECK(min_value(s.v) > 0.5);
    CHECK(min_value(s.w) > 0.1);

    // normal derivative vanishes on the boundary analytically
    FD fd;
    auto U = [](double x, double y, double t) { return ManufacturedSolution::exact_u(x, y, t); };
    for (double y : {0.21, 0.77}) {
        CHECK(std::abs(fd.dx(U, 0.0, y, 0.3)) <= 1e-9);
        CHECK(std::abs(fd.dx(U, 1.0, y, 0.3)) <= 1e-9);
    }
}

TEST_CASE("mms convergence smoke: central + dt~h^2 is second order") {
    MMSConfig mms;
    mms.grid_levels = {{8, 8}, {16, 16}, {32, 32}};
    mms.dt_law = DtLaw::ProportionalToH2;
    mms.dt_coeff = 4.0;
    mms.t_end = 0.25;
    mms.slope_min = 1.8;
    ModelParams p;
    StepperConfig st;
    st.cg_rel_tol = 1e-12;
    StencilConfig stencil{FaceAveraging::Central};

    const MMSResult r = run_mms(mms, p, st, stencil);
    REQUIRE(r.levels.size() == 3);
    CHECK(r.slope_u >= 1.8);
    CHECK(r.slope_v >= 1.8);
    CHECK(r.slope_w >= 1.8);
    CHECK(r.pass);
    // errors must actually shrink
    CHECK(r.levels[2].err_u < r.levels[0].err_u);
}

TEST_CASE("mms convergence smoke: upwind + dt~h is first order") {
    MMSConfig mms;
    mms.grid_levels = {{8, 8}, {16, 16}, {32, 32}};
    mms.dt_law = DtLaw::ProportionalToH;
    mms.dt_coeff = 0.2;
    mms.t_end = 0.25;
    mms.slope_min = 0.9;
    ModelParams p;
    StepperConfig st;
    StencilConfig stencil{FaceAveraging::Upwind};

    const MMSResult r = run_mms(mms, p, st, stencil);
    CHECK(r.slope_u >= 0.9);
    CHECK(r.slope_v >= 0.9);
    CHECK(r.slope_w >= 0.9);
    CHECK(r.pass);
}
