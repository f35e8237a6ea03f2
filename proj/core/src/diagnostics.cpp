#include "haptosim/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "haptosim/spatial_ops.hpp"

namespace haptosim {

DiagnosticsRecord compute_diagnostics(const State& s, const ModelParams& p, const Grid2D& g,
                                      const std::vector<double>& exponents) {
    require_on_grid(s.u, g, "compute_diagnostics(u)");
    require_on_grid(s.v, g, "compute_diagnostics(v)");
    require_on_grid(s.w, g, "compute_diagnostics(w)");

    DiagnosticsRecord d;
    d.t = s.t;

    std::vector<double> ps(exponents);
    std::sort(ps.begin(), ps.end());

    if (!all_finite(s.u) || !all_finite(s.v) || !all_finite(s.w)) {
        const double inf = std::numeric_limits<double>::infinity();
        d.finite = false;
        d.mass_u = d.l2_v_sq = d.grad_v_l2_sq = inf;
        d.linf_u = d.linf_a = d.linf_v = d.grad_w_l5 = inf;
        for (double pe : ps) {
            d.lp_a.emplace_back(pe, inf);
            d.energy_p.emplace_back(pe, inf);
        }
        return d;
    }

    const double cell = g.cell_area();
    const std::size_t n = g.size();

    Field a(g);
    for (std::size_t k = 0; k < n; ++k) a[k] = s.u[k] * std::exp(-p.xi * s.w[k]);

    double mass = 0.0, v2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        mass += s.u[k];
        v2 += s.v[k] * s.v[k];
    }
    d.mass_u = mass * cell;
    d.l2_v_sq = v2 * cell;
    d.linf_u = max_abs(s.u);
    d.linf_v = max_abs(s.v);
    d.linf_a = max_abs(a);

    // face-difference quadrature: cell sum equals -<Lap_h v, v> exactly
    d.grad_v_l2_sq = cell_sum(grad_sq_neumann(s.v, g)) * cell;

    Field gx(g), gy(g);
    gradient_neumann(s.w, g, gx, gy);
    double g5 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double m2 = gx[k] * gx[k] + gy[k] * gy[k];
        g5 += m2 * m2 * std::sqrt(m2);
    }
    d.grad_w_l5 = std::pow(g5 * cell, 0.2);

    for (double pe : ps) {
        double lp = 0.0, ep = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double apk = std::pow(std::abs(a[k]), pe);
            lp += apk;
            ep += std::exp(p.xi * s.w[k]) * apk;
        }
        d.lp_a.emplace_back(pe, std::pow(lp * cell, 1.0 / pe));
        d.energy_p.emplace_back(pe, ep * cell);
    }
    return d;
}

namespace {

double energy_functional(const State& s, double p_exp, const ModelParams& p, const Grid2D& g) {
    double e = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double a = s.u[k] * std::exp(-p.xi * s.w[k]);
        e += std::exp(p.xi * s.w[k]) * std::pow(std::abs(a), p_exp);
    }
    return e * g.cell_area();
}

} // namespace

double energy_identity_residual(const State& s, const State& s_next, double dt,
                                double p_exp, const ModelParams& params, const Grid2D& g,
                                int* floored_cells) {
    require_on_grid(s.u, g, "energy_identity_residual");
    if (!(p_exp > 1.0)) throw ConfigError("energy_identity_residual: p must be > 1");
    if (!(dt > 0.0)) throw ConfigError("energy_identity_residual: dt must be > 0");

    const double pe = p_exp;
    const double chi = params.chi, xi = params.xi, mu = params.mu, eta = params.eta;
    const double cell = g.cell_area();
    const std::size_t n = g.size();
    const double a_floor = 1e-14;

    Field a(g);
    for (std::size_t k = 0; k < n; ++k) a[k] = s.u[k] * std::exp(-xi * s.w[k]);

    Field ax(g), ay(g), vx(g), vy(g);
    gradient_neumann(a, g, ax, ay);
    gradient_neumann(s.v, g, vx, vy);

    int floored = 0;
    double j1 = 0.0, j2 = 0.0, j3 = 0.0, j4 = 0.0, j5 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double w = s.w[k];
        const double v = s.v[k];
        const double ak = a[k];
        const double ew = std::exp(xi * w);
        const double ap = std::pow(std::abs(ak), pe);

        // a^{p-2}, a^{p-1} are singular at a = 0 for p < 2
        if (pe < 2.0 && ak < a_floor) {
            ++floored;
        } else {
            const double ga2 = ax[k] * ax[k] + ay[k] * ay[k];
            const double gav = ax[k] * vx[k] + ay[k] * vy[k];
            const double ap2 = (pe == 2.0) ? 1.0 : std::pow(std::max(ak, 0.0), pe - 2.0);
            j1 -= pe * (pe - 1.0) * ew * ap2 * ga2;
            j2 += pe * (pe - 1.0) * chi * ew * ap2 * ak * gav;
        }
        j3 += (pe - 1.0) * xi * ew * ap * v * w;
        j4 += ew * ap * ((pe + 1.0) + (pe - 1.0) * xi * eta * w * (w - 1.0) + pe * mu * (1.0 - w));
        j5 += ew * ew * ap * ak * ((pe - 1.0) * xi * eta * w - pe * mu);
    }
    if (floored_cells) *floored_cells = floored;

    const double e0 = energy_functional(s, pe, params, g);
    const double e1 = energy_functional(s_next, pe, params, g);
    const double rhs = (j1 + j2 + j3 + j4 + j5) * cell;
    return std::abs((e1 - e0) / dt + (pe + 1.0) * e0 - rhs);
}

} // namespace haptosim
