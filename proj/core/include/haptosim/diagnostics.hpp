#pragma once

#include <utility>
#include <vector>

#include "haptosim/model.hpp"

namespace haptosim {

/// One time-stamped row of every monitored norm and functional.
struct DiagnosticsRecord {
    double t = 0.0;
    double mass_u = 0.0;        ///< integral of u
    double l2_v_sq = 0.0;       ///< integral of v^2
    double grad_v_l2_sq = 0.0;  ///< integral of |grad v|^2 (face-difference quadrature)
    double linf_u = 0.0;
    double linf_a = 0.0;
    double linf_v = 0.0;
    double grad_w_l5 = 0.0;     ///< L^5 norm of |grad w|
    /// (p, ||a||_{L^p}) in ascending p.
    std::vector<std::pair<double, double>> lp_a;
    /// (p, E_p) with E_p = integral of e^{xi w} a^p, ascending p.
    std::vector<std::pair<double, double>> energy_p;
    long clamped_cells = 0;
    bool finite = true;         ///< false: fields were non-finite, norms are +inf sentinels
};

/// Midpoint-rule norms and functionals of a state. grad_v_l2_sq is assembled
/// from squared face differences so that it equals -<Lap_h v, v> * cell_area
/// exactly; grad_w_l5 uses the cell-centered gradient. Non-finite input
/// yields a record flagged finite=false with +inf sentinels.
DiagnosticsRecord compute_diagnostics(const State& s, const ModelParams& p, const Grid2D& g,
                                      const std::vector<double>& exponents);

/// Residual of the discrete energy balance for E_p = integral e^{xi w} a^p:
///   | (E_p(s_next) - E_p(s))/dt + (p+1) E_p(s) - (J1+J2+J3+J4+J5)(s) |
/// with
///   J1 = -p(p-1) int e^{xi w} a^{p-2} |grad a|^2
///   J2 =  p(p-1) chi int e^{xi w} a^{p-1} grad a . grad v
///   J3 =  (p-1) xi int e^{xi w} a^p v w
///   J4 =  int e^{xi w} a^p {(p+1) + (p-1) xi eta w(w-1) + p mu (1-w)}
///   J5 =  int e^{2 xi w} a^{p+1} [(p-1) xi eta w - p mu].
/// For p_exp < 2 cells with a < 1e-14 are excluded from J1/J2; their count
/// is written to *floored_cells when given.
double energy_identity_residual(const State& s, const State& s_next, double dt,
                                double p_exp, const ModelParams& params, const Grid2D& g,
                                int* floored_cells = nullptr);

} // namespace haptosim
