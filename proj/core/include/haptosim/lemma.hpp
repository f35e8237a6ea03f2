#pragma once

#include <functional>
#include <optional>

#include "haptosim/grid.hpp"

namespace haptosim {

/// Constants entering the minimization lemma and the small-exponent
/// feasibility condition. c7 and c_delta_plus_1 originate in maximal Sobolev
/// regularity and Gagliardo-Nirenberg bounds and are user-supplied.
struct LemmaConstants {
    double delta = 2.0;           ///< the lemma's exponent, >= 1
    double chi = 1.0;
    double xi = 0.0;
    double c7 = 1.0;
    double c_delta_plus_1 = 1.0;  ///< maximal-regularity constant C_{delta+1}
    double eta = 0.0;
    double mu = 1.0;
    double rho = 1.0;             ///< invariant upper bound on w, >= 1

    void validate() const;
};

/// Minimizer of H(y) = y + A1 y^{-delta} over y > 0.
struct HMinResult {
    double y_star = 0.0;              ///< (A1 delta)^{1/(delta+1)}
    double h_min = 0.0;               ///< H(y_star)
    double h_min_oracle = 0.0;        ///< golden-section search value
    double paper_formula_value = 0.0; ///< delta(delta-1)chi^2/2 (C7 C_{delta+1})^{1/(delta+1)}
};

/// rho = max{1, max w0}. Negative entries raise InvalidInitialData.
double rho_of(const Field& w0);

/// A1 = 1/(delta+1) ((delta+1)/delta)^{-delta} [delta(delta-1)chi^2/2]^{delta+1}
///      C7 C_{delta+1} e^{xi(delta-1)}.
double a1_coefficient(const LemmaConstants& c);

/// Exact minimum of H(y) = y + A1 y^{-delta}, cross-checked by golden-section
/// search. h_min equals paper_formula_value times e^{xi(delta-1)/(delta+1)};
/// both are returned so the factor is visible. delta = 1 raises
/// DegenerateDelta (H(y) = y has infimum 0, not attained).
HMinResult h_min(const LemmaConstants& c);

struct FeasibleP0 {
    double p0 = 0.0;
    double certificate = 0.0;  ///< g(p0), re-checked to be > 0
};

/// g(p) = p mu - p(p-1)chi^2/2 (C7 C_of_p(p+1))^{1/(p+1)} - (p-1) xi eta rho.
/// Since g(1) = mu > 0, returns the largest p in (1, 4] with g > 0: the
/// search bisects on the first sign change, or returns 4 when g > 0
/// throughout. C_of_p defaults to the constant c_delta_plus_1. Returns
/// nullopt only if g evaluates non-finite. mu <= 0 raises
/// InfeasibleParameters.
std::optional<FeasibleP0> feasible_p0(const LemmaConstants& c,
                                      const std::function<double(double)>& C_of_p = {});

/// The g(p) of the feasibility condition, exposed for oracle checks.
double feasibility_margin(const LemmaConstants& c, double p,
                          const std::function<double(double)>& C_of_p = {});

} // namespace haptosim
