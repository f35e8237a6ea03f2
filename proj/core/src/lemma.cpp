#include "haptosim/lemma.hpp"

#include <cmath>

namespace haptosim {

void LemmaConstants::validate() const {
    if (!std::isfinite(delta) || delta < 1.0)
        throw ConfigError("LemmaConstants: delta must be >= 1");
    if (!std::isfinite(chi) || chi < 0.0)
        throw ConfigError("LemmaConstants: chi must be >= 0");
    if (!std::isfinite(xi) || xi < 0.0)
        throw ConfigError("LemmaConstants: xi must be >= 0");
    if (!std::isfinite(c7) || !(c7 > 0.0))
        throw ConfigError("LemmaConstants: c7 must be positive");
    if (!std::isfinite(c_delta_plus_1) || !(c_delta_plus_1 > 0.0))
        throw ConfigError("LemmaConstants: c_delta_plus_1 must be positive");
    if (!std::isfinite(eta) || eta < 0.0)
        throw ConfigError("LemmaConstants: eta must be >= 0");
    if (!std::isfinite(mu)) throw ConfigError("LemmaConstants: mu must be finite");
    if (!std::isfinite(rho) || rho < 1.0)
        throw ConfigError("LemmaConstants: rho must be >= 1");
}

double rho_of(const Field& w0) {
    double m = 0.0;
    for (double x : w0.data) {
        if (!std::isfinite(x) || x < 0.0)
            throw InvalidInitialData("rho_of: w0 must be finite and nonnegative");
        m = std::max(m, x);
    }
    return std::max(1.0, m);
}

double a1_coefficient(const LemmaConstants& c) {
    c.validate();
    const double d = c.delta;
    const double bracket = 0.5 * d * (d - 1.0) * c.chi * c.chi;
    return 1.0 / (d + 1.0) * std::pow((d + 1.0) / d, -d) * std::pow(bracket, d + 1.0) *
           c.c7 * c.c_delta_plus_1 * std::exp(c.xi * (d - 1.0));
}

namespace {

double golden_section_min(const std::function<double(double)>& f, double a, double b,
                          double rel_tol) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);  // 0.618...
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > rel_tol * std::max(std::abs(a), std::abs(b))) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

} // namespace

HMinResult h_min(const LemmaConstants& c) {
    c.validate();
    if (c.delta == 1.0)
        throw DegenerateDelta("h_min: delta = 1 gives H(y) = y with infimum 0, not attained");

    const double d = c.delta;
    const double a1 = a1_coefficient(c);
    if (a1 == 0.0)
        throw DegenerateDelta("h_min: A1 = 0 (chi = 0) gives H(y) = y with infimum 0, not attained");
    HMinResult r;
    r.y_star = std::pow(a1 * d, 1.0 / (d + 1.0));
    r.h_min = r.y_star + a1 * std::pow(r.y_star, -d);
    r.paper_formula_value =
        0.5 * d * (d - 1.0) * c.chi * c.chi * std::pow(c.c7 * c.c_delta_plus_1, 1.0 / (d + 1.0));

    auto H = [&](double y) { return y + a1 * std::pow(y, -d); };
    const double y_ref = r.y_star;
    r.h_min_oracle = H(golden_section_min(H, 1e-8 * y_ref, 1e8 * y_ref, 1e-12));
    return r;
}

double feasibility_margin(const LemmaConstants& c, double p,
                          const std::function<double(double)>& C_of_p) {
    const double cp1 = C_of_p ? C_of_p(p + 1.0) : c.c_delta_plus_1;
    return p * c.mu - 0.5 * p * (p - 1.0) * c.chi * c.chi * std::pow(c.c7 * cp1, 1.0 / (p + 1.0)) -
           (p - 1.0) * c.xi * c.eta * c.rho;
}

std::optional<FeasibleP0> feasible_p0(const LemmaConstants& c,
                                      const std::function<double(double)>& C_of_p) {
    c.validate();
    if (!(c.mu > 0.0))
        throw InfeasibleParameters("feasible_p0: requires mu > 0 (g(1) = mu)");

    auto g = [&](double p) { return feasibility_margin(c, p, C_of_p); };

    constexpr int kScan = 512;
    constexpr double p_cap = 4.0;
    double lo = 1.0;  // g(1) = mu > 0
    double hi = p_cap;
    bool sign_change = false;
    for (int i = 1; i <= kScan; ++i) {
        const double p = 1.0 + (p_cap - 1.0) * i / kScan;
        const double gp = g(p);
        if (!std::isfinite(gp)) return std::nullopt;
        if (gp <= 0.0) {
            hi = p;
            sign_change = true;
            break;
        }
        lo = p;
    }
    if (!sign_change) {
        const double cert = g(p_cap);
        if (!std::isfinite(cert)) return std::nullopt;
        return FeasibleP0{p_cap, cert};
    }
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (!std::isfinite(gm)) return std::nullopt;
        if (gm > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    const double cert = g(lo);
    if (!std::isfinite(cert) || !(cert > 0.0)) return std::nullopt;
    return FeasibleP0{lo, cert};
}

} // namespace haptosim
