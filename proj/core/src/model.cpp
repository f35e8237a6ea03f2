#include "haptosim/model.hpp"

#include <cmath>

namespace haptosim {

void ModelParams::validate() const {
    auto bad = [](double x) { return !std::isfinite(x) || x < 0.0; };
    if (bad(chi)) throw ConfigError("ModelParams: chi must be finite and >= 0");
    if (bad(xi)) throw ConfigError("ModelParams: xi must be finite and >= 0");
    if (bad(mu)) throw ConfigError("ModelParams: mu must be finite and >= 0");
    if (bad(eta)) throw ConfigError("ModelParams: eta must be finite and >= 0");
    if (!std::isfinite(tau) || !(tau > 0.0)) throw ConfigError("ModelParams: tau must be positive");
}

ReactionTerms reaction_terms(const State& s, const ModelParams& p, const Grid2D& g) {
    require_on_grid(s.u, g, "reaction_terms(u)");
    require_on_grid(s.v, g, "reaction_terms(v)");
    require_on_grid(s.w, g, "reaction_terms(w)");

    ReactionTerms r{Field(g), Field(g), Field(g)};
    const double inv_tau = 1.0 / p.tau;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double u = s.u[k];
        const double v = s.v[k];
        const double w = s.w[k];
        if (!std::isfinite(u) || !std::isfinite(v) || !std::isfinite(w))
            throw InvalidState("reaction_terms: non-finite input field");
        const double crowd = 1.0 - u - w;
        r.f_u[k] = p.mu * u * crowd;
        r.f_v[k] = (u - v) * inv_tau;
        r.f_w[k] = -v * w + p.eta * w * crowd;
    }
    return r;
}

Field transform_to_a(const State& s, const ModelParams& p, const Grid2D& g) {
    require_on_grid(s.u, g, "transform_to_a(u)");
    require_on_grid(s.w, g, "transform_to_a(w)");
    Field a(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!std::isfinite(s.u[k]) || !std::isfinite(s.w[k]))
            throw InvalidState("transform_to_a: non-finite input field");
        a[k] = s.u[k] * std::exp(-p.xi * s.w[k]);
    }
    return a;
}

Field transform_from_a(const Field& a, const Field& w, const ModelParams& p, const Grid2D& g) {
    require_on_grid(a, g, "transform_from_a(a)");
    require_on_grid(w, g, "transform_from_a(w)");
    Field u(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!std::isfinite(a[k]) || !std::isfinite(w[k]))
            throw InvalidState("transform_from_a: non-finite input field");
        u[k] = a[k] * std::exp(p.xi * w[k]);
    }
    return u;
}

std::vector<SteadyState> homogeneous_steady_states(const ModelParams& p) {
    p.validate();
    // f_u = 0 forces u = 0 or u+w = 1 (mu > 0); f_v = 0 forces v = u;
    // f_w = 0 forces w = 0 or v = eta(1-u-w). Case analysis gives exactly
    // (0,0,0), (0,0,1), (1,1,0) for mu, eta > 0. With eta = 0 every (0,0,c)
    // is steady: the family collapses onto one flagged representative.
    std::vector<SteadyState> out;
    out.push_back({0.0, 0.0, 0.0, p.eta == 0.0});
    if (p.eta > 0.0) out.push_back({0.0, 0.0, 1.0, false});
    out.push_back({1.0, 1.0, 0.0, p.mu == 0.0});
    return out;
}

} // namespace haptosim
