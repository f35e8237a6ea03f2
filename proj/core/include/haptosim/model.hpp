#pragma once

#include <vector>

#include "haptosim/grid.hpp"

namespace haptosim {

/// Kinetic and taxis constants of the invasion model
///   u_t = Lap u - chi div(u grad v) - xi div(u grad w) + mu u(1-u-w)
///   tau v_t = Lap v + u - v
///   w_t = -v w + eta w(1-u-w)
/// with zero-flux boundary conditions.
struct ModelParams {
    double chi = 1.0;  ///< chemotactic sensitivity
    double xi = 1.0;   ///< haptotactic sensitivity
    double mu = 1.0;   ///< logistic proliferation rate
    double eta = 1.0;  ///< tissue remodeling rate
    double tau = 1.0;  ///< enzyme-equation time constant

    void validate() const;
};

/// The (u, v, w) triple at one time instant: cancer-cell density,
/// enzyme concentration, tissue density.
struct State {
    Field u;
    Field v;
    Field w;
    double t = 0.0;

    State() = default;
    explicit State(const Grid2D& g) : u(g), v(g), w(g) {}
};

struct ReactionTerms {
    Field f_u;
    Field f_v;
    Field f_w;
};

/// Spatially homogeneous steady state of the kinetics.
struct SteadyState {
    double u = 0.0;
    double v = 0.0;
    double w = 0.0;
    /// True when this entry stands for a one-parameter family rather than an
    /// isolated point (eta = 0 makes every (0,0,c) steady; mu = 0 every (c,c,0)).
    bool family = false;
};

/// Pointwise kinetics of the three equations:
///   f_u = mu u (1-u-w), f_v = (u-v)/tau, f_w = -v w + eta w (1-u-w).
/// Throws InvalidState on non-finite input.
ReactionTerms reaction_terms(const State& s, const ModelParams& p, const Grid2D& g);

/// a = u exp(-xi w); removes the haptotaxis cross-diffusion from the u
/// equation at the cost of weighted diffusion.
Field transform_to_a(const State& s, const ModelParams& p, const Grid2D& g);

/// Inverse transform u = a exp(xi w).
Field transform_from_a(const Field& a, const Field& w, const ModelParams& p, const Grid2D& g);

/// Homogeneous steady states of the kinetics. For mu, eta > 0 these are
/// exactly (0,0,0), (0,0,1), (1,1,0). For eta = 0 the (0,0,0) entry is
/// flagged as representative of the family (0,0,c); for mu = 0 the (1,1,0)
/// entry represents (c,c,0).
std::vector<SteadyState> homogeneous_steady_states(const ModelParams& p);

} // namespace haptosim
