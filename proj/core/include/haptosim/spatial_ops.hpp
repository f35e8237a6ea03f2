#pragma once

#include "haptosim/grid.hpp"

namespace haptosim {

/// How the carrier density is sampled at cell faces in taxis fluxes.
enum class FaceAveraging {
    Upwind,   ///< take the upwind cell w.r.t. the face velocity coeff*dpot
    Central,  ///< arithmetic mean of the two adjacent cells
};

struct StencilConfig {
    FaceAveraging face_averaging = FaceAveraging::Upwind;
};

/// 5-point Laplacian with homogeneous Neumann (zero-flux) boundaries,
/// assembled from face fluxes so the cell sum telescopes to zero exactly.
/// Mirror ghost cells and zero boundary-face flux are the same operator.
void laplacian_neumann(const Field& f, const Grid2D& g, Field& out);
Field laplacian_neumann(const Field& f, const Grid2D& g);

/// Cell-centered gradient: centered differences in the interior, mirror
/// ghosts at the boundary (the normal ghost value equals the boundary cell).
void gradient_neumann(const Field& f, const Grid2D& g, Field& gx, Field& gy);

/// Per-cell |grad f|^2 assembled as the mean of the squared difference
/// quotients on the cell's faces (boundary faces contribute zero). Its cell
/// sum equals -<Lap f, f> exactly, so summation-by-parts identities hold
/// discretely.
void grad_sq_neumann(const Field& f, const Grid2D& g, Field& out);
Field grad_sq_neumann(const Field& f, const Grid2D& g);

/// div(coeff * carrier * grad potential) from face fluxes
/// F = coeff * carrier_face * (d potential)_face with zero-flux boundary
/// faces; carrier_face per StencilConfig.
void taxis_div(const Field& carrier, const Field& potential, double coeff,
               const Grid2D& g, const StencilConfig& cfg, Field& out);
Field taxis_div(const Field& carrier, const Field& potential, double coeff,
                const Grid2D& g, const StencilConfig& cfg);

/// div(kappa grad f) with the diffusion coefficient kappa sampled at faces
/// as the arithmetic mean of the adjacent cell values; zero-flux boundaries.
/// Symmetric negative-semidefinite under the cell-sum inner product.
void weighted_laplacian_neumann(const Field& f, const Field& kappa, const Grid2D& g, Field& out);

} // namespace haptosim
