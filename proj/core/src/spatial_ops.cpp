#include "haptosim/spatial_ops.hpp"

namespace haptosim {

void laplacian_neumann(const Field& f, const Grid2D& g, Field& out) {
    require_on_grid(f, g, "laplacian_neumann");
    if (!out.on(g)) out = Field(g);

    const int nx = g.nx, ny = g.ny;
    const double ihx2 = 1.0 / (g.hx * g.hx);
    const double ihy2 = 1.0 / (g.hy * g.hy);
    const double* __restrict src = f.data.data();
    double* __restrict dst = out.data.data();

    for (int j = 0; j < ny; ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * nx;
        for (int i = 0; i < nx; ++i) {
            const std::size_t k = row + i;
            const double c = src[k];
            // zero flux through boundary faces
            const double fe = (i + 1 < nx) ? src[k + 1] - c : 0.0;
            const double fw = (i > 0) ? c - src[k - 1] : 0.0;
            const double fn = (j + 1 < ny) ? src[k + nx] - c : 0.0;
            const double fs = (j > 0) ? c - src[k - nx] : 0.0;
            dst[k] = (fe - fw) * ihx2 + (fn - fs) * ihy2;
        }
    }
}

Field laplacian_neumann(const Field& f, const Grid2D& g) {
    Field out(g);
    laplacian_neumann(f, g, out);
    return out;
}

void gradient_neumann(const Field& f, const Grid2D& g, Field& gx, Field& gy) {
    require_on_grid(f, g, "gradient_neumann");
    if (!gx.on(g)) gx = Field(g);
    if (!gy.on(g)) gy = Field(g);

    const int nx = g.nx, ny = g.ny;
    const double i2hx = 0.5 / g.hx;
    const double i2hy = 0.5 / g.hy;
    const double* __restrict src = f.data.data();

    for (int j = 0; j < ny; ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * nx;
        for (int i = 0; i < nx; ++i) {
            const std::size_t k = row + i;
            const double fe = (i + 1 < nx) ? src[k + 1] : src[k];
            const double fw = (i > 0) ? src[k - 1] : src[k];
            const double fn = (j + 1 < ny) ? src[k + nx] : src[k];
            const double fs = (j > 0) ? src[k - nx] : src[k];
            gx.data[k] = (fe - fw) * i2hx;
            gy.data[k] = (fn - fs) * i2hy;
        }
    }
}

void grad_sq_neumann(const Field& f, const Grid2D& g, Field& out) {
    require_on_grid(f, g, "grad_sq_neumann");
    if (!out.on(g)) out = Field(g);

    const int nx = g.nx, ny = g.ny;
    const double ihx = 1.0 / g.hx;
    const double ihy = 1.0 / g.hy;
    const double* __restrict src = f.data.data();
    double* __restrict dst = out.data.data();

    for (int j = 0; j < ny; ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * nx;
        for (int i = 0; i < nx; ++i) {
            const std::size_t k = row + i;
            const double c = src[k];
            const double de = (i + 1 < nx) ? (src[k + 1] - c) * ihx : 0.0;
            const double dw = (i > 0) ? (c - src[k - 1]) * ihx : 0.0;
            const double dn = (j + 1 < ny) ? (src[k + nx] - c) * ihy : 0.0;
            const double ds = (j > 0) ? (c - src[k - nx]) * ihy : 0.0;
            dst[k] = 0.5 * (de * de + dw * dw) + 0.5 * (dn * dn + ds * ds);
        }
    }
}

Field grad_sq_neumann(const Field& f, const Grid2D& g) {
    Field out(g);
    grad_sq_neumann(f, g, out);
    return out;
}

namespace {

inline double face_carrier(double cl, double cr, double flux_dir, FaceAveraging mode) {
    if (mode == FaceAveraging::Central) return 0.5 * (cl + cr);
    // upwind: the side the velocity comes from
    return flux_dir > 0.0 ? cl : (flux_dir < 0.0 ? cr : 0.5 * (cl + cr));
}

} // namespace

void taxis_div(const Field& carrier, const Field& potential, double coeff,
               const Grid2D& g, const StencilConfig& cfg, Field& out) {
    require_on_grid(carrier, g, "taxis_div(carrier)");
    require_on_grid(potential, g, "taxis_div(potential)");
    if (!out.on(g)) out = Field(g);

    const int nx = g.nx, ny = g.ny;
    const double ihx = 1.0 / g.hx;
    const double ihy = 1.0 / g.hy;
    const double* __restrict cr = carrier.data.data();
    const double* __restrict po = potential.data.data();
    double* __restrict dst = out.data.data();
    const FaceAveraging mode = cfg.face_averaging;

    // Face flux between cell k (left/low) and its +x / +y neighbor:
    //   F = coeff * carrier_face * (po_hi - po_lo)/h.
    // Each cell accumulates (F_hi - F_lo)/h; boundary faces carry no flux.
    for (int j = 0; j < ny; ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * nx;
        for (int i = 0; i < nx; ++i) {
            const std::size_t k = row + i;
            double fe = 0.0, fw = 0.0, fn = 0.0, fs = 0.0;
            if (i + 1 < nx) {
                const double dp = (po[k + 1] - po[k]) * ihx;
                fe = coeff * dp * face_carrier(cr[k], cr[k + 1], coeff * dp, mode);
            }
            if (i > 0) {
                const double dp = (po[k] - po[k - 1]) * ihx;
                fw = coeff * dp * face_carrier(cr[k - 1], cr[k], coeff * dp, mode);
            }
            if (j + 1 < ny) {
                const double dp = (po[k + nx] - po[k]) * ihy;
                fn = coeff * dp * face_carrier(cr[k], cr[k + nx], coeff * dp, mode);
            }
            if (j > 0) {
                const double dp = (po[k] - po[k - nx]) * ihy;
                fs = coeff * dp * face_carrier(cr[k - nx], cr[k], coeff * dp, mode);
            }
            dst[k] = (fe - fw) * ihx + (fn - fs) * ihy;
        }
    }
}

Field taxis_div(const Field& carrier, const Field& potential, double coeff,
                const Grid2D& g, const StencilConfig& cfg) {
    Field out(g);
    taxis_div(carrier, potential, coeff, g, cfg, out);
    return out;
}

void weighted_laplacian_neumann(const Field& f, const Field& kappa, const Grid2D& g, Field& out) {
    require_on_grid(f, g, "weighted_laplacian_neumann(f)");
    require_on_grid(kappa, g, "weighted_laplacian_neumann(kappa)");
    if (!out.on(g)) out = Field(g);

    const int nx = g.nx, ny = g.ny;
    const double ihx2 = 1.0 / (g.hx * g.hx);
    const double ihy2 = 1.0 / (g.hy * g.hy);
    const double* __restrict src = f.data.data();
    const double* __restrict kp = kappa.data.data();
    double* __restrict dst = out.data.data();

    for (int j = 0; j < ny; ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * nx;
        for (int i = 0; i < nx; ++i) {
            const std::size_t k = row + i;
            const double c = src[k];
            double acc = 0.0;
            if (i + 1 < nx) acc += 0.5 * (kp[k] + kp[k + 1]) * (src[k + 1] - c) * ihx2;
            if (i > 0) acc -= 0.5 * (kp[k - 1] + kp[k]) * (c - src[k - 1]) * ihx2;
            if (j + 1 < ny) acc += 0.5 * (kp[k] + kp[k + nx]) * (src[k + nx] - c) * ihy2;
            if (j > 0) acc -= 0.5 * (kp[k - nx] + kp[k]) * (c - src[k - nx]) * ihy2;
            dst[k] = acc;
        }
    }
}

} // namespace haptosim
