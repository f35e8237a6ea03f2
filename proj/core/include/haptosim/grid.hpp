#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "haptosim/errors.hpp"

namespace haptosim {

/// Uniform cell-centered rectangular grid. Cell (i,j) has its center at
/// (x0 + (i+1/2)hx, y0 + (j+1/2)hy); fields are stored row-major, j*nx + i.
struct Grid2D {
    int nx = 0;
    int ny = 0;
    double hx = 0.0;
    double hy = 0.0;
    double x0 = 0.0;
    double y0 = 0.0;

    Grid2D() = default;
    Grid2D(int nx_, int ny_, double hx_, double hy_, double ox = 0.0, double oy = 0.0)
        : nx(nx_), ny(ny_), hx(hx_), hy(hy_), x0(ox), y0(oy) {
        if (nx < 3 || ny < 3)
            throw ConfigError("Grid2D: nx and ny must be >= 3");
        if (!(hx > 0.0) || !(hy > 0.0))
            throw ConfigError("Grid2D: hx and hy must be positive");
    }

    /// Unit-square helper: n x n cells on [0,1]^2.
    static Grid2D unit_square(int n) { return Grid2D(n, n, 1.0 / n, 1.0 / n); }

    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
    double cell_area() const { return hx * hy; }
    double area() const { return nx * hx * ny * hy; }
    double xc(int i) const { return x0 + (i + 0.5) * hx; }
    double yc(int j) const { return y0 + (j + 0.5) * hy; }
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }

    bool operator==(const Grid2D& o) const {
        return nx == o.nx && ny == o.ny && hx == o.hx && hy == o.hy && x0 == o.x0 && y0 == o.y0;
    }
};

/// Scalar field on a Grid2D, tagged with the cell counts it was built for.
struct Field {
    int nx = 0;
    int ny = 0;
    std::vector<double> data;

    Field() = default;
    explicit Field(const Grid2D& g, double fill = 0.0)
        : nx(g.nx), ny(g.ny), data(g.size(), fill) {}

    double& operator()(int i, int j) { return data[static_cast<std::size_t>(j) * nx + i]; }
    double operator()(int i, int j) const { return data[static_cast<std::size_t>(j) * nx + i]; }
    double& operator[](std::size_t k) { return data[k]; }
    double operator[](std::size_t k) const { return data[k]; }
    std::size_t size() const { return data.size(); }

    bool on(const Grid2D& g) const { return nx == g.nx && ny == g.ny && data.size() == g.size(); }
};

inline void require_on_grid(const Field& f, const Grid2D& g, const char* who) {
    if (!f.on(g))
        throw GridMismatch(std::string(who) + ": field shape does not match grid");
}

inline bool all_finite(const Field& f) {
    for (double x : f.data)
        if (!std::isfinite(x)) return false;
    return true;
}

/// Cell-sum of f (multiply by g.cell_area() for the midpoint-rule integral).
inline double cell_sum(const Field& f) {
    double s = 0.0;
    for (double x : f.data) s += x;
    return s;
}

inline double max_abs(const Field& f) {
    double m = 0.0;
    for (double x : f.data) m = std::max(m, std::abs(x));
    return m;
}

inline double min_value(const Field& f) {
    double m = f.data.empty() ? 0.0 : f.data[0];
    for (double x : f.data) m = std::min(m, x);
    return m;
}

inline double max_value(const Field& f) {
    double m = f.data.empty() ? 0.0 : f.data[0];
    for (double x : f.data) m = std::max(m, x);
    return m;
}

} // namespace haptosim
