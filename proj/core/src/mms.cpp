#include "haptosim/mms.hpp"

#include <cmath>

namespace haptosim {

namespace {
constexpr double kPi = 3.14159265358979323846;

inline double cospi2(double x, double y) { return std::cos(kPi * x) * std::cos(kPi * y); }

inline double gradsq_c(double x, double y) {
    const double sx = std::sin(kPi * x), cx = std::cos(kPi * x);
    const double sy = std::sin(kPi * y), cy = std::cos(kPi * y);
    return kPi * kPi * (sx * sx * cy * cy + cx * cx * sy * sy);
}
} // namespace

ManufacturedSolution::ManufacturedSolution(const ModelParams& p, const Grid2D& g)
    : p_(p), g_(g), c_(g), s2_(g) {
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            c_(i, j) = cospi2(g.xc(i), g.yc(j));
            s2_(i, j) = gradsq_c(g.xc(i), g.yc(j));
        }
}

double ManufacturedSolution::exact_u(double x, double y, double t) {
    return 2.0 + cospi2(x, y) * std::exp(-t);
}
double ManufacturedSolution::exact_v(double x, double y, double t) {
    return 2.0 + 0.5 * cospi2(x, y) * std::exp(-t);
}
double ManufacturedSolution::exact_w(double x, double y, double t) {
    return 0.25 * (2.0 + cospi2(x, y) * std::exp(-t));
}

void ManufacturedSolution::exact(double t, Field& u, Field& v, Field& w) const {
    if (!u.on(g_)) u = Field(g_);
    if (!v.on(g_)) v = Field(g_);
    if (!w.on(g_)) w = Field(g_);
    const double e = std::exp(-t);
    for (std::size_t k = 0; k < g_.size(); ++k) {
        const double phi = c_[k] * e;
        u[k] = 2.0 + phi;
        v[k] = 2.0 + 0.5 * phi;
        w[k] = 0.25 * (2.0 + phi);
    }
}

State ManufacturedSolution::exact_state(double t) const {
    State s(g_);
    exact(t, s.u, s.v, s.w);
    s.t = t;
    return s;
}

// With phi = c e^{-t}, |grad phi|^2 = s2 e^{-2t}:
//   S_u = 3 mu + e^{-t} c [-1 + 2 pi^2 - 2 pi^2 chi - pi^2 xi + 4 mu]
//       + e^{-2t} [ (chi/2 + xi/4) s2 + c^2 (-pi^2 chi - pi^2 xi / 2 + 5 mu / 4) ]
//   S_v = e^{-t} c [ -1/2 + (pi^2 - 1/2)/tau ]
//   S_w = [ 4 + 3 eta + (2 + 4 eta) phi + (1/2 + 5 eta / 4) phi^2 ] / 4
double ManufacturedSolution::source_u(double x, double y, double t) const {
    const double pi2 = kPi * kPi;
    const double e = std::exp(-t);
    const double c = cospi2(x, y);
    const double s2 = gradsq_c(x, y);
    const double k1 = -1.0 + 2.0 * pi2 - 2.0 * pi2 * p_.chi - pi2 * p_.xi + 4.0 * p_.mu;
    const double k2c = -pi2 * p_.chi - 0.5 * pi2 * p_.xi + 1.25 * p_.mu;
    const double k2s = 0.5 * p_.chi + 0.25 * p_.xi;
    return 3.0 * p_.mu + e * c * k1 + e * e * (k2s * s2 + k2c * c * c);
}

double ManufacturedSolution::source_v(double x, double y, double t) const {
    const double pi2 = kPi * kPi;
    return std::exp(-t) * cospi2(x, y) * (-0.5 + (pi2 - 0.5) / p_.tau);
}

double ManufacturedSolution::source_w(double x, double y, double t) const {
    const double phi = cospi2(x, y) * std::exp(-t);
    return 0.25 * (4.0 + 3.0 * p_.eta + (2.0 + 4.0 * p_.eta) * phi +
                   (0.5 + 1.25 * p_.eta) * phi * phi);
}

void ManufacturedSolution::eval_u(const Grid2D& g, double t, Field& out) const {
    require_on_grid(c_, g, "ManufacturedSolution::eval_u");
    if (!out.on(g)) out = Field(g);
    const double pi2 = kPi * kPi;
    const double e = std::exp(-t);
    const double k1 = -1.0 + 2.0 * pi2 - 2.0 * pi2 * p_.chi - pi2 * p_.xi + 4.0 * p_.mu;
    const double k2c = -pi2 * p_.chi - 0.5 * pi2 * p_.xi + 1.25 * p_.mu;
    const double k2s = 0.5 * p_.chi + 0.25 * p_.xi;
    for (std::size_t k = 0; k < g.size(); ++k)
        out[k] = 3.0 * p_.mu + e * c_[k] * k1 + e * e * (k2s * s2_[k] + k2c * c_[k] * c_[k]);
}

void ManufacturedSolution::eval_v(const Grid2D& g, double t, Field& out) const {
    require_on_grid(c_, g, "ManufacturedSolution::eval_v");
    if (!out.on(g)) out = Field(g);
    const double pi2 = kPi * kPi;
    const double f = std::exp(-t) * (-0.5 + (pi2 - 0.5) / p_.tau);
    for (std::size_t k = 0; k < g.size(); ++k) out[k] = f * c_[k];
}

void ManufacturedSolution::eval_w(const Grid2D& g, double t, Field& out) const {
    require_on_grid(c_, g, "ManufacturedSolution::eval_w");
    if (!out.on(g)) out = Field(g);
    const double e = std::exp(-t);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double phi = c_[k] * e;
        out[k] = 0.25 * (4.0 + 3.0 * p_.eta + (2.0 + 4.0 * p_.eta) * phi +
                         (0.5 + 1.25 * p_.eta) * phi * phi);
    }
}

} // namespace haptosim
