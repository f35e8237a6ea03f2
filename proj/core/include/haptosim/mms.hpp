#pragma once

#include "haptosim/model.hpp"
#include "haptosim/stepper.hpp"

namespace haptosim {

/// Built-in trigonometric manufactured solution on the unit square:
///   u* = 2 + cos(pi x) cos(pi y) e^{-t}
///   v* = 2 + cos(pi x) cos(pi y) e^{-t} / 2
///   w* = (2 + cos(pi x) cos(pi y) e^{-t}) / 4
/// All three are Neumann-compatible and bounded away from zero. eval_*
/// return the forcing each equation needs so that (u*, v*, w*) solves the
/// forced system exactly.
class ManufacturedSolution final : public SourceTerms {
public:
    ManufacturedSolution(const ModelParams& p, const Grid2D& g);

    void exact(double t, Field& u, Field& v, Field& w) const;
    State exact_state(double t) const;

    void eval_u(const Grid2D& g, double t, Field& out) const override;
    void eval_v(const Grid2D& g, double t, Field& out) const override;
    void eval_w(const Grid2D& g, double t, Field& out) const override;

    /// Pointwise exact values and forcings (for oracle checks).
    static double exact_u(double x, double y, double t);
    static double exact_v(double x, double y, double t);
    static double exact_w(double x, double y, double t);
    double source_u(double x, double y, double t) const;
    double source_v(double x, double y, double t) const;
    double source_w(double x, double y, double t) const;

private:
    ModelParams p_;
    Grid2D g_;
    Field c_;   ///< cos(pi x) cos(pi y) at cell centers
    Field s2_;  ///< |grad(cos pi x cos pi y)|^2 at cell centers
};

} // namespace haptosim
