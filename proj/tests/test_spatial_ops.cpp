#include <doctest.h>

#include <cmath>
#include <random>

#include "haptosim/spatial_ops.hpp"

using namespace haptosim;

namespace {

constexpr double kPi = 3.14159265358979323846;

Field random_field(const Grid2D& g, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Field f(g);
    for (auto& x : f.data) x = dist(rng);
    return f;
}

Field sample(const Grid2D& g, double (*fn)(double, double)) {
    Field f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) f(i, j) = fn(g.xc(i), g.yc(j));
    return f;
}

double dot(const Field& a, const Field& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

double l2_norm(const Field& f, const Grid2D& g) {
    return std::sqrt(dot(f, f) * g.cell_area());
}

} // namespace

TEST_CASE("laplacian of a constant is zero") {
    const Grid2D g(9, 7, 0.1, 0.2);
    const Field lap = laplacian_neumann(Field(g, 3.7), g);
    for (double x : lap.data) CHECK(x == 0.0);
}

TEST_CASE("laplacian of x^2 is exactly 2 away from the boundary") {
    const Grid2D g(16, 8, 1.0 / 16, 1.0 / 8);
    const Field f = sample(g, [](double x, double) { return x * x; });
    const Field lap = laplacian_neumann(f, g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i + 1 < g.nx; ++i)
            CHECK(lap(i, j) == doctest::Approx(2.0).epsilon(1e-11));
}

TEST_CASE("laplacian MMS: cos(pi x) cos(pi y), error ratio ~4 when h halves") {
    auto exact_err = [](int n) {
        const Grid2D g = Grid2D::unit_square(n);
        const Field f = sample(g, [](double x, double y) { return std::cos(kPi * x) * std::cos(kPi * y); });
        const Field lap = laplacian_neumann(f, g);
        Field err(g);
        for (std::size_t k = 0; k < g.size(); ++k) err[k] = lap[k] + 2.0 * kPi * kPi * f[k];
        return l2_norm(err, g);
    };
    const double e32 = exact_err(32), e64 = exact_err(64);
    const double ratio = e32 / e64;
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
}

TEST_CASE("gradient basics") {
    const Grid2D g(16, 16, 1.0 / 16, 1.0 / 16);
    Field gx(g), gy(g);

    SUBCASE("constant field") {
        gradient_neumann(Field(g, 2.5), g, gx, gy);
        for (std::size_t k = 0; k < g.size(); ++k) {
            CHECK(gx[k] == 0.0);
            CHECK(gy[k] == 0.0);
        }
    }
    SUBCASE("linear field has exact interior x-gradient") {
        const Field f = sample(g, [](double x, double) { return 3.0 * x; });
        gradient_neumann(f, g, gx, gy);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 1; i + 1 < g.nx; ++i) {
                CHECK(gx(i, j) == doctest::Approx(3.0).epsilon(1e-12));
                CHECK(gy(i, j) == doctest::Approx(0.0).epsilon(1e-12));
            }
    }
    SUBCASE("cos(pi x): interior error is O(h^2)") {
        auto interior_err = [](int n) {
            const Grid2D gg = Grid2D::unit_square(n);
            const Field f = sample(gg, [](double x, double) { return std::cos(kPi * x); });
            Field ggx(gg), ggy(gg);
            gradient_neumann(f, gg, ggx, ggy);
            double m = 0.0;
            for (int j = 0; j < gg.ny; ++j)
                for (int i = 1; i + 1 < gg.nx; ++i)
                    m = std::max(m, std::abs(ggx(i, j) + kPi * std::sin(kPi * gg.xc(i))));
            return m;
        };
        const double ratio = interior_err(24) / interior_err(48);
        CHECK(ratio >= 3.5);
        CHECK(ratio <= 4.5);
    }
}

TEST_CASE("taxis divergence closed-form cases") {
    const Grid2D g(12, 10, 1.0 / 12, 1.0 / 10);
    std::mt19937_64 rng(3);
    StencilConfig central{FaceAveraging::Central};
    StencilConfig upwind{FaceAveraging::Upwind};

    SUBCASE("constant potential gives zero") {
        const Field carrier = random_field(g, rng, 0.0, 2.0);
        for (const auto& cfg : {central, upwind}) {
            const Field d = taxis_div(carrier, Field(g, 1.23), 2.0, g, cfg);
            for (double x : d.data) CHECK(x == 0.0);
        }
    }
    SUBCASE("constant carrier, central mode equals c * laplacian") {
        const double c = 1.7;
        const Field pot = random_field(g, rng);
        const Field d = taxis_div(Field(g, c), pot, 3.0, g, central);
        const Field lap = laplacian_neumann(pot, g);
        for (std::size_t k = 0; k < g.size(); ++k)
            CHECK(d[k] == doctest::Approx(3.0 * c * lap[k]).epsilon(1e-13));
    }
    SUBCASE("domain sum is zero for random fields") {
        for (const auto& cfg : {central, upwind}) {
            const Field carrier = random_field(g, rng, 0.0, 2.0);
            const Field pot = random_field(g, rng);
            const Field d = taxis_div(carrier, pot, 1.4, g, cfg);
            const double scale = 1e-12 * max_abs(d) * g.area() + 1e-300;
            CHECK(std::abs(cell_sum(d) * g.cell_area()) <= scale + 1e-12);
        }
    }
}

TEST_CASE("conservation: all operators integrate to zero on random fields") {
    const Grid2D g(17, 13, 0.07, 0.09);
    std::mt19937_64 rng(11);
    StencilConfig upwind{FaceAveraging::Upwind};
    StencilConfig central{FaceAveraging::Central};
    for (int trial = 0; trial < 50; ++trial) {
        const Field f = random_field(g, rng);
        const Field carrier = random_field(g, rng, 0.0, 3.0);

        const Field lap = laplacian_neumann(f, g);
        CHECK(std::abs(cell_sum(lap) * g.cell_area()) <= 1e-12 * max_abs(lap) * g.area());

        const Field du = taxis_div(carrier, f, 2.0, g, upwind);
        const Field dc = taxis_div(carrier, f, 2.0, g, central);
        const double tol_tax = 1e-12 * std::max(max_abs(du), max_abs(dc)) * g.area();
        CHECK(std::abs(cell_sum(du) * g.cell_area()) <= tol_tax);
        CHECK(std::abs(cell_sum(dc) * g.cell_area()) <= tol_tax);

        Field kappa = random_field(g, rng, 0.5, 2.0);
        Field dw(g);
        weighted_laplacian_neumann(f, kappa, g, dw);
        CHECK(std::abs(cell_sum(dw) * g.cell_area()) <= 1e-12 * max_abs(dw) * g.area());
    }
}

TEST_CASE("laplacian is symmetric and negative semidefinite") {
    const Grid2D g(14, 11, 0.05, 0.08);
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const Field f = random_field(g, rng);
        const Field h = random_field(g, rng);
        const Field lf = laplacian_neumann(f, g);
        const Field lh = laplacian_neumann(h, g);
        const double a = dot(lf, h), b = dot(f, lh);
        const double scale = std::max({std::abs(a), std::abs(b), 1.0});
        CHECK(std::abs(a - b) <= 1e-12 * scale);

        const double q = dot(lf, f);
        CHECK(q <= 1e-12 * std::max(std::abs(q), 1.0));
    }
}

TEST_CASE("weighted laplacian is symmetric under the cell-sum inner product") {
    const Grid2D g(10, 10, 0.1, 0.1);
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        const Field f = random_field(g, rng);
        const Field h = random_field(g, rng);
        const Field kappa = random_field(g, rng, 0.5, 3.0);
        Field lf(g), lh(g);
        weighted_laplacian_neumann(f, kappa, g, lf);
        weighted_laplacian_neumann(h, kappa, g, lh);
        const double a = dot(lf, h), b = dot(f, lh);
        CHECK(std::abs(a - b) <= 1e-12 * std::max({std::abs(a), std::abs(b), 1.0}));
        CHECK(dot(lf, f) <= 1e-12);
    }
}

TEST_CASE("grad_sq matches -<lap f, f> exactly (summation by parts)") {
    const Grid2D g(15, 12, 0.06, 0.11);
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const Field f = random_field(g, rng);
        const double lhs = cell_sum(grad_sq_neumann(f, g));
        const double rhs = -dot(laplacian_neumann(f, g), f);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("taxis MMS order: central ~2, upwind ~1") {
    // u* = 2 + cos(pi x) cos(pi y), v* = cos(pi x) cos(pi y) / 2 against the
    // analytic div(u grad v) = grad u . grad v + u lap v.
    auto err = [](int n, FaceAveraging mode) {
        const Grid2D g = Grid2D::unit_square(n);
        Field u(g), v(g), exact(g);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const double x = g.xc(i), y = g.yc(j);
                const double c = std::cos(kPi * x) * std::cos(kPi * y);
                const double gg = kPi * kPi *
                                  (std::sin(kPi * x) * std::sin(kPi * x) * std::cos(kPi * y) * std::cos(kPi * y) +
                                   std::cos(kPi * x) * std::cos(kPi * x) * std::sin(kPi * y) * std::sin(kPi * y));
                u(i, j) = 2.0 + c;
                v(i, j) = 0.5 * c;
                exact(i, j) = 0.5 * gg + (2.0 + c) * (-kPi * kPi * c);
            }
        StencilConfig cfg{mode};
        const Field d = taxis_div(u, v, 1.0, g, cfg);
        Field e(g);
        for (std::size_t k = 0; k < g.size(); ++k) e[k] = d[k] - exact[k];
        return l2_norm(e, g);
    };

    const double rc = err(32, FaceAveraging::Central) / err(64, FaceAveraging::Central);
    CHECK(rc >= 3.5);
    CHECK(rc <= 4.5);

    const double ru = err(32, FaceAveraging::Upwind) / err(64, FaceAveraging::Upwind);
    CHECK(ru >= 1.8);
    CHECK(ru <= 2.2);
}

TEST_CASE("grid mismatch raises") {
    const Grid2D g(8, 8, 0.125, 0.125);
    const Grid2D g2(9, 8, 0.125, 0.125);
    const Field f(g2);
    CHECK_THROWS_AS(laplacian_neumann(f, g), GridMismatch);
    Field gx(g), gy(g);
    CHECK_THROWS_AS(gradient_neumann(f, g, gx, gy), GridMismatch);
    StencilConfig cfg;
    CHECK_THROWS_AS(taxis_div(f, Field(g), 1.0, g, cfg), GridMismatch);
}
