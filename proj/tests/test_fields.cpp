#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hypo/fields.hpp"
#include "test_support.hpp"

using namespace hypo;

TEST_CASE("basis construction guards") {
    CHECK_THROWS_AS(Grid2::make(1.0, 1.0, 3, 8), ConfigError);
    CHECK_THROWS_AS(Grid2::make(1.0, 1.0, 10, 7), ConfigError);
    auto g = Grid2::make(2.0, 1.0, 8, 8);
    CHECK(g->dealias_mx == 4);
}

TEST_CASE("project/evaluate round-trip on resolved coefficients") {
    auto g = hypotest::grid(16, 1.3, 0.9);
    auto r = hypotest::rng(31);
    std::normal_distribution<double> nd;
    for (Par px : {Par::Even, Par::Odd})
        for (Par py : {Par::Even, Par::Odd}) {
            ScalarField2 f(g, px, py, 9, 9);
            for (int i = 0; i < f.coef.rows(); ++i)
                for (int j = 0; j < f.coef.cols(); ++j) f.coef(i, j) = nd(r);
            const ScalarField2 back = ScalarField2::project(g, px, py, 9, 9, f.eval());
            CHECK((back.coef - f.coef).cwiseAbs().maxCoeff() <= 1e-13);
        }
}

TEST_CASE("projection recovers a single basis function") {
    auto g = hypotest::grid(16, 1.0, 1.0);
    Eigen::MatrixXd vals(16, 16);
    for (int ix = 0; ix < 16; ++ix)
        for (int iy = 0; iy < 16; ++iy)
            vals(ix, iy) = std::cos(2.0 * M_PI * g->bx.nodes[ix] / g->Lx);
    const ScalarField2 f = ScalarField2::project(g, Par::Even, Par::Even, 9, 9, vals);
    CHECK(f.coef(2, 0) == doctest::Approx(1.0));
    double off = 0.0;
    for (int i = 0; i <= 9; ++i)
        for (int j = 0; j <= 9; ++j)
            if (!(i == 2 && j == 0)) off = std::max(off, std::abs(f.coef(i, j)));
    CHECK(off <= 1e-13);
}

TEST_CASE("spectral differentiation") {
    auto g = hypotest::grid(16, 1.7, 1.0);
    // constant field
    ScalarField2 c(g, Par::Even, Par::Even, 9, 9);
    c.coef(0, 0) = 3.5;
    CHECK(c.dx().eval().cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(c.dy().eval().cwiseAbs().maxCoeff() <= 1e-14);

    // v_x = sin(pi x / Lx): d/dx = (pi/Lx) cos(pi x/Lx) exactly at nodes
    VelocityField v(g, 9, 9);
    v.x.coef(0, 0) = 1.0;
    const Eigen::MatrixXd dvx = v.x.dx().eval();
    for (int ix = 0; ix < g->nx; ++ix)
        for (int iy = 0; iy < g->ny; ++iy)
            CHECK(dvx(ix, iy) ==
                  doctest::Approx((M_PI / g->Lx) * std::cos(M_PI * g->bx.nodes[ix] / g->Lx))
                      .epsilon(1e-12));

    // divergence of the (i=j=1) basis-conforming field matches the closed form
    VelocityField w(g, 9, 9);
    w.x.coef(0, 1) = 0.7;   // sin(pi x/Lx) cos(pi y/Ly)
    w.y.coef(1, 0) = -0.4;  // cos(pi x/Lx) sin(pi y/Ly)
    const Eigen::MatrixXd div = w.x.dx().eval() + w.y.dy().eval();
    for (int ix = 0; ix < g->nx; ++ix)
        for (int iy = 0; iy < g->ny; ++iy) {
            const double x = g->bx.nodes[ix], y = g->by.nodes[iy];
            const double expect =
                0.7 * (M_PI / g->Lx) * std::cos(M_PI * x / g->Lx) * std::cos(M_PI * y / g->Ly) -
                0.4 * (M_PI / g->Ly) * std::cos(M_PI * x / g->Lx) * std::cos(M_PI * y / g->Ly);
            CHECK(div(ix, iy) == doctest::Approx(expect).epsilon(1e-12));
        }
}

TEST_CASE("quadrature: inner products and Lp norms") {
    auto g = hypotest::grid(16, 1.3, 0.7);
    ScalarField2 one(g, Par::Even, Par::Even, 9, 9);
    one.coef(0, 0) = 1.0;
    CHECK(inner(one, one) == doctest::Approx(g->Lx * g->Ly).epsilon(1e-13));

    ScalarField2 s(g, Par::Odd, Par::Even, 9, 9);
    s.coef(0, 0) = 1.0;  // sin(pi x / Lx)
    CHECK(inner(s, s) == doctest::Approx(0.5 * g->Lx * g->Ly).epsilon(1e-13));

    ScalarField2 cy(g, Par::Even, Par::Even, 9, 9);
    cy.coef(0, 1) = 1.0;  // cos(pi y / Ly)
    const double n4 = g->norm_Lp(cy.eval(), 4.0);
    CHECK(std::pow(n4, 4.0) == doctest::Approx(0.375 * g->Lx * g->Ly).epsilon(1e-13));
}

TEST_CASE("impermeability: wall-normal velocity vanishes for any coefficients") {
    auto g = hypotest::grid(12, 2.0, 1.0);
    auto r = hypotest::rng(32);
    std::normal_distribution<double> nd;
    VelocityField v(g, 7, 7);
    for (int i = 0; i < v.x.coef.rows(); ++i)
        for (int j = 0; j < v.x.coef.cols(); ++j) v.x.coef(i, j) = nd(r);
    for (int i = 0; i < v.y.coef.rows(); ++i)
        for (int j = 0; j < v.y.coef.cols(); ++j) v.y.coef(i, j) = nd(r);

    // v_x(0,y), v_x(Lx,y), v_y(x,0), v_y(x,Ly) from the basis factors directly
    for (int n = 0; n < 40; ++n) {
        const double y = n * g->Ly / 39.0;
        double vx0 = 0.0, vx1 = 0.0;
        for (int i = 1; i <= 7; ++i)
            for (int j = 0; j <= 7; ++j) {
                vx0 += v.x.coef(i - 1, j) * std::sin(0.0) * std::cos(j * M_PI * y / g->Ly);
                vx1 += v.x.coef(i - 1, j) * std::sin(i * M_PI) * std::cos(j * M_PI * y / g->Ly);
            }
        CHECK(std::abs(vx0) == 0.0);
        CHECK(std::abs(vx1) <= 1e-13);
    }
    for (int w = 0; w < 4; ++w) CHECK(v.wall_tangential(static_cast<Wall>(w)).allFinite());
}

TEST_CASE("nested spaces embed by coefficient truncation") {
    auto g = hypotest::grid(16, 1.0, 1.0);
    auto r = hypotest::rng(33);
    std::normal_distribution<double> nd;
    ScalarField2 f(g, Par::Even, Par::Even, 5, 5);
    for (int i = 0; i <= 5; ++i)
        for (int j = 0; j <= 5; ++j) f.coef(i, j) = nd(r);
    const ScalarField2 up = f.restricted(9, 9);
    const ScalarField2 back = ScalarField2::project(g, Par::Even, Par::Even, 5, 5, up.eval());
    CHECK((back.coef - f.coef).cwiseAbs().maxCoeff() <= 1e-13);
    // projection to the smaller space is plain truncation
    ScalarField2 h(g, Par::Even, Par::Even, 9, 9);
    for (int i = 0; i <= 9; ++i)
        for (int j = 0; j <= 9; ++j) h.coef(i, j) = nd(r);
    const ScalarField2 down = ScalarField2::project(g, Par::Even, Par::Even, 5, 5, h.eval());
    CHECK((down.coef - h.coef.topLeftCorner(6, 6)).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("discrete integration by parts with impermeable velocity") {
    // <div w, s> + <w, grad s> equals the boundary term, which vanishes
    auto g = hypotest::grid(16, 1.2, 0.8);
    auto r = hypotest::rng(34);
    std::normal_distribution<double> nd;
    VelocityField w(g, 7, 7);
    for (int i = 0; i < w.x.coef.rows(); ++i)
        for (int j = 0; j < w.x.coef.cols(); ++j) w.x.coef(i, j) = 0.3 * nd(r);
    for (int i = 0; i < w.y.coef.rows(); ++i)
        for (int j = 0; j < w.y.coef.cols(); ++j) w.y.coef(i, j) = 0.3 * nd(r);
    ScalarField2 s(g, Par::Even, Par::Even, 7, 7);
    for (int i = 0; i <= 7; ++i)
        for (int j = 0; j <= 7; ++j) s.coef(i, j) = nd(r);

    const Eigen::MatrixXd div_w = w.x.dx().eval() + w.y.dy().eval();
    const Eigen::MatrixXd sv = s.eval();
    const double a = g->integrate(div_w.cwiseProduct(sv));
    const double b = g->integrate(w.x.eval().cwiseProduct(s.dx().eval()) +
                                  w.y.eval().cwiseProduct(s.dy().eval()));
    CHECK(std::abs(a + b) <= 1e-12 * (1.0 + std::abs(a) + std::abs(b)));
}

TEST_CASE("dealiased product against a doubled-resolution reference") {
    // smooth band-limited inputs: the energy lost to truncation is tiny
    auto gc = hypotest::grid(24, 1.0, 1.0);
    auto gf = hypotest::grid(48, 1.0, 1.0);
    const int m = gc->dealias_mx;  // 15

    auto fill = [&](ScalarField2& f) {
        for (int i = 0; i < f.coef.rows(); ++i)
            for (int j = 0; j < f.coef.cols(); ++j)
                f.coef(i, j) = std::exp(-1.1 * (i + j)) * ((i * 13 + j * 7) % 5 - 2);
    };
    ScalarField2 a(gc, Par::Even, Par::Even, m, m), b(gc, Par::Even, Par::Even, m, m);
    fill(a);
    fill(b);
    const ScalarField2 prod = dealiased_product(a, b, Par::Even, Par::Even, m, m);

    // same product on the doubled grid, where modes up to 2m resolve exactly
    ScalarField2 af(gf, Par::Even, Par::Even, m, m), bf(gf, Par::Even, Par::Even, m, m);
    af.coef = a.coef;
    bf.coef = b.coef;
    const ScalarField2 ref = ScalarField2::project(gf, Par::Even, Par::Even, 2 * m, 2 * m,
                                                   af.eval().cwiseProduct(bf.eval()));
    double kept = 0.0, lost = 0.0;
    for (int i = 0; i <= 2 * m; ++i)
        for (int j = 0; j <= 2 * m; ++j) {
            const double e = ref.coef(i, j) * ref.coef(i, j);
            if (i <= m && j <= m)
                kept += e;
            else
                lost += e;
        }
    CHECK(lost <= 1e-10 * (kept + lost));
    // and the retained coefficients agree with the coarse-grid projection
    double diff = 0.0;
    for (int i = 0; i <= m; ++i)
        for (int j = 0; j <= m; ++j)
            diff = std::max(diff, std::abs(prod.coef(i, j) - ref.coef(i, j)));
    CHECK(diff <= 1e-12);
}
