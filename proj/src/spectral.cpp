#include "hypo/spectral.hpp"

#include <cmath>

namespace hypo {

Basis1D Basis1D::make(int n, double length, int mmax) {
    if (n < 4 || n % 2 != 0) throw ConfigError("collocation count must be even and >= 4");
    if (mmax < 1 || mmax > n - 1) throw ConfigError("mode cap out of range");
    Basis1D b;
    b.n = n;
    b.length = length;
    b.mmax = mmax;
    b.h = length / n;
    b.nodes.resize(n);
    for (int k = 0; k < n; ++k) b.nodes[k] = (k + 0.5) * b.h;

    b.cos_eval.resize(n, mmax + 1);
    b.sin_eval.resize(n, mmax);
    const double w = M_PI / length;
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i <= mmax; ++i) b.cos_eval(k, i) = std::cos(i * w * b.nodes[k]);
        for (int i = 1; i <= mmax; ++i) b.sin_eval(k, i - 1) = std::sin(i * w * b.nodes[k]);
    }
    // Discrete orthogonality on midpoint nodes:
    //   sum_k cos_i cos_j = n delta_ij (i=j=0), n/2 delta_ij otherwise,
    //   sum_k sin_i sin_j = n/2 delta_ij for 1 <= i,j <= n-1.
    b.cos_proj = (2.0 / n) * b.cos_eval.transpose();
    b.cos_proj.row(0) *= 0.5;
    b.sin_proj = (2.0 / n) * b.sin_eval.transpose();
    return b;
}

GridPtr Grid2::make(double Lx, double Ly, int nx, int ny) {
    auto g = std::make_shared<Grid2>();
    g->Lx = Lx;
    g->Ly = Ly;
    g->nx = nx;
    g->ny = ny;
    g->bx = Basis1D::make(nx, Lx, nx - 1);
    g->by = Basis1D::make(ny, Ly, ny - 1);
    g->cell = g->bx.h * g->by.h;
    g->dealias_mx = 2 * nx / 3 - 1;
    g->dealias_my = 2 * ny / 3 - 1;
    return g;
}

double Grid2::norm_Lp(const Eigen::MatrixXd& nodal, double p) const {
    return std::pow(cell * nodal.array().abs().pow(p).sum(), 1.0 / p);
}

ScalarField2::ScalarField2(GridPtr g, Par parity_x, Par parity_y, int mx_, int my_)
    : grid(std::move(g)), px(parity_x), py(parity_y), mx(mx_), my(my_) {
    if (mx > grid->bx.mmax || my > grid->by.mmax || mx < 1 || my < 1)
        throw ConfigError("field mode caps exceed the grid");
    coef = Eigen::MatrixXd::Zero(coef_rows(), coef_cols());
}

ScalarField2 ScalarField2::project(GridPtr g, Par px, Par py, int mx, int my,
                                   const Eigen::MatrixXd& nodal) {
    ScalarField2 f(std::move(g), px, py, mx, my);
    const auto& bx = f.grid->bx;
    const auto& by = f.grid->by;
    const Eigen::MatrixXd Px =
        (px == Par::Even) ? bx.cos_proj.topRows(mx + 1) : bx.sin_proj.topRows(mx);
    const Eigen::MatrixXd Py =
        (py == Par::Even) ? by.cos_proj.topRows(my + 1) : by.sin_proj.topRows(my);
    f.coef = Px * nodal * Py.transpose();
    return f;
}

Eigen::MatrixXd ScalarField2::eval() const {
    const auto& bx = grid->bx;
    const auto& by = grid->by;
    const auto Ex = (px == Par::Even) ? bx.cos_eval.leftCols(mx + 1) : bx.sin_eval.leftCols(mx);
    const auto Ey = (py == Par::Even) ? by.cos_eval.leftCols(my + 1) : by.sin_eval.leftCols(my);
    return Ex * coef * Ey.transpose();
}

ScalarField2 ScalarField2::dx() const {
    ScalarField2 out(grid, px == Par::Even ? Par::Odd : Par::Even, py, mx, my);
    const double w = M_PI / grid->Lx;
    if (px == Par::Even) {
        // d/dx cos_i = -(i pi / L) sin_i, i = 1..mx
        for (int i = 1; i <= mx; ++i) out.coef.row(i - 1) = -(i * w) * coef.row(i);
    } else {
        // d/dx sin_i = (i pi / L) cos_i; no constant mode is generated
        out.coef.row(0).setZero();
        for (int i = 1; i <= mx; ++i) out.coef.row(i) = (i * w) * coef.row(i - 1);
    }
    return out;
}

ScalarField2 ScalarField2::dy() const {
    ScalarField2 out(grid, px, py == Par::Even ? Par::Odd : Par::Even, mx, my);
    const double w = M_PI / grid->Ly;
    if (py == Par::Even) {
        for (int j = 1; j <= my; ++j) out.coef.col(j - 1) = -(j * w) * coef.col(j);
    } else {
        out.coef.col(0).setZero();
        for (int j = 1; j <= my; ++j) out.coef.col(j) = (j * w) * coef.col(j - 1);
    }
    return out;
}

ScalarField2 ScalarField2::restricted(int new_mx, int new_my) const {
    ScalarField2 out(grid, px, py, new_mx, new_my);
    const int r = std::min(out.coef_rows(), coef_rows());
    const int c = std::min(out.coef_cols(), coef_cols());
    out.coef.topLeftCorner(r, c) = coef.topLeftCorner(r, c);
    return out;
}

static void check_same_space(const ScalarField2& a, const ScalarField2& b) {
    if (a.grid != b.grid || a.px != b.px || a.py != b.py || a.mx != b.mx || a.my != b.my)
        throw DimensionMismatch("scalar fields live in different spaces");
}

ScalarField2 operator+(const ScalarField2& a, const ScalarField2& b) {
    check_same_space(a, b);
    ScalarField2 out = a;
    out.coef += b.coef;
    return out;
}

ScalarField2 operator-(const ScalarField2& a, const ScalarField2& b) {
    check_same_space(a, b);
    ScalarField2 out = a;
    out.coef -= b.coef;
    return out;
}

ScalarField2 operator*(double s, const ScalarField2& a) {
    ScalarField2 out = a;
    out.coef *= s;
    return out;
}

double inner(const ScalarField2& a, const ScalarField2& b) {
    if (a.grid != b.grid) throw DimensionMismatch("inner: fields on different grids");
    return a.grid->integrate(a.eval().cwiseProduct(b.eval()));
}

}  // namespace hypo
