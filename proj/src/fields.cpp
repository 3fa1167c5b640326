#include "hypo/fields.hpp"

namespace hypo {

Eigen::VectorXd VelocityField::wall_tangential(Wall w) const {
    const auto& g = *grid();
    if (w == WallBottom || w == WallTop) {
        // v_x(x, wall) = sum_ij a_ij sin_i(x) * cos(j pi y/Ly)|wall, with
        // cos factors 1 at y=0 and (-1)^j at y=Ly.
        Eigen::VectorXd ysign(x.coef_cols());
        for (int j = 0; j < x.coef_cols(); ++j)
            ysign[j] = (w == WallBottom) ? 1.0 : ((j % 2 == 0) ? 1.0 : -1.0);
        return g.bx.sin_eval.leftCols(x.mx) * (x.coef * ysign);
    }
    Eigen::VectorXd xsign(y.coef_rows());
    for (int i = 0; i < y.coef_rows(); ++i)
        xsign[i] = (w == WallLeft) ? 1.0 : ((i % 2 == 0) ? 1.0 : -1.0);
    return g.by.sin_eval.leftCols(y.my) * (y.coef.transpose() * xsign);
}

TensorField::TensorField(GridPtr g, int lx, int ly) {
    for (auto& f : c) f = ScalarField2(g, Par::Even, Par::Even, lx, ly);
}

TensorField TensorField::uniform(GridPtr g, int lx, int ly, const Mat2& m) {
    TensorField t(std::move(g), lx, ly);
    t.c[0].coef(0, 0) = m(0, 0);
    t.c[1].coef(0, 0) = m(0, 1);
    t.c[2].coef(0, 0) = m(1, 0);
    t.c[3].coef(0, 0) = m(1, 1);
    return t;
}

TensorField TensorField::project_nodal(GridPtr g, int lx, int ly, const Grids4& nodal) {
    TensorField t;
    for (int k = 0; k < 4; ++k)
        t.c[k] = ScalarField2::project(g, Par::Even, Par::Even, lx, ly, nodal[k]);
    return t;
}

Eigen::MatrixXd TensorField::det_nodal() const {
    const auto f = eval();
    return f[0].cwiseProduct(f[3]) - f[1].cwiseProduct(f[2]);
}

double TensorField::norm_L2() const {
    const auto f = eval();
    Eigen::MatrixXd s = f[0].cwiseAbs2() + f[1].cwiseAbs2() + f[2].cwiseAbs2() + f[3].cwiseAbs2();
    return std::sqrt(grid()->integrate(s));
}

double TensorField::grad_norm_Lr(double r) const {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(grid()->nx, grid()->ny);
    for (const auto& f : c) {
        s += f.dx().eval().cwiseAbs2();
        s += f.dy().eval().cwiseAbs2();
    }
    return std::pow(grid()->integrate(s.array().pow(r / 2.0).matrix()), 1.0 / r);
}

TensorField& TensorField::operator+=(const TensorField& o) {
    for (int k = 0; k < 4; ++k) c[k].coef += o.c[k].coef;
    return *this;
}

TensorField& TensorField::axpy(double a, const TensorField& o) {
    for (int k = 0; k < 4; ++k) c[k].coef += a * o.c[k].coef;
    return *this;
}

double DevTensorField::norm_L2() const {
    Eigen::MatrixXd ea = a.eval(), eb = b.eval(), ec = c.eval();
    Eigen::MatrixXd s = 2.0 * ea.cwiseAbs2() + eb.cwiseAbs2() + ec.cwiseAbs2();
    return std::sqrt(grid()->integrate(s));
}

double DevTensorField::max_abs() const {
    Eigen::MatrixXd ea = a.eval(), eb = b.eval(), ec = c.eval();
    Eigen::MatrixXd s = 2.0 * ea.cwiseAbs2() + eb.cwiseAbs2() + ec.cwiseAbs2();
    return std::sqrt(s.maxCoeff());
}

double DevTensorField::norm_W1q(double q) const {
    Eigen::MatrixXd ea = a.eval(), eb = b.eval(), ec = c.eval();
    Eigen::MatrixXd val = 2.0 * ea.cwiseAbs2() + eb.cwiseAbs2() + ec.cwiseAbs2();
    Eigen::MatrixXd grd = 2.0 * (a.dx().eval().cwiseAbs2() + a.dy().eval().cwiseAbs2()) +
                          b.dx().eval().cwiseAbs2() + b.dy().eval().cwiseAbs2() +
                          c.dx().eval().cwiseAbs2() + c.dy().eval().cwiseAbs2();
    const auto& g = *grid();
    const double vq = g.integrate(val.array().pow(q / 2.0).matrix());
    const double gq = g.integrate(grd.array().pow(q / 2.0).matrix());
    return std::pow(vq + gq, 1.0 / q);
}

double integral(const Grid2& g, const Eigen::MatrixXd& nodal) { return g.integrate(nodal); }

ScalarField2 dealiased_product(const ScalarField2& a, const ScalarField2& b, Par px, Par py,
                               int mx, int my) {
    if (a.grid != b.grid) throw DimensionMismatch("product of fields on different grids");
    return ScalarField2::project(a.grid, px, py, mx, my, a.eval().cwiseProduct(b.eval()));
}

}  // namespace hypo
