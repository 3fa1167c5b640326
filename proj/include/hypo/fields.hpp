#pragma once

#include <array>
#include <optional>

#include "hypo/spectral.hpp"
#include "hypo/tensor.hpp"

// Velocity and tensor fields on the impermeable box. The velocity basis
//   v_x in span{ sin(i pi x/Lx) cos(j pi y/Ly) },  i = 1..kx, j = 0..ky,
//   v_y in span{ cos(i pi x/Lx) sin(j pi y/Ly) },  i = 0..kx, j = 1..ky
// satisfies v.n = 0 on all four walls exactly. Tensor components live in
// the all-cosine space, whose basis functions have vanishing normal
// derivative at the walls.

namespace hypo {

// Nodal bundles: component grids of size nx x ny.
using Grids2 = std::array<Eigen::MatrixXd, 2>;
using Grids3 = std::array<Eigen::MatrixXd, 3>;
using Grids4 = std::array<Eigen::MatrixXd, 4>;

enum Wall { WallBottom = 0, WallTop = 1, WallLeft = 2, WallRight = 3 };

struct VelocityField {
    ScalarField2 x;  // (Odd, Even), caps (kx, ky)
    ScalarField2 y;  // (Even, Odd)

    VelocityField() = default;
    VelocityField(GridPtr g, int kx, int ky)
        : x(g, Par::Odd, Par::Even, kx, ky), y(g, Par::Even, Par::Odd, kx, ky) {}

    int kx() const { return x.mx; }
    int ky() const { return x.my; }
    GridPtr grid() const { return x.grid; }

    Grids2 eval() const { return {x.eval(), y.eval()}; }

    /// Nodal velocity gradient, ordered (dx vx, dy vx, dx vy, dy vy).
    Grids4 grad() const {
        return {x.dx().eval(), x.dy().eval(), y.dx().eval(), y.dy().eval()};
    }

    /// Tangential trace along a wall (v_x on bottom/top, v_y on left/right).
    Eigen::VectorXd wall_tangential(Wall w) const;

    double max_abs() const {
        const auto v = eval();
        return std::max(v[0].cwiseAbs().maxCoeff(), v[1].cwiseAbs().maxCoeff());
    }
};

struct TensorField {
    std::array<ScalarField2, 4> c;  // xx, xy, yx, yy; all (Even, Even)

    TensorField() = default;
    TensorField(GridPtr g, int lx, int ly);
    static TensorField uniform(GridPtr g, int lx, int ly, const Mat2& m);
    static TensorField project_nodal(GridPtr g, int lx, int ly, const Grids4& nodal);

    int lx() const { return c[0].mx; }
    int ly() const { return c[0].my; }
    GridPtr grid() const { return c[0].grid; }

    Grids4 eval() const { return {c[0].eval(), c[1].eval(), c[2].eval(), c[3].eval()}; }
    Mat2 at(const Grids4& nodal, int ix, int iy) const {
        Mat2 m;
        m << nodal[0](ix, iy), nodal[1](ix, iy), nodal[2](ix, iy), nodal[3](ix, iy);
        return m;
    }

    Eigen::MatrixXd det_nodal() const;
    double min_det() const { return det_nodal().minCoeff(); }

    /// L2 norm of the tensor field (Frobenius under the quadrature).
    double norm_L2() const;
    /// L^r norm of the full component gradient.
    double grad_norm_Lr(double r) const;

    TensorField& operator+=(const TensorField& o);
    TensorField& axpy(double a, const TensorField& o);  // this += a * o
};

/// Trace-free tensor field L = [[a, b], [c, -a]]; tr L = 0 holds at every
/// node by construction.
struct DevTensorField {
    ScalarField2 a, b, c;  // all (Even, Even)

    DevTensorField() = default;
    DevTensorField(GridPtr g, int lx, int ly)
        : a(g, Par::Even, Par::Even, lx, ly),
          b(g, Par::Even, Par::Even, lx, ly),
          c(g, Par::Even, Par::Even, lx, ly) {}

    int lx() const { return a.mx; }
    int ly() const { return a.my; }
    GridPtr grid() const { return a.grid; }

    /// Nodal component grids as a full 2x2 tensor (xx, xy, yx, yy = -xx).
    Grids4 eval() const {
        Eigen::MatrixXd ea = a.eval();
        return {ea, b.eval(), c.eval(), -ea};
    }

    double norm_L2() const;
    double max_abs() const;
    double norm_W1q(double q) const;
};

/// <f, 1> over the box for a nodal grid (alias of Grid2::integrate).
double integral(const Grid2& g, const Eigen::MatrixXd& nodal);

/// Pointwise product projected onto the caps of the target space
/// (dealiased by the grid's 2/3-rule mode limits).
ScalarField2 dealiased_product(const ScalarField2& a, const ScalarField2& b, Par px, Par py,
                               int mx, int my);

}  // namespace hypo
