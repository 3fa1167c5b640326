#pragma once

#include <Eigen/Dense>
#include <memory>

#include "hypo/errors.hpp"

// Trigonometric collocation on a rectangle. Nodes sit at cell midpoints,
// so the quadrature rule integrates cos(m pi x / L) exactly for every
// 0 <= m < 2n and the half-range cosine/sine families are discretely
// orthogonal. Mode caps follow the 2/3 rule so that pointwise products of
// two resolved fields project without aliasing.

namespace hypo {

enum class Par { Even, Odd };  // cosine / sine half-range expansion

/// One direction of the tensor-product basis on [0, L].
struct Basis1D {
    int n = 0;          // collocation nodes
    double length = 1.0;
    int mmax = 0;       // highest representable mode kept in the tables
    double h = 0.0;     // node spacing == quadrature weight
    Eigen::VectorXd nodes;
    Eigen::MatrixXd cos_eval;  // n x (mmax+1), entry (k,i) = cos(i pi x_k / L)
    Eigen::MatrixXd sin_eval;  // n x mmax, mode i stored in column i-1
    Eigen::MatrixXd cos_proj;  // (mmax+1) x n, discrete L2 projection
    Eigen::MatrixXd sin_proj;  // mmax x n

    static Basis1D make(int n, double length, int mmax);
};

/// Collocation grid plus the per-direction bases at full mode count.
/// Immutable and shared between all fields living on it.
struct Grid2 {
    double Lx = 1.0, Ly = 1.0;
    int nx = 0, ny = 0;
    Basis1D bx, by;
    double cell = 0.0;          // hx * hy
    int dealias_mx = 0, dealias_my = 0;  // 2/3-rule caps

    static std::shared_ptr<const Grid2> make(double Lx, double Ly, int nx, int ny);

    double integrate(const Eigen::MatrixXd& nodal) const { return cell * nodal.sum(); }
    double norm_Lp(const Eigen::MatrixXd& nodal, double p) const;
};

using GridPtr = std::shared_ptr<const Grid2>;

/// Scalar field in one of the four parity classes, stored as coefficients.
/// Rows index x-modes, columns y-modes; an Even direction holds modes
/// 0..m (m+1 coefficients), an Odd one modes 1..m.
class ScalarField2 {
  public:
    ScalarField2() = default;
    ScalarField2(GridPtr g, Par parity_x, Par parity_y, int mx, int my);

    static ScalarField2 project(GridPtr g, Par px, Par py, int mx, int my,
                                const Eigen::MatrixXd& nodal);

    Eigen::MatrixXd eval() const;
    ScalarField2 dx() const;
    ScalarField2 dy() const;

    /// Coefficient truncation / zero-padding onto new caps (nested spaces).
    ScalarField2 restricted(int new_mx, int new_my) const;

    int coef_rows() const { return px == Par::Even ? mx + 1 : mx; }
    int coef_cols() const { return py == Par::Even ? my + 1 : my; }

    GridPtr grid;
    Par px = Par::Even, py = Par::Even;
    int mx = 0, my = 0;
    Eigen::MatrixXd coef;
};

ScalarField2 operator+(const ScalarField2& a, const ScalarField2& b);
ScalarField2 operator-(const ScalarField2& a, const ScalarField2& b);
ScalarField2 operator*(double s, const ScalarField2& a);

/// Discrete L2 inner product of two fields on the same grid (exact for
/// resolved coefficients).
double inner(const ScalarField2& a, const ScalarField2& b);

}  // namespace hypo
