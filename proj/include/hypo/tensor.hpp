#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "hypo/errors.hpp"

// Dense d x d matrix algebra (d = 2 or 3 at runtime) and the exact
// calculus identities the rest of the library rests on: the ":" double
// contraction, deviatoric/symmetric splits, and det/cof/inv with the
// cofactor taken from the explicit adjugate so it stays defined for
// singular arguments.

namespace hypo {

using Mat = Eigen::MatrixXd;
using Mat2 = Eigen::Matrix2d;

/// Frobenius double contraction a : b = sum_ij a_ij b_ij.
template <typename DA, typename DB>
double double_contract(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("double_contract: operand shapes differ");
    return a.cwiseProduct(b).sum();
}

template <typename D>
double tr(const Eigen::MatrixBase<D>& a) {
    return a.trace();
}

/// Trace-free part, dev(a) = a - (tr a / d) I.
template <typename D>
auto dev(const Eigen::MatrixBase<D>& a) {
    using Plain = typename D::PlainObject;
    Plain out = a;
    const double mean = a.trace() / static_cast<double>(a.rows());
    for (Eigen::Index i = 0; i < a.rows(); ++i) out(i, i) -= mean;
    return out;
}

template <typename D>
auto sym(const Eigen::MatrixBase<D>& a) {
    using Plain = typename D::PlainObject;
    return Plain(0.5 * (a + a.transpose()));
}

template <typename D>
bool all_finite(const Eigen::MatrixBase<D>& a) {
    return a.allFinite();
}

/// Explicit adjugate-transpose: cof(a)_ij = d det(a) / d a_ij.
/// Defined for every square 2x2 / 3x3 matrix, singular ones included.
template <typename D>
typename D::PlainObject cofactor(const Eigen::MatrixBase<D>& a) {
    typename D::PlainObject c(a.rows(), a.cols());
    if (a.rows() == 2) {
        c(0, 0) = a(1, 1);
        c(0, 1) = -a(1, 0);
        c(1, 0) = -a(0, 1);
        c(1, 1) = a(0, 0);
    } else if (a.rows() == 3) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const int i1 = (i + 1) % 3, i2 = (i + 2) % 3;
                const int j1 = (j + 1) % 3, j2 = (j + 2) % 3;
                c(i, j) = a(i1, j1) * a(i2, j2) - a(i1, j2) * a(i2, j1);
            }
    } else {
        throw DimensionMismatch("cofactor: only d = 2 or 3 supported");
    }
    return c;
}

struct DetCofInv {
    double det;
    Mat cof;
    Mat inv;
};

/// Determinant, cofactor matrix and inverse in one sweep.
/// det and cof are always produced; asking for inv of a singular matrix
/// raises SingularMatrix carrying the determinant value.
template <typename D>
DetCofInv det_cof_inv(const Eigen::MatrixBase<D>& a, bool want_inverse = true) {
    DetCofInv r;
    r.cof = cofactor(a);
    r.det = (a.rows() == 2) ? a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)
                            : a(0, 0) * r.cof(0, 0) + a(0, 1) * r.cof(0, 1) + a(0, 2) * r.cof(0, 2);
    if (want_inverse) {
        if (r.det == 0.0 || !std::isfinite(r.det)) throw SingularMatrix(r.det);
        r.inv = r.cof.transpose() / r.det;
    }
    return r;
}

template <typename D>
double determinant(const Eigen::MatrixBase<D>& a) {
    if (a.rows() == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    return det_cof_inv(a, false).det;
}

/// 2x2 inverse without the DetCofInv detour; hot path of the transport rhs.
inline Mat2 inv2(const Mat2& a) {
    const double d = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    if (d == 0.0 || !std::isfinite(d)) throw SingularMatrix(d);
    Mat2 r;
    r << a(1, 1), -a(0, 1), -a(1, 0), a(0, 0);
    return r / d;
}

}  // namespace hypo
