#pragma once

#include <Eigen/Dense>
#include <random>

#include "hypo/spectral.hpp"

// Shared helpers for the test suites: deterministic RNG streams, random
// matrices/rotations, and small factories.

namespace hypotest {

inline std::mt19937_64 rng(unsigned seed = 7u) { return std::mt19937_64(seed); }

inline Eigen::MatrixXd random_matrix(std::mt19937_64& g, int d, double scale = 1.0) {
    std::normal_distribution<double> nd(0.0, scale);
    Eigen::MatrixXd m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = nd(g);
    return m;
}

inline Eigen::Matrix2d random_rotation2(std::mt19937_64& g) {
    std::uniform_real_distribution<double> ud(0.0, 2.0 * M_PI);
    const double th = ud(g);
    Eigen::Matrix2d r;
    r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    return r;
}

inline Eigen::Matrix3d random_rotation3(std::mt19937_64& g) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::Quaterniond q(nd(g), nd(g), nd(g), nd(g));
    q.normalize();
    return q.toRotationMatrix();
}

/// Random deformation with determinant bounded into [lo, hi].
inline Eigen::MatrixXd random_deformation(std::mt19937_64& g, int d, double lo = 0.5,
                                          double hi = 2.0) {
    std::uniform_real_distribution<double> ud(lo, hi);
    for (;;) {
        Eigen::MatrixXd F =
            Eigen::MatrixXd::Identity(d, d) + random_matrix(g, d, 0.3);
        const double det = F.determinant();
        if (det >= lo && det <= hi) return F;
    }
}

inline hypo::GridPtr grid(int n = 16, double Lx = 1.0, double Ly = 1.0) {
    return hypo::Grid2::make(Lx, Ly, n, n);
}

}  // namespace hypotest
