#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "hypo/errors.hpp"

// Damped Newton on a convex Galerkin functional. The gradient is always
// exact; the factorized Hessian is reused across iterations and across
// calls (warm starts between time steps) and rebuilt when contraction
// stalls or the line search cannot make progress.

namespace hypo::detail {

struct NewtonCache {
    Eigen::LDLT<Eigen::MatrixXd> ldlt;
    bool valid = false;
};

struct NewtonStats {
    int iterations = 0;
    int hessian_builds = 0;
    std::vector<double> residual_history;
};

struct NewtonFuncs {
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
    std::function<double(const Eigen::VectorXd&)> objective;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> hessian;
};

inline Eigen::VectorXd newton_minimize(const NewtonFuncs& f, Eigen::VectorXd u, double tol_abs,
                                       int max_iter, NewtonCache& cache, NewtonStats& stats,
                                       const std::string& label) {
    Eigen::VectorXd r = f.gradient(u);
    double rnorm = r.norm();
    stats.residual_history.push_back(rnorm);

    for (int it = 0; it < max_iter; ++it) {
        if (rnorm <= tol_abs) return u;
        if (!cache.valid) {
            cache.ldlt.compute(f.hessian(u));
            cache.valid = true;
            ++stats.hessian_builds;
        }
        Eigen::VectorXd d = cache.ldlt.solve(-r);
        double slope = d.dot(r);
        if (!(slope < 0.0)) {
            // stale or indefinite factorization; rebuild once at the current point
            cache.ldlt.compute(f.hessian(u));
            ++stats.hessian_builds;
            d = cache.ldlt.solve(-r);
            slope = d.dot(r);
            if (!(slope < 0.0)) throw SolverDivergence(label, stats.residual_history);
        }

        const double J0 = f.objective(u);
        double alpha = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            if (f.objective(u + alpha * d) <= J0 + 1e-4 * alpha * slope) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
            if (alpha < 1e-10) break;
        }
        if (!accepted) {
            if (stats.hessian_builds > 8) throw SolverDivergence(label, stats.residual_history);
            cache.valid = false;  // retry with a fresh Hessian
            continue;
        }

        u += alpha * d;
        const double prev = rnorm;
        r = f.gradient(u);
        rnorm = r.norm();
        stats.residual_history.push_back(rnorm);
        ++stats.iterations;

        // refresh when the frozen Hessian stops contracting well
        if (rnorm > 0.3 * prev && rnorm > tol_abs) cache.valid = false;
    }
    if (rnorm <= tol_abs) return u;
    throw SolverDivergence(label, stats.residual_history);
}

}  // namespace hypo::detail
