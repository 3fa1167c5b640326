#pragma once

#include <memory>
#include <vector>

#include "hypo/fields.hpp"
#include "hypo/materials.hpp"

// Quasistatic momentum balance div(T - div H) + rho g = 0 in Galerkin-weak
// form on the velocity space, with the eps-truncated elastic stress and
// density, the p-growth hyperstress, and Navier boundary friction. For
// fixed F_e the problem is the gradient of a convex incremental potential
// in v, which is what the solver minimizes.

namespace hypo {

struct MomentumProblem {
    Material material;
    double nu = 1e-3;    // hyperstress coefficient
    double p_exp = 4.0;  // > d
    double kappa_friction = 1.0;
    Eigen::Vector2d g{0.0, 0.0};
    std::array<double, 4> f_wall{0.0, 0.0, 0.0, 0.0};  // tangential traction per wall
    double rho0 = 1.0;
    double eps_trunc = 1e-3;
    double tol_newton = 1e-8;
    int max_iter = 50;
    double hessian_reg = 1e-8;
};

struct TruncationCounters {
    long stress = 0;   // |phi'(Fe) Fe^T| cap
    long pressure = 0; // phi(Fe) cap
    long density = 0;  // det Fe floor in rho_eps
    long eshelby = 0;  // |Fe^T phi'(Fe)| cap (plastic driving stress)
    long total() const { return stress + pressure + density + eshelby; }
    TruncationCounters& operator+=(const TruncationCounters& o) {
        stress += o.stress;
        pressure += o.pressure;
        density += o.density;
        eshelby += o.eshelby;
        return *this;
    }
};

struct SolveReport {
    int iterations = 0;
    int hessian_builds = 0;
    std::vector<double> residual_history;
    double residual_norm = 0.0;     // final |R|_2
    double residual_max_rel = 0.0;  // max_i |R_i| / scale (Galerkin orthogonality)
    double scale = 1.0;
    TruncationCounters trunc;
};

class MomentumSolver {
  public:
    MomentumSolver(GridPtr grid, int kx, int ky, MomentumProblem prob);

    MomentumProblem& problem() { return prob_; }
    const MomentumProblem& problem() const { return prob_; }

    /// Galerkin residual of the regularized weak identity, one entry per
    /// velocity basis function.
    Eigen::VectorXd residual(const VelocityField& v, const TensorField& Fe,
                             TruncationCounters* tc = nullptr) const;

    VelocityField solve(const TensorField& Fe, const VelocityField& v0,
                        SolveReport* rep = nullptr);

    Eigen::VectorXd pack(const VelocityField& v) const;
    VelocityField unpack(const Eigen::VectorXd& u) const;
    int n_dofs() const { return n_; }
    GridPtr grid() const { return grid_; }

  private:
    struct StressState {
        Eigen::MatrixXd T_el;  // 4 x NN truncated elastic Cauchy stress
        Eigen::MatrixXd rho;   // 1 x NN truncated density
        TruncationCounters trunc;
    };
    StressState stress_state(const TensorField& Fe) const;
    Eigen::VectorXd residual_with(const StressState& ss, const Eigen::VectorXd& u) const;
    double objective_with(const StressState& ss, const Eigen::VectorXd& u,
                          const Eigen::VectorXd& load) const;
    Eigen::VectorXd load_vector(const StressState& ss) const;
    Eigen::MatrixXd hessian(const Eigen::VectorXd& u) const;

    GridPtr grid_;
    int kx_, ky_, n_;
    MomentumProblem prob_;

    Eigen::MatrixXd Bval_;   // (2 NN) x n, node-major rows
    Eigen::MatrixXd Bgrad_;  // (4 NN) x n
    Eigen::MatrixXd Bge_;    // (6 NN) x n, weighted strain-gradient components
    std::array<Eigen::MatrixXd, 4> Bwall_;
    std::array<double, 4> wall_h_;
    Eigen::MatrixXd Kconst_;  // viscous + boundary quadratic part

    struct Cache;
    std::shared_ptr<Cache> cache_;
};

}  // namespace hypo
