#pragma once

#include <memory>

#include "hypo/fields.hpp"
#include "hypo/materials.hpp"
#include "hypo/momentum.hpp"  // TruncationCounters, SolveReport

// Plastic-distortion-rate inclusion dzeta(L_p) - div(mu |grad L_p|^{q-2}
// grad L_p) ∍ dev(Fe^T S), solved as the convex minimization
//   min_L  ∫ zeta_delta(L) + (mu/q) |grad L|^q - D : L
// over the trace-free Galerkin tensor space; the natural boundary
// condition grad L_p . n = 0 is built into the all-cosine basis.

namespace hypo {

struct FlowProblem {
    Material material;
    double mu_grad = 1e-3;  // gradient coefficient mu
    double q_exp = 4.0;     // > d
    FlowVariant variant = FlowVariant::eshelby;
    double eps_trunc = 1e-3;
    double tol_newton = 1e-8;
    int max_iter = 60;
    double hessian_reg = 1e-8;  // delta_q in the q-Laplacian curvature
};

class PlasticFlowSolver {
  public:
    PlasticFlowSolver(GridPtr grid, int lx, int ly, FlowProblem prob);

    FlowProblem& problem() { return prob_; }
    const FlowProblem& problem() const { return prob_; }

    /// Deviatoric part of the truncated configurational stress, projected
    /// onto the trace-free tensor space.
    DevTensorField driving_stress(const TensorField& Fe, long* trunc_count = nullptr) const;

    DevTensorField solve(const TensorField& Fe, const DevTensorField& L0,
                         SolveReport* rep = nullptr);

    /// Discrete value of the flow functional at L for the driving stress
    /// of Fe: ∫ zeta_delta(L) + (mu/q)|grad L|^q - D : L. The solver's
    /// minimizer certifies the variational inequality against any
    /// admissible test field through this value.
    double functional_value(const TensorField& Fe, const DevTensorField& L) const;

    Eigen::VectorXd pack(const DevTensorField& L) const;
    DevTensorField unpack(const Eigen::VectorXd& c) const;
    int n_dofs() const { return n_; }
    GridPtr grid() const { return grid_; }

  private:
    // nodal scaled coordinates (sqrt2*a, b, c) of dev(truncated Fe^T S)
    Eigen::MatrixXd driving_nodal(const TensorField& Fe, long* trunc_count) const;
    Eigen::VectorXd gradient_with(const Eigen::VectorXd& dual, const Eigen::VectorXd& c) const;
    double objective_with(const Eigen::VectorXd& dual, const Eigen::VectorXd& c) const;
    Eigen::MatrixXd hessian(const Eigen::VectorXd& c) const;

    GridPtr grid_;
    int lx_, ly_, n_, ncomp_;
    FlowProblem prob_;

    Eigen::MatrixXd BL_;   // (3 NN) x n, scaled trace-free components per node
    Eigen::MatrixXd BgL_;  // (6 NN) x n, scaled component gradients
    Eigen::MatrixXd Kconst_;  // mu_p mass part

    struct Cache;
    std::shared_ptr<Cache> cache_;
};

}  // namespace hypo
