#pragma once

#include <optional>

#include "hypo/fields.hpp"
#include "hypo/materials.hpp"

// Time advance of the elastic strain,
//   dFe/dt = (grad v) Fe - Fe Lp - (v.grad) Fe + k^-1 div(|grad Fe|^{r-2} grad Fe),
// by explicit SSP-RK2 with pseudo-spectral (dealiased) products, plus the
// a-posteriori reconstruction dFp/dt = Lp Fp - (v.grad) Fp and the density
// formula rho = rho0 / det Fe. The determinant floor acts as the runtime
// counterpart of the Healey-Kroemer bound.

namespace hypo {

struct TransportParams {
    double k_inv = 0.0;  // regularizer weight 1/k
    double r_exp = 4.0;
    double det_floor = 1e-3;
    double iso_tol = 1e-6;
    double cfl_limit = 0.9;
    FlowVariant variant = FlowVariant::eshelby;
};

struct TransportState {
    TensorField Fe;
    std::optional<TensorField> Fp;
    double t = 0.0;
};

struct StepMonitor {
    double min_det_Fe = 0.0;
    double cfl_theta = 0.0;       // advective Courant number of the step
    double rhs_norm_L2 = 0.0;     // |dFe/dt|_L2 at the first stage
    double reg_norm_L2 = 0.0;     // |k^-1 div(...)|_L2 at the first stage
    double max_iso_defect = 0.0;  // max |det Fp - 1| after the step
};

/// Full right-hand side of the elastic-strain evolution, projected back
/// onto the tensor space. reg_out, when given, receives the regularizer
/// contribution alone.
TensorField rhs_Fe(const TensorField& Fe, const VelocityField& v, const DevTensorField& Lp,
                   const TransportParams& par, TensorField* reg_out = nullptr);

/// One SSP-RK2 step of Fe (and of Fp when tracked). Rejects the step when
/// the advective/diffusive stability estimate or the determinant floor is
/// violated.
TransportState step(const TransportState& s, const VelocityField& v, const DevTensorField& Lp,
                    double dt, const TransportParams& par, StepMonitor* mon = nullptr);

/// One SSP-RK2 step of the reconstruction rule alone.
TensorField reconstruct_Fp_step(const TensorField& Fp, const TensorField& Fe,
                                const VelocityField& v, const DevTensorField& Lp, double dt,
                                const TransportParams& par);

/// rho = rho0 / det Fe, nodal.
Eigen::MatrixXd density(const TensorField& Fe, double rho0);

/// Quantities feeding Lemma 4.1: (W^{1,r} proxy, integral of det^-varkappa).
struct DetMonitor {
    double W1r_proxy = 0.0;
    double int_det_neg_kappa = 0.0;
    double min_det = 0.0;
};
DetMonitor det_monitor(const TensorField& Fe, double r_exp, double varkappa);

}  // namespace hypo
