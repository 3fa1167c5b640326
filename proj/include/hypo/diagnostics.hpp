#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "hypo/momentum.hpp"
#include "hypo/plastic_flow.hpp"
#include "hypo/transport.hpp"

// Observable energetics: every term of the energy-dissipation balance as a
// time series, the a-priori-estimate quantities as monitored norms, and the
// classical-model cross-check recomputed from the reconstructed plastic
// distortion.

namespace hypo {

struct EnergyLedger {
    double stored = 0.0;          // ∫ phi(Fe)
    double visc_rate = 0.0;       // ∫ xi'(e(v)) : e(v)
    double plast_rate = 0.0;      // ∫ dzeta_delta(Lp) : Lp
    double grad_rate_v = 0.0;     // nu |grad e(v)|_p^p
    double grad_rate_L = 0.0;     // mu |grad Lp|_q^q
    double boundary_rate = 0.0;   // ∫_Gamma kappa |v|^2
    double load_power = 0.0;      // ∫ rho g . v
    double traction_power = 0.0;  // ∫_Gamma f . v
    // k^-1 regularizer bookkeeping (not part of the balance residual)
    double reg_power = 0.0;
    double reg_norm_L2 = 0.0;
    double rhs_norm_L2 = 0.0;
    // filled by fill_time_derivatives once neighbours are known
    double dstored_dt = std::numeric_limits<double>::quiet_NaN();
    double balance_residual = std::numeric_limits<double>::quiet_NaN();
};

EnergyLedger ledger(const TensorField& Fe, const VelocityField& v, const DevTensorField& Lp,
                    const MomentumProblem& mp, const FlowProblem& fp,
                    const TransportParams& tp);

/// One row per accepted step of a run.
struct HistoryRow {
    int step = 0;
    double t = 0.0, dt = 0.0;
    EnergyLedger en;
    // velocity / plastic-rate norms
    double v_rms = 0.0, v_max = 0.0, gradv_inf = 0.0, grad_e_Lp = 0.0;
    double Lp_rms = 0.0, Lp_inf = 0.0, Lp_W1q = 0.0, yield_fraction = 0.0;
    // elastic-strain monitors
    double Fe_L2 = 0.0, gradFe_Lr = 0.0, Fe_W1r_proxy = 0.0;
    double int_det_negk = 0.0, min_det = 0.0, max_dev_I = 0.0;
    double gronwall_lhs = 0.0, gronwall_rhs = 0.0;
    double iso_defect = 0.0;
    // volume-averaged shear observables
    double avg_T_xy = 0.0, avg_gamma_e = 0.0, avg_rate_gamma = 0.0;
    double reg_share = 0.0;
    double cfl_theta = 0.0;
    long trunc_stress = 0, trunc_pressure = 0, trunc_density = 0, trunc_eshelby = 0;
    int iters_momentum = 0, iters_plastic = 0;
    double resid_momentum = 0.0, resid_plastic = 0.0;
    double vi_slack_min = std::numeric_limits<double>::quiet_NaN();
};

/// Centered differences of the stored energy across accepted steps
/// (one-sided at the ends) and the resulting balance residual.
void fill_time_derivatives(std::vector<HistoryRow>& h);

void write_csv(std::ostream& os, const std::vector<HistoryRow>& h);
std::string csv_header();

struct AprioriReport {
    bool gronwall_ok = true;
    double gronwall_worst_margin = 0.0;  // min over steps of rhs*(1+tol) - lhs
    bool det_floor_ok = true;
    double min_det = 0.0;
    long trunc_total = 0;
    double max_grad_e_Lp = 0.0;
    double max_Lp_W1q = 0.0;
    double max_Fe_W1r = 0.0;
    double max_int_det_negk = 0.0;
    double max_abs_balance_residual = 0.0;
    double balance_residual_L1 = 0.0;  // time-integrated |residual|
};

AprioriReport apriori_report(const std::vector<HistoryRow>& h, double det_floor,
                             double gronwall_rel_tol = 1e-6);

/// Recompute the classical two-field ledger terms from (F, Fp) and compare
/// with the hypoplastic ones. dFp/dt is taken by centered differences of
/// the reconstructed snapshots plus the convective correction.
struct ClassicalCheck {
    double stored_hypo = 0.0, stored_classical = 0.0;
    double plast_rate_hypo = 0.0, plast_rate_classical = 0.0;
    double max_Lp_mismatch = 0.0;  // |reconstructed rate - Lp|_inf
};

ClassicalCheck classical_crosscheck(const TensorField& Fe, const TensorField& Fp_prev,
                                    const TensorField& Fp, const TensorField& Fp_next,
                                    const VelocityField& v, const DevTensorField& Lp,
                                    const Material& mat, double dt);

}  // namespace hypo
