#include "hypo/diagnostics.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace hypo {

EnergyLedger ledger(const TensorField& Fe, const VelocityField& v, const DevTensorField& Lp,
                    const MomentumProblem& mp, const FlowProblem& fp,
                    const TransportParams& tp) {
    EnergyLedger L;
    const auto& g = *Fe.grid();
    const auto& mat = mp.material;

    // stored energy and (for the regularizer power) phi'
    const Grids4 F = Fe.eval();
    Eigen::MatrixXd phi_v(g.nx, g.ny);
    Grids4 phi_p;
    const bool want_reg = tp.k_inv > 0.0;
    if (want_reg)
        for (auto& m : phi_p) m.resize(g.nx, g.ny);
    for (int ix = 0; ix < g.nx; ++ix)
        for (int iy = 0; iy < g.ny; ++iy) {
            Mat2 Fm;
            Fm << F[0](ix, iy), F[1](ix, iy), F[2](ix, iy), F[3](ix, iy);
            phi_v(ix, iy) = mat.stored.phi(Fm);
            if (want_reg) {
                const Mat2 S = mat.stored.phi_prime(Fm);
                phi_p[0](ix, iy) = S(0, 0);
                phi_p[1](ix, iy) = S(0, 1);
                phi_p[2](ix, iy) = S(1, 0);
                phi_p[3](ix, iy) = S(1, 1);
            }
        }
    L.stored = g.integrate(phi_v);

    // viscous rate: xi'(e) : e = lam (tr e)^2 + 2 mu |dev e|^2
    const Grids4 Gv = v.grad();
    const Eigen::MatrixXd t = Gv[0] + Gv[3];
    const Eigen::MatrixXd dsh = Gv[0] - Gv[3];
    const Eigen::MatrixXd gxy = Gv[1] + Gv[2];
    // |dev e|^2 = dsh^2/2 + gxy^2/2 in velocity-gradient components
    const auto& vis = mat.viscous;
    L.visc_rate = g.integrate(vis.vol_viscosity * t.cwiseAbs2() +
                              vis.shear_viscosity * (dsh.cwiseAbs2() + gxy.cwiseAbs2()));

    // plastic rate: (sigma_y / s + mu_p) |L|^2
    const auto& pl = mat.plastic;
    {
        Eigen::MatrixXd ea = Lp.a.eval(), eb = Lp.b.eval(), ec = Lp.c.eval();
        Eigen::MatrixXd n2 = 2.0 * ea.cwiseAbs2() + eb.cwiseAbs2() + ec.cwiseAbs2();
        const double d = pl.moreau_yosida_delta;
        Eigen::MatrixXd s = (n2.array() + d * d).sqrt().matrix();
        L.plast_rate = g.integrate(
            ((pl.yield_stress * s.cwiseInverse().array() + pl.plastic_viscosity) * n2.array())
                .matrix());
    }

    // gradient dissipation rates (full powers)
    {
        // |grad e(v)|^2 from second derivatives of the velocity field
        const ScalarField2 exx = v.x.dx(), eyy = v.y.dy();
        Eigen::MatrixXd exy_x = 0.5 * (v.x.dy().dx().eval() + v.y.dx().dx().eval());
        Eigen::MatrixXd exy_y = 0.5 * (v.x.dy().dy().eval() + v.y.dx().dy().eval());
        Eigen::MatrixXd s = exx.dx().eval().cwiseAbs2() + exx.dy().eval().cwiseAbs2() +
                            eyy.dx().eval().cwiseAbs2() + eyy.dy().eval().cwiseAbs2() +
                            2.0 * (exy_x.cwiseAbs2() + exy_y.cwiseAbs2());
        L.grad_rate_v = mp.nu * g.integrate(s.array().pow(0.5 * mp.p_exp).matrix());

        Eigen::MatrixXd sL =
            2.0 * (Lp.a.dx().eval().cwiseAbs2() + Lp.a.dy().eval().cwiseAbs2()) +
            Lp.b.dx().eval().cwiseAbs2() + Lp.b.dy().eval().cwiseAbs2() +
            Lp.c.dx().eval().cwiseAbs2() + Lp.c.dy().eval().cwiseAbs2();
        L.grad_rate_L = fp.mu_grad * g.integrate(sL.array().pow(0.5 * fp.q_exp).matrix());
    }

    // boundary dissipation and traction power
    const std::array<double, 4> wall_h = {g.bx.h, g.bx.h, g.by.h, g.by.h};
    for (int w = 0; w < 4; ++w) {
        const Eigen::VectorXd tw = v.wall_tangential(static_cast<Wall>(w));
        L.boundary_rate += mp.kappa_friction * wall_h[w] * tw.squaredNorm();
        L.traction_power += wall_h[w] * mp.f_wall[w] * tw.sum();
    }

    // bulk load power with the physical density
    {
        const Eigen::MatrixXd rho = density(Fe, mp.rho0);
        const Grids2 vel = v.eval();
        L.load_power =
            g.integrate(rho.cwiseProduct(mp.g[0] * vel[0] + mp.g[1] * vel[1]));
    }

    if (want_reg) {
        TensorField reg;
        const TensorField rhs = rhs_Fe(Fe, v, Lp, tp, &reg);
        L.rhs_norm_L2 = rhs.norm_L2();
        L.reg_norm_L2 = reg.norm_L2();
        const Grids4 regn = reg.eval();
        Eigen::MatrixXd dot = Eigen::MatrixXd::Zero(g.nx, g.ny);
        for (int k = 0; k < 4; ++k) dot += regn[k].cwiseProduct(phi_p[k]);
        L.reg_power = g.integrate(dot);
    } else {
        const TensorField rhs = rhs_Fe(Fe, v, Lp, tp);
        L.rhs_norm_L2 = rhs.norm_L2();
    }
    return L;
}

void fill_time_derivatives(std::vector<HistoryRow>& h) {
    const int n = static_cast<int>(h.size());
    if (n < 2) return;
    for (int i = 0; i < n; ++i) {
        double d;
        if (i == 0)
            d = (h[1].en.stored - h[0].en.stored) / (h[1].t - h[0].t);
        else if (i == n - 1)
            d = (h[n - 1].en.stored - h[n - 2].en.stored) / (h[n - 1].t - h[n - 2].t);
        else
            d = (h[i + 1].en.stored - h[i - 1].en.stored) / (h[i + 1].t - h[i - 1].t);
        h[i].en.dstored_dt = d;
        h[i].en.balance_residual = d + h[i].en.visc_rate + h[i].en.plast_rate +
                                   h[i].en.grad_rate_v + h[i].en.grad_rate_L +
                                   h[i].en.boundary_rate - h[i].en.load_power -
                                   h[i].en.traction_power;
    }
}

std::string csv_header() {
    return "step,t,dt,stored,visc_rate,plast_rate,grad_rate_v,grad_rate_L,boundary_rate,"
           "load_power,traction_power,reg_power,reg_norm_L2,rhs_norm_L2,dstored_dt,"
           "balance_residual,v_rms,v_max,gradv_inf,grad_e_Lp,Lp_rms,Lp_inf,Lp_W1q,"
           "yield_fraction,Fe_L2,gradFe_Lr,Fe_W1r_proxy,int_det_negk,min_det,max_dev_I,"
           "gronwall_lhs,gronwall_rhs,iso_defect,avg_T_xy,avg_gamma_e,avg_rate_gamma,"
           "reg_share,cfl_theta,trunc_stress,trunc_pressure,trunc_density,trunc_eshelby,"
           "iters_momentum,iters_plastic,resid_momentum,resid_plastic,vi_slack_min";
}

void write_csv(std::ostream& os, const std::vector<HistoryRow>& h) {
    os << csv_header() << "\n";
    std::ostringstream ss;
    ss.precision(17);
    for (const auto& r : h) {
        ss.str("");
        ss << r.step << ',' << r.t << ',' << r.dt << ',' << r.en.stored << ','
           << r.en.visc_rate << ',' << r.en.plast_rate << ',' << r.en.grad_rate_v << ','
           << r.en.grad_rate_L << ',' << r.en.boundary_rate << ',' << r.en.load_power << ','
           << r.en.traction_power << ',' << r.en.reg_power << ',' << r.en.reg_norm_L2 << ','
           << r.en.rhs_norm_L2 << ',' << r.en.dstored_dt << ',' << r.en.balance_residual << ','
           << r.v_rms << ',' << r.v_max << ',' << r.gradv_inf << ',' << r.grad_e_Lp << ','
           << r.Lp_rms << ',' << r.Lp_inf << ',' << r.Lp_W1q << ',' << r.yield_fraction << ','
           << r.Fe_L2 << ',' << r.gradFe_Lr << ',' << r.Fe_W1r_proxy << ','
           << r.int_det_negk << ',' << r.min_det << ',' << r.max_dev_I << ','
           << r.gronwall_lhs << ',' << r.gronwall_rhs << ',' << r.iso_defect << ','
           << r.avg_T_xy << ',' << r.avg_gamma_e << ',' << r.avg_rate_gamma << ','
           << r.reg_share << ',' << r.cfl_theta << ',' << r.trunc_stress << ','
           << r.trunc_pressure << ',' << r.trunc_density << ',' << r.trunc_eshelby << ','
           << r.iters_momentum << ',' << r.iters_plastic << ',' << r.resid_momentum << ','
           << r.resid_plastic << ',' << r.vi_slack_min;
        os << ss.str() << "\n";
    }
}

AprioriReport apriori_report(const std::vector<HistoryRow>& h, double det_floor,
                             double gronwall_rel_tol) {
    AprioriReport r;
    if (h.empty()) return r;
    r.min_det = h[0].min_det;
    r.gronwall_worst_margin = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < h.size(); ++i) {
        const auto& row = h[i];
        const double margin = row.gronwall_rhs * (1.0 + gronwall_rel_tol) - row.gronwall_lhs;
        if (margin < r.gronwall_worst_margin) r.gronwall_worst_margin = margin;
        if (margin < 0.0) r.gronwall_ok = false;
        r.min_det = std::min(r.min_det, row.min_det);
        r.trunc_total += row.trunc_stress + row.trunc_pressure + row.trunc_density +
                         row.trunc_eshelby;
        r.max_grad_e_Lp = std::max(r.max_grad_e_Lp, row.grad_e_Lp);
        r.max_Lp_W1q = std::max(r.max_Lp_W1q, row.Lp_W1q);
        r.max_Fe_W1r = std::max(r.max_Fe_W1r, row.Fe_W1r_proxy);
        r.max_int_det_negk = std::max(r.max_int_det_negk, row.int_det_negk);
        if (std::isfinite(row.en.balance_residual)) {
            r.max_abs_balance_residual =
                std::max(r.max_abs_balance_residual, std::abs(row.en.balance_residual));
            if (i + 1 < h.size())
                r.balance_residual_L1 += std::abs(row.en.balance_residual) * row.dt;
        }
    }
    r.det_floor_ok = r.min_det >= det_floor;
    return r;
}

ClassicalCheck classical_crosscheck(const TensorField& Fe, const TensorField& Fp_prev,
                                    const TensorField& Fp, const TensorField& Fp_next,
                                    const VelocityField& v, const DevTensorField& Lp,
                                    const Material& mat, double dt) {
    ClassicalCheck out;
    const auto& g = *Fe.grid();
    const Grids4 fe = Fe.eval();
    const Grids4 fp = Fp.eval();
    const Grids4 fpp = Fp_prev.eval();
    const Grids4 fpn = Fp_next.eval();
    const Grids2 vel = v.eval();
    const Grids4 lp = Lp.eval();

    std::array<Eigen::MatrixXd, 4> dxp, dyp;
    for (int k = 0; k < 4; ++k) {
        dxp[k] = Fp.c[k].dx().eval();
        dyp[k] = Fp.c[k].dy().eval();
    }

    Eigen::MatrixXd stored_h(g.nx, g.ny), stored_c(g.nx, g.ny);
    Eigen::MatrixXd rate_h(g.nx, g.ny), rate_c(g.nx, g.ny);
    double max_mismatch = 0.0;
    for (int ix = 0; ix < g.nx; ++ix)
        for (int iy = 0; iy < g.ny; ++iy) {
            Mat2 FE, FP, Lpm;
            FE << fe[0](ix, iy), fe[1](ix, iy), fe[2](ix, iy), fe[3](ix, iy);
            FP << fp[0](ix, iy), fp[1](ix, iy), fp[2](ix, iy), fp[3](ix, iy);
            Lpm << lp[0](ix, iy), lp[1](ix, iy), lp[2](ix, iy), lp[3](ix, iy);
            const Mat2 F = FE * FP;
            const Mat2 FPi = inv2(FP);
            const Mat2 FE_back = F * FPi;
            stored_h(ix, iy) = mat.stored.phi(FE);
            stored_c(ix, iy) = mat.stored.phi(FE_back);

            Mat2 dFp;
            for (int k = 0; k < 4; ++k) {
                const double dtc = (fpn[k](ix, iy) - fpp[k](ix, iy)) / (2.0 * dt);
                const double conv =
                    vel[0](ix, iy) * dxp[k](ix, iy) + vel[1](ix, iy) * dyp[k](ix, iy);
                dFp(k / 2, k % 2) = dtc + conv;
            }
            Mat2 Lhat = dev(Mat2(dFp * FPi));
            max_mismatch = std::max(max_mismatch, (Lhat - Lpm).cwiseAbs().maxCoeff());
            rate_h(ix, iy) = double_contract(mat.plastic.zeta_delta_prime(Lpm), Lpm);
            rate_c(ix, iy) = double_contract(mat.plastic.zeta_delta_prime(Lhat), Lhat);
        }
    out.stored_hypo = g.integrate(stored_h);
    out.stored_classical = g.integrate(stored_c);
    out.plast_rate_hypo = g.integrate(rate_h);
    out.plast_rate_classical = g.integrate(rate_c);
    out.max_Lp_mismatch = max_mismatch;
    return out;
}

}  // namespace hypo
