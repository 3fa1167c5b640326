#include "hypo/transport.hpp"

#include <cmath>

namespace hypo {

namespace {

// componentwise 2x2 product on nodal bundles: (AB)_ij = A_ik B_kj
Grids4 matmul(const Grids4& A, const Grids4& B) {
    return {A[0].cwiseProduct(B[0]) + A[1].cwiseProduct(B[2]),
            A[0].cwiseProduct(B[1]) + A[1].cwiseProduct(B[3]),
            A[2].cwiseProduct(B[0]) + A[3].cwiseProduct(B[2]),
            A[2].cwiseProduct(B[1]) + A[3].cwiseProduct(B[3])};
}

struct GradF {
    std::array<ScalarField2, 4> dx, dy;  // per-component derivative fields
};

GradF gradient_fields(const TensorField& F) {
    GradF g;
    for (int k = 0; k < 4; ++k) {
        g.dx[k] = F.c[k].dx();
        g.dy[k] = F.c[k].dy();
    }
    return g;
}

}  // namespace

TensorField rhs_Fe(const TensorField& Fe, const VelocityField& v, const DevTensorField& Lp,
                   const TransportParams& par, TensorField* reg_out) {
    const GridPtr g = Fe.grid();
    const int lx = Fe.lx(), ly = Fe.ly();

    const Grids4 F = Fe.eval();
    const Grids4 Gv = v.grad();
    const Grids2 vel = v.eval();
    const Grids4 L = Lp.eval();

    Grids4 rhs;
    if (par.variant == FlowVariant::eshelby) {
        // (grad v) Fe - Fe Lp
        rhs = matmul(Gv, F);
        const Grids4 FL = matmul(F, L);
        for (int k = 0; k < 4; ++k) rhs[k] -= FL[k];
    } else {
        // (grad v - Lp) Fe
        Grids4 GmL = Gv;
        for (int k = 0; k < 4; ++k) GmL[k] -= L[k];
        rhs = matmul(GmL, F);
    }

    const GradF dF = gradient_fields(Fe);
    for (int k = 0; k < 4; ++k) {
        rhs[k] -= vel[0].cwiseProduct(dF.dx[k].eval()) + vel[1].cwiseProduct(dF.dy[k].eval());
    }

    TensorField out = TensorField::project_nodal(g, lx, ly, rhs);

    if (par.k_inv > 0.0) {
        Eigen::MatrixXd s = Eigen::MatrixXd::Zero(g->nx, g->ny);
        std::array<Eigen::MatrixXd, 4> dxv, dyv;
        for (int k = 0; k < 4; ++k) {
            dxv[k] = dF.dx[k].eval();
            dyv[k] = dF.dy[k].eval();
            s += dxv[k].cwiseAbs2() + dyv[k].cwiseAbs2();
        }
        const Eigen::MatrixXd w =
            par.k_inv * s.array().pow(0.5 * par.r_exp - 1.0).matrix();
        TensorField reg(g, lx, ly);
        for (int k = 0; k < 4; ++k) {
            const auto fx = ScalarField2::project(g, Par::Odd, Par::Even, lx, ly,
                                                  w.cwiseProduct(dxv[k]));
            const auto fy = ScalarField2::project(g, Par::Even, Par::Odd, lx, ly,
                                                  w.cwiseProduct(dyv[k]));
            reg.c[k] = fx.dx() + fy.dy();
        }
        out += reg;
        if (reg_out) *reg_out = reg;
    } else if (reg_out) {
        *reg_out = TensorField(g, lx, ly);
    }
    return out;
}

static void stability_check(const TensorField& Fe, const VelocityField& v,
                            const TransportParams& par, double dt, double* theta_out) {
    const GridPtr g = Fe.grid();
    const Grids2 vel = v.eval();
    const double rate_adv = vel[0].cwiseAbs().maxCoeff() * M_PI * Fe.lx() / g->Lx +
                            vel[1].cwiseAbs().maxCoeff() * M_PI * Fe.ly() / g->Ly;
    const double theta = dt * rate_adv;
    if (theta_out) *theta_out = theta;
    double dt_max = (rate_adv > 0.0) ? par.cfl_limit / rate_adv
                                     : std::numeric_limits<double>::infinity();
    if (par.k_inv > 0.0) {
        Eigen::MatrixXd s = Eigen::MatrixXd::Zero(g->nx, g->ny);
        for (int k = 0; k < 4; ++k) {
            s += Fe.c[k].dx().eval().cwiseAbs2();
            s += Fe.c[k].dy().eval().cwiseAbs2();
        }
        const double diff = par.k_inv *
                            std::pow(s.maxCoeff() + 1e-300, 0.5 * par.r_exp - 1.0) *
                            (par.r_exp - 1.0) *
                            (std::pow(M_PI * Fe.lx() / g->Lx, 2) +
                             std::pow(M_PI * Fe.ly() / g->Ly, 2));
        if (diff > 0.0) dt_max = std::min(dt_max, 1.5 / diff);
    }
    if (dt > dt_max) throw CflViolation(dt, dt_max);
}

static void det_floor_check(const TensorField& Fe, double floor) {
    const Eigen::MatrixXd det = Fe.det_nodal();
    int ix = 0, iy = 0;
    const double mn = det.minCoeff(&ix, &iy);
    if (mn < floor) throw DeterminantCollapse(mn, ix, iy);
}

TransportState step(const TransportState& s, const VelocityField& v, const DevTensorField& Lp,
                    double dt, const TransportParams& par, StepMonitor* mon) {
    if (dt <= 0.0) throw ConfigError("step: dt must be positive");
    double theta = 0.0;
    stability_check(s.Fe, v, par, dt, &theta);

    TensorField reg1;
    const TensorField k1 = rhs_Fe(s.Fe, v, Lp, par, &reg1);
    TensorField mid = s.Fe;
    mid.axpy(dt, k1);
    const TensorField k2 = rhs_Fe(mid, v, Lp, par);

    TransportState out;
    out.t = s.t + dt;
    out.Fe = s.Fe;
    out.Fe.axpy(0.5 * dt, k1);
    out.Fe.axpy(0.5 * dt, k2);
    det_floor_check(out.Fe, par.det_floor);

    double iso_defect = 0.0;
    if (s.Fp) {
        out.Fp = reconstruct_Fp_step(*s.Fp, s.Fe, v, Lp, dt, par);
        iso_defect = (out.Fp->det_nodal().array() - 1.0).abs().maxCoeff();
    }

    if (mon) {
        mon->cfl_theta = theta;
        mon->min_det_Fe = out.Fe.min_det();
        mon->rhs_norm_L2 = k1.norm_L2();
        mon->reg_norm_L2 = (par.k_inv > 0.0) ? reg1.norm_L2() : 0.0;
        mon->max_iso_defect = iso_defect;
    }
    if (s.Fp && iso_defect > par.iso_tol) throw IsochoricityViolation(iso_defect);
    return out;
}

static Grids4 rhs_Fp_nodal(const Grids4& Fp, const Grids4& Fe, const Grids4& L,
                           const Grids2& vel, const std::array<ScalarField2, 4>& dxFp,
                           const std::array<ScalarField2, 4>& dyFp,
                           const TransportParams& par) {
    Grids4 rhs;
    if (par.variant == FlowVariant::eshelby) {
        rhs = matmul(L, Fp);
    } else {
        // Fe^-1 Lp Fe Fp, with the nodal 2x2 inverse taken componentwise
        const Eigen::MatrixXd det = Fe[0].cwiseProduct(Fe[3]) - Fe[1].cwiseProduct(Fe[2]);
        const Eigen::MatrixXd idet = det.cwiseInverse();
        const Grids4 Fei = {Fe[3].cwiseProduct(idet), -Fe[1].cwiseProduct(idet),
                            -Fe[2].cwiseProduct(idet), Fe[0].cwiseProduct(idet)};
        rhs = matmul(matmul(Fei, matmul(L, Fe)), Fp);
    }
    for (int k = 0; k < 4; ++k)
        rhs[k] -= vel[0].cwiseProduct(dxFp[k].eval()) + vel[1].cwiseProduct(dyFp[k].eval());
    return rhs;
}

TensorField reconstruct_Fp_step(const TensorField& Fp, const TensorField& Fe,
                                const VelocityField& v, const DevTensorField& Lp, double dt,
                                const TransportParams& par) {
    const GridPtr g = Fp.grid();
    const int lx = Fp.lx(), ly = Fp.ly();
    const Grids4 Fen = Fe.eval();
    const Grids4 L = Lp.eval();
    const Grids2 vel = v.eval();

    auto stage = [&](const TensorField& P) {
        std::array<ScalarField2, 4> dx, dy;
        for (int k = 0; k < 4; ++k) {
            dx[k] = P.c[k].dx();
            dy[k] = P.c[k].dy();
        }
        return TensorField::project_nodal(
            g, lx, ly, rhs_Fp_nodal(P.eval(), Fen, L, vel, dx, dy, par));
    };

    const TensorField k1 = stage(Fp);
    TensorField mid = Fp;
    mid.axpy(dt, k1);
    const TensorField k2 = stage(mid);

    TensorField out = Fp;
    out.axpy(0.5 * dt, k1);
    out.axpy(0.5 * dt, k2);
    return out;
}

Eigen::MatrixXd density(const TensorField& Fe, double rho0) {
    const Eigen::MatrixXd det = Fe.det_nodal();
    int ix = 0, iy = 0;
    const double mn = det.minCoeff(&ix, &iy);
    if (mn <= 0.0) throw DeterminantCollapse(mn, ix, iy);
    return rho0 * det.cwiseInverse();
}

DetMonitor det_monitor(const TensorField& Fe, double r_exp, double varkappa) {
    DetMonitor m;
    const auto& g = *Fe.grid();
    Eigen::MatrixXd val = Eigen::MatrixXd::Zero(g.nx, g.ny);
    Eigen::MatrixXd grd = Eigen::MatrixXd::Zero(g.nx, g.ny);
    for (const auto& f : Fe.c) {
        val += f.eval().cwiseAbs2();
        grd += f.dx().eval().cwiseAbs2() + f.dy().eval().cwiseAbs2();
    }
    const double vr = g.integrate(val.array().pow(r_exp / 2.0).matrix());
    const double gr = g.integrate(grd.array().pow(r_exp / 2.0).matrix());
    m.W1r_proxy = std::pow(vr + gr, 1.0 / r_exp);
    const Eigen::MatrixXd det = Fe.det_nodal();
    m.min_det = det.minCoeff();
    if (m.min_det <= 0.0) {
        m.int_det_neg_kappa = std::numeric_limits<double>::infinity();
    } else {
        m.int_det_neg_kappa = g.integrate(det.array().pow(-varkappa).matrix());
    }
    return m;
}

}  // namespace hypo
