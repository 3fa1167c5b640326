#include "hypo/momentum.hpp"

#include <cmath>

#include "newton.hpp"

namespace hypo {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;

// Fill rows (node * stride + comp) of B with the outer product scale * X Y^T.
void scatter(Eigen::MatrixXd& B, int col, int stride, int comp, double scale,
             const Eigen::VectorXd& X, const Eigen::VectorXd& Y) {
    if (scale == 0.0) return;
    const int nx = static_cast<int>(X.size()), ny = static_cast<int>(Y.size());
    for (int ix = 0; ix < nx; ++ix) {
        const double sx = scale * X[ix];
        if (sx == 0.0) continue;
        for (int iy = 0; iy < ny; ++iy) B((ix * ny + iy) * stride + comp, col) = sx * Y[iy];
    }
}
}  // namespace

struct MomentumSolver::Cache {
    detail::NewtonCache newton;
};

MomentumSolver::MomentumSolver(GridPtr grid, int kx, int ky, MomentumProblem prob)
    : grid_(std::move(grid)), kx_(kx), ky_(ky), prob_(std::move(prob)),
      cache_(std::make_shared<Cache>()) {
    const auto& bx = grid_->bx;
    const auto& by = grid_->by;
    const int nx = grid_->nx, ny = grid_->ny, NN = nx * ny;
    n_ = kx_ * (ky_ + 1) + (kx_ + 1) * ky_;

    Bval_ = Eigen::MatrixXd::Zero(2 * NN, n_);
    Bgrad_ = Eigen::MatrixXd::Zero(4 * NN, n_);
    Bge_ = Eigen::MatrixXd::Zero(6 * NN, n_);
    for (int w = 0; w < 4; ++w)
        Bwall_[w] = Eigen::MatrixXd::Zero(w < 2 ? nx : ny, n_);
    wall_h_ = {bx.h, bx.h, by.h, by.h};

    const Eigen::VectorXd zx = Eigen::VectorXd::Zero(nx), zy = Eigen::VectorXd::Zero(ny);
    int col = 0;
    // v_x dofs: sin_i cos_j
    for (int i = 1; i <= kx_; ++i) {
        const double wx = i * M_PI / grid_->Lx;
        const Eigen::VectorXd Xs = bx.sin_eval.col(i - 1), Xc = bx.cos_eval.col(i);
        for (int j = 0; j <= ky_; ++j, ++col) {
            const double wy = j * M_PI / grid_->Ly;
            const Eigen::VectorXd Yc = by.cos_eval.col(j);
            const Eigen::VectorXd Ys = j >= 1 ? Eigen::VectorXd(by.sin_eval.col(j - 1)) : zy;
            scatter(Bval_, col, 2, 0, 1.0, Xs, Yc);
            scatter(Bgrad_, col, 4, 0, wx, Xc, Yc);    // dx vx
            scatter(Bgrad_, col, 4, 1, -wy, Xs, Ys);   // dy vx
            scatter(Bge_, col, 6, 0, -wx * wx, Xs, Yc);
            scatter(Bge_, col, 6, 1, -wx * wy, Xc, Ys);
            scatter(Bge_, col, 6, 2, -wx * wy / kSqrt2, Xc, Ys);
            scatter(Bge_, col, 6, 3, -wy * wy / kSqrt2, Xs, Yc);
            for (int ix = 0; ix < nx; ++ix) {
                Bwall_[WallBottom](ix, col) += Xs[ix];
                Bwall_[WallTop](ix, col) += Xs[ix] * ((j % 2 == 0) ? 1.0 : -1.0);
            }
        }
    }
    // v_y dofs: cos_i sin_j
    for (int i = 0; i <= kx_; ++i) {
        const double wx = i * M_PI / grid_->Lx;
        const Eigen::VectorXd Xc = bx.cos_eval.col(i);
        const Eigen::VectorXd Xs = i >= 1 ? Eigen::VectorXd(bx.sin_eval.col(i - 1)) : zx;
        for (int j = 1; j <= ky_; ++j, ++col) {
            const double wy = j * M_PI / grid_->Ly;
            const Eigen::VectorXd Yc = by.cos_eval.col(j), Ys = by.sin_eval.col(j - 1);
            scatter(Bval_, col, 2, 1, 1.0, Xc, Ys);
            scatter(Bgrad_, col, 4, 2, -wx, Xs, Ys);   // dx vy
            scatter(Bgrad_, col, 4, 3, wy, Xc, Yc);    // dy vy
            scatter(Bge_, col, 6, 2, -wx * wx / kSqrt2, Xc, Ys);
            scatter(Bge_, col, 6, 3, -wx * wy / kSqrt2, Xs, Yc);
            scatter(Bge_, col, 6, 4, -wx * wy, Xs, Yc);
            scatter(Bge_, col, 6, 5, -wy * wy, Xc, Ys);
            for (int iy = 0; iy < ny; ++iy) {
                Bwall_[WallLeft](iy, col) += Ys[iy];
                Bwall_[WallRight](iy, col) += Ys[iy] * ((i % 2 == 0) ? 1.0 : -1.0);
            }
        }
    }

    // constant quadratic part: viscous stress + boundary friction
    const double lam = prob_.material.viscous.vol_viscosity;
    const double mu = prob_.material.viscous.shear_viscosity;
    Eigen::Matrix4d M4;
    M4 << lam + mu, 0, 0, lam - mu,
          0, mu, mu, 0,
          0, mu, mu, 0,
          lam - mu, 0, 0, lam + mu;
    Eigen::MatrixXd DB(4 * NN, n_);
    for (int nd = 0; nd < NN; ++nd)
        DB.middleRows(4 * nd, 4).noalias() = M4 * Bgrad_.middleRows(4 * nd, 4);
    Kconst_.noalias() = grid_->cell * (Bgrad_.transpose() * DB);
    for (int w = 0; w < 4; ++w)
        Kconst_.noalias() +=
            (prob_.kappa_friction * wall_h_[w]) * (Bwall_[w].transpose() * Bwall_[w]);
}

Eigen::VectorXd MomentumSolver::pack(const VelocityField& v) const {
    Eigen::VectorXd u(n_);
    const int nvx = kx_ * (ky_ + 1);
    u.head(nvx) = Eigen::Map<const Eigen::VectorXd>(v.x.coef.data(), nvx);
    u.tail(n_ - nvx) = Eigen::Map<const Eigen::VectorXd>(v.y.coef.data(), n_ - nvx);
    return u;
}

VelocityField MomentumSolver::unpack(const Eigen::VectorXd& u) const {
    VelocityField v(grid_, kx_, ky_);
    const int nvx = kx_ * (ky_ + 1);
    Eigen::Map<Eigen::VectorXd>(v.x.coef.data(), nvx) = u.head(nvx);
    Eigen::Map<Eigen::VectorXd>(v.y.coef.data(), n_ - nvx) = u.tail(n_ - nvx);
    return v;
}

MomentumSolver::StressState MomentumSolver::stress_state(const TensorField& Fe) const {
    const auto& se = prob_.material.stored;
    const int NN = grid_->nx * grid_->ny;
    const auto f = Fe.eval();
    StressState ss;
    ss.T_el.resize(4, NN);
    ss.rho.resize(1, NN);
    const double cap2 = 1.0 / (prob_.eps_trunc * prob_.eps_trunc);
    const double cap1 = 1.0 / prob_.eps_trunc;
    const int ny = grid_->ny;
    for (int ix = 0; ix < grid_->nx; ++ix) {
        for (int iy = 0; iy < ny; ++iy) {
            Mat2 F;
            F << f[0](ix, iy), f[1](ix, iy), f[2](ix, iy), f[3](ix, iy);
            const double J = F(0, 0) * F(1, 1) - F(0, 1) * F(1, 0);
            if (J <= 0.0) throw DeterminantCollapse(J, ix, iy);
            const Mat2 SFt = se.phi_prime(F) * F.transpose();
            const double p = se.phi(F);
            const double fac_s = truncation_factor(SFt.norm(), cap2);
            const double fac_p = truncation_factor(p, cap1);
            if (fac_s < 1.0) ++ss.trunc.stress;
            if (fac_p < 1.0) ++ss.trunc.pressure;
            if (J < prob_.eps_trunc) ++ss.trunc.density;
            const int nd = ix * ny + iy;
            ss.T_el(0, nd) = fac_s * SFt(0, 0) + fac_p * p;
            ss.T_el(1, nd) = fac_s * SFt(0, 1);
            ss.T_el(2, nd) = fac_s * SFt(1, 0);
            ss.T_el(3, nd) = fac_s * SFt(1, 1) + fac_p * p;
            ss.rho(0, nd) = prob_.rho0 / std::max(J, prob_.eps_trunc);
        }
    }
    return ss;
}

Eigen::VectorXd MomentumSolver::load_vector(const StressState& ss) const {
    const int NN = grid_->nx * grid_->ny;
    Eigen::VectorXd bulk(2 * NN);
    for (int nd = 0; nd < NN; ++nd) {
        bulk[2 * nd] = ss.rho(0, nd) * prob_.g[0];
        bulk[2 * nd + 1] = ss.rho(0, nd) * prob_.g[1];
    }
    Eigen::VectorXd L = grid_->cell * (Bval_.transpose() * bulk);
    for (int w = 0; w < 4; ++w) {
        if (prob_.f_wall[w] == 0.0) continue;
        L.noalias() += (wall_h_[w] * prob_.f_wall[w]) *
                       (Bwall_[w].transpose() * Eigen::VectorXd::Ones(Bwall_[w].rows()));
    }
    return L;
}

Eigen::VectorXd MomentumSolver::residual_with(const StressState& ss,
                                              const Eigen::VectorXd& u) const {
    const int NN = grid_->nx * grid_->ny;
    const double lam = prob_.material.viscous.vol_viscosity;
    const double mu = prob_.material.viscous.shear_viscosity;

    Eigen::VectorXd gv = Bgrad_ * u;
    Eigen::Map<Eigen::Matrix<double, 4, Eigen::Dynamic>> G(gv.data(), 4, NN);
    Eigen::Matrix<double, 4, Eigen::Dynamic> T = ss.T_el;
    Eigen::ArrayXd t = (G.row(0) + G.row(3)).transpose().array();
    Eigen::ArrayXd sxy = (mu * (G.row(1) + G.row(2))).transpose().array();
    T.row(0).array() += (lam * t + mu * (G.row(0) - G.row(3)).transpose().array()).transpose();
    T.row(3).array() += (lam * t + mu * (G.row(3) - G.row(0)).transpose().array()).transpose();
    T.row(1).array() += sxy.transpose();
    T.row(2).array() += sxy.transpose();
    Eigen::VectorXd r = grid_->cell *
                        (Bgrad_.transpose() *
                         Eigen::Map<const Eigen::VectorXd>(T.data(), 4 * NN));

    Eigen::VectorXd ge = Bge_ * u;
    Eigen::Map<Eigen::Matrix<double, 6, Eigen::Dynamic>> Ge(ge.data(), 6, NN);
    const double d2 = prob_.hessian_reg * prob_.hessian_reg;
    Eigen::ArrayXd s = Ge.colwise().squaredNorm().transpose().array() + d2;
    Eigen::ArrayXd fac = prob_.nu * s.pow(0.5 * prob_.p_exp - 1.0);
    Eigen::Matrix<double, 6, Eigen::Dynamic> H =
        Ge.array().rowwise() * fac.transpose().array();
    r.noalias() += grid_->cell *
                   (Bge_.transpose() * Eigen::Map<const Eigen::VectorXd>(H.data(), 6 * NN));

    for (int w = 0; w < 4; ++w)
        r.noalias() += (prob_.kappa_friction * wall_h_[w]) *
                       (Bwall_[w].transpose() * (Bwall_[w] * u));
    r -= load_vector(ss);
    return r;
}

double MomentumSolver::objective_with(const StressState& ss, const Eigen::VectorXd& u,
                                      const Eigen::VectorXd& load) const {
    const int NN = grid_->nx * grid_->ny;
    const double lam = prob_.material.viscous.vol_viscosity;
    const double mu = prob_.material.viscous.shear_viscosity;

    Eigen::VectorXd gv = Bgrad_ * u;
    Eigen::Map<Eigen::Matrix<double, 4, Eigen::Dynamic>> G(gv.data(), 4, NN);
    Eigen::ArrayXd t = (G.row(0) + G.row(3)).transpose().array();
    Eigen::ArrayXd dshear = (G.row(0) - G.row(3)).transpose().array();
    Eigen::ArrayXd gxy = (G.row(1) + G.row(2)).transpose().array();
    double J = grid_->cell * (0.5 * lam * t.square() +
                              mu * (0.5 * dshear.square() + 0.5 * gxy.square()))
                                 .sum();
    J += grid_->cell * (ss.T_el.cwiseProduct(G)).sum();

    Eigen::VectorXd ge = Bge_ * u;
    Eigen::Map<Eigen::Matrix<double, 6, Eigen::Dynamic>> Ge(ge.data(), 6, NN);
    const double d2 = prob_.hessian_reg * prob_.hessian_reg;
    Eigen::ArrayXd s = Ge.colwise().squaredNorm().transpose().array() + d2;
    J += grid_->cell * (prob_.nu / prob_.p_exp) * s.pow(0.5 * prob_.p_exp).sum();

    for (int w = 0; w < 4; ++w)
        J += 0.5 * prob_.kappa_friction * wall_h_[w] * (Bwall_[w] * u).squaredNorm();
    J -= load.dot(u);
    return J;
}

Eigen::MatrixXd MomentumSolver::hessian(const Eigen::VectorXd& u) const {
    Eigen::MatrixXd K = Kconst_;
    if (prob_.nu == 0.0) return K;
    const int NN = grid_->nx * grid_->ny;
    Eigen::VectorXd ge = Bge_ * u;
    Eigen::Map<Eigen::Matrix<double, 6, Eigen::Dynamic>> Ge(ge.data(), 6, NN);
    const double d2 = prob_.hessian_reg * prob_.hessian_reg;
    Eigen::MatrixXd DB(6 * NN, n_);
    for (int nd = 0; nd < NN; ++nd) {
        const Eigen::Matrix<double, 6, 1> g = Ge.col(nd);
        const double s = g.squaredNorm() + d2;
        Eigen::Matrix<double, 6, 6> D =
            prob_.nu * std::pow(s, 0.5 * prob_.p_exp - 1.0) *
            Eigen::Matrix<double, 6, 6>::Identity();
        D.noalias() += prob_.nu * (prob_.p_exp - 2.0) * std::pow(s, 0.5 * prob_.p_exp - 2.0) *
                       (g * g.transpose());
        DB.middleRows(6 * nd, 6).noalias() = D * Bge_.middleRows(6 * nd, 6);
    }
    K.noalias() += grid_->cell * (Bge_.transpose() * DB);
    return K;
}

Eigen::VectorXd MomentumSolver::residual(const VelocityField& v, const TensorField& Fe,
                                         TruncationCounters* tc) const {
    StressState ss = stress_state(Fe);
    if (tc) *tc += ss.trunc;
    return residual_with(ss, pack(v));
}

VelocityField MomentumSolver::solve(const TensorField& Fe, const VelocityField& v0,
                                    SolveReport* rep) {
    StressState ss = stress_state(Fe);
    const Eigen::VectorXd load = load_vector(ss);
    const int NN = grid_->nx * grid_->ny;
    const double el_scale =
        (grid_->cell *
         (Bgrad_.transpose() * Eigen::Map<const Eigen::VectorXd>(ss.T_el.data(), 4 * NN)))
            .norm();
    const double scale = 1.0 + load.norm() + el_scale;

    detail::NewtonFuncs funcs;
    funcs.gradient = [&](const Eigen::VectorXd& u) { return residual_with(ss, u); };
    funcs.objective = [&](const Eigen::VectorXd& u) { return objective_with(ss, u, load); };
    funcs.hessian = [&](const Eigen::VectorXd& u) { return hessian(u); };

    detail::NewtonStats stats;
    Eigen::VectorXd u = detail::newton_minimize(funcs, pack(v0), prob_.tol_newton * scale,
                                                prob_.max_iter, cache_->newton, stats,
                                                "momentum");
    if (rep) {
        rep->iterations = stats.iterations;
        rep->hessian_builds = stats.hessian_builds;
        rep->residual_history = stats.residual_history;
        Eigen::VectorXd r = residual_with(ss, u);
        rep->residual_norm = r.norm();
        rep->residual_max_rel = r.cwiseAbs().maxCoeff() / scale;
        rep->scale = scale;
        rep->trunc = ss.trunc;
    }
    return unpack(u);
}

}  // namespace hypo
