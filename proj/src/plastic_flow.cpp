#include "hypo/plastic_flow.hpp"

#include <cmath>

#include "newton.hpp"

namespace hypo {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;

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

struct PlasticFlowSolver::Cache {
    detail::NewtonCache newton;
};

PlasticFlowSolver::PlasticFlowSolver(GridPtr grid, int lx, int ly, FlowProblem prob)
    : grid_(std::move(grid)), lx_(lx), ly_(ly), prob_(std::move(prob)),
      cache_(std::make_shared<Cache>()) {
    const auto& bx = grid_->bx;
    const auto& by = grid_->by;
    const int nx = grid_->nx, ny = grid_->ny, NN = nx * ny;
    ncomp_ = (lx_ + 1) * (ly_ + 1);
    n_ = 3 * ncomp_;

    BL_ = Eigen::MatrixXd::Zero(3 * NN, n_);
    BgL_ = Eigen::MatrixXd::Zero(6 * NN, n_);

    // components a (scaled by sqrt2), b, c; each field cos_i cos_j
    for (int comp = 0; comp < 3; ++comp) {
        const double vscale = (comp == 0) ? kSqrt2 : 1.0;
        int col = comp * ncomp_;
        for (int i = 0; i <= lx_; ++i) {
            const double wx = i * M_PI / grid_->Lx;
            const Eigen::VectorXd Xc = bx.cos_eval.col(i);
            const Eigen::VectorXd Xs =
                i >= 1 ? Eigen::VectorXd(bx.sin_eval.col(i - 1)) : Eigen::VectorXd::Zero(nx);
            for (int j = 0; j <= ly_; ++j, ++col) {
                const double wy = j * M_PI / grid_->Ly;
                const Eigen::VectorXd Yc = by.cos_eval.col(j);
                const Eigen::VectorXd Ys =
                    j >= 1 ? Eigen::VectorXd(by.sin_eval.col(j - 1)) : Eigen::VectorXd::Zero(ny);
                scatter(BL_, col, 3, comp, vscale, Xc, Yc);
                scatter(BgL_, col, 6, 2 * comp, -vscale * wx, Xs, Yc);
                scatter(BgL_, col, 6, 2 * comp + 1, -vscale * wy, Xc, Ys);
            }
        }
    }

    Kconst_.noalias() =
        (grid_->cell * prob_.material.plastic.plastic_viscosity) * (BL_.transpose() * BL_);
}

Eigen::VectorXd PlasticFlowSolver::pack(const DevTensorField& L) const {
    Eigen::VectorXd c(n_);
    c.segment(0, ncomp_) = Eigen::Map<const Eigen::VectorXd>(L.a.coef.data(), ncomp_);
    c.segment(ncomp_, ncomp_) = Eigen::Map<const Eigen::VectorXd>(L.b.coef.data(), ncomp_);
    c.segment(2 * ncomp_, ncomp_) = Eigen::Map<const Eigen::VectorXd>(L.c.coef.data(), ncomp_);
    return c;
}

DevTensorField PlasticFlowSolver::unpack(const Eigen::VectorXd& c) const {
    DevTensorField L(grid_, lx_, ly_);
    Eigen::Map<Eigen::VectorXd>(L.a.coef.data(), ncomp_) = c.segment(0, ncomp_);
    Eigen::Map<Eigen::VectorXd>(L.b.coef.data(), ncomp_) = c.segment(ncomp_, ncomp_);
    Eigen::Map<Eigen::VectorXd>(L.c.coef.data(), ncomp_) = c.segment(2 * ncomp_, ncomp_);
    return L;
}

Eigen::MatrixXd PlasticFlowSolver::driving_nodal(const TensorField& Fe,
                                                 long* trunc_count) const {
    const auto& se = prob_.material.stored;
    const int nx = grid_->nx, ny = grid_->ny;
    const auto f = Fe.eval();
    Eigen::MatrixXd D(3, nx * ny);
    const double cap = 1.0 / (prob_.eps_trunc * prob_.eps_trunc);
    long cnt = 0;
    for (int ix = 0; ix < nx; ++ix) {
        for (int iy = 0; iy < ny; ++iy) {
            Mat2 F;
            F << f[0](ix, iy), f[1](ix, iy), f[2](ix, iy), f[3](ix, iy);
            const double J = F(0, 0) * F(1, 1) - F(0, 1) * F(1, 0);
            if (J <= 0.0) throw DeterminantCollapse(J, ix, iy);
            const Mat2 S = se.phi_prime(F);
            const Mat2 E = (prob_.variant == FlowVariant::eshelby) ? Mat2(F.transpose() * S)
                                                                   : Mat2(S * F.transpose());
            const double fac = truncation_factor(E.norm(), cap);
            if (fac < 1.0) ++cnt;
            const Mat2 Ddev = fac * dev(E);
            const int nd = ix * ny + iy;
            D(0, nd) = kSqrt2 * Ddev(0, 0);
            D(1, nd) = Ddev(0, 1);
            D(2, nd) = Ddev(1, 0);
        }
    }
    if (trunc_count) *trunc_count += cnt;
    return D;
}

DevTensorField PlasticFlowSolver::driving_stress(const TensorField& Fe,
                                                 long* trunc_count) const {
    const Eigen::MatrixXd D = driving_nodal(Fe, trunc_count);
    const int nx = grid_->nx, ny = grid_->ny;
    Eigen::MatrixXd ga(nx, ny), gb(nx, ny), gc(nx, ny);
    for (int ix = 0; ix < nx; ++ix)
        for (int iy = 0; iy < ny; ++iy) {
            const int nd = ix * ny + iy;
            ga(ix, iy) = D(0, nd) / kSqrt2;
            gb(ix, iy) = D(1, nd);
            gc(ix, iy) = D(2, nd);
        }
    DevTensorField out(grid_, lx_, ly_);
    out.a = ScalarField2::project(grid_, Par::Even, Par::Even, lx_, ly_, ga);
    out.b = ScalarField2::project(grid_, Par::Even, Par::Even, lx_, ly_, gb);
    out.c = ScalarField2::project(grid_, Par::Even, Par::Even, lx_, ly_, gc);
    return out;
}

Eigen::VectorXd PlasticFlowSolver::gradient_with(const Eigen::VectorXd& dual,
                                                 const Eigen::VectorXd& c) const {
    const auto& pp = prob_.material.plastic;
    const int NN = grid_->nx * grid_->ny;

    Eigen::VectorXd lv = BL_ * c;
    Eigen::Map<Eigen::Matrix<double, 3, Eigen::Dynamic>> L(lv.data(), 3, NN);
    const double d2 = pp.moreau_yosida_delta * pp.moreau_yosida_delta;
    Eigen::ArrayXd s = (L.colwise().squaredNorm().transpose().array() + d2).sqrt();
    Eigen::ArrayXd fac = pp.yield_stress / s + pp.plastic_viscosity;
    Eigen::Matrix<double, 3, Eigen::Dynamic> Z = L.array().rowwise() * fac.transpose().array();
    Eigen::VectorXd r =
        grid_->cell * (BL_.transpose() * Eigen::Map<const Eigen::VectorXd>(Z.data(), 3 * NN));

    Eigen::VectorXd gv = BgL_ * c;
    Eigen::Map<Eigen::Matrix<double, 6, Eigen::Dynamic>> G(gv.data(), 6, NN);
    const double dq2 = prob_.hessian_reg * prob_.hessian_reg;
    Eigen::ArrayXd sq = G.colwise().squaredNorm().transpose().array() + dq2;
    Eigen::ArrayXd gfac = prob_.mu_grad * sq.pow(0.5 * prob_.q_exp - 1.0);
    Eigen::Matrix<double, 6, Eigen::Dynamic> H = G.array().rowwise() * gfac.transpose().array();
    r.noalias() +=
        grid_->cell * (BgL_.transpose() * Eigen::Map<const Eigen::VectorXd>(H.data(), 6 * NN));

    r -= dual;
    return r;
}

double PlasticFlowSolver::objective_with(const Eigen::VectorXd& dual,
                                         const Eigen::VectorXd& c) const {
    const auto& pp = prob_.material.plastic;
    const int NN = grid_->nx * grid_->ny;

    Eigen::VectorXd lv = BL_ * c;
    Eigen::Map<Eigen::Matrix<double, 3, Eigen::Dynamic>> L(lv.data(), 3, NN);
    const double d = pp.moreau_yosida_delta;
    Eigen::ArrayXd n2 = L.colwise().squaredNorm().transpose().array();
    double J = grid_->cell * (pp.yield_stress * ((n2 + d * d).sqrt() - d) +
                              0.5 * pp.plastic_viscosity * n2)
                                 .sum();

    Eigen::VectorXd gv = BgL_ * c;
    Eigen::Map<Eigen::Matrix<double, 6, Eigen::Dynamic>> G(gv.data(), 6, NN);
    const double dq2 = prob_.hessian_reg * prob_.hessian_reg;
    Eigen::ArrayXd sq = G.colwise().squaredNorm().transpose().array() + dq2;
    J += grid_->cell * (prob_.mu_grad / prob_.q_exp) * sq.pow(0.5 * prob_.q_exp).sum();

    J -= dual.dot(c);
    return J;
}

Eigen::MatrixXd PlasticFlowSolver::hessian(const Eigen::VectorXd& c) const {
    const auto& pp = prob_.material.plastic;
    const int NN = grid_->nx * grid_->ny;
    Eigen::MatrixXd K = Kconst_;

    if (pp.yield_stress > 0.0) {
        Eigen::VectorXd lv = BL_ * c;
        Eigen::Map<Eigen::Matrix<double, 3, Eigen::Dynamic>> L(lv.data(), 3, NN);
        const double d2 = pp.moreau_yosida_delta * pp.moreau_yosida_delta;
        Eigen::MatrixXd DB(3 * NN, n_);
        for (int nd = 0; nd < NN; ++nd) {
            const Eigen::Vector3d l = L.col(nd);
            const double s = std::sqrt(l.squaredNorm() + d2);
            Eigen::Matrix3d D = (pp.yield_stress / s) * Eigen::Matrix3d::Identity();
            D.noalias() -= (pp.yield_stress / (s * s * s)) * (l * l.transpose());
            DB.middleRows(3 * nd, 3).noalias() = D * BL_.middleRows(3 * nd, 3);
        }
        K.noalias() += grid_->cell * (BL_.transpose() * DB);
    }
    if (prob_.mu_grad > 0.0) {
        Eigen::VectorXd gv = BgL_ * c;
        Eigen::Map<Eigen::Matrix<double, 6, Eigen::Dynamic>> G(gv.data(), 6, NN);
        const double dq2 = prob_.hessian_reg * prob_.hessian_reg;
        Eigen::MatrixXd DB(6 * NN, n_);
        for (int nd = 0; nd < NN; ++nd) {
            const Eigen::Matrix<double, 6, 1> g = G.col(nd);
            const double sq = g.squaredNorm() + dq2;
            Eigen::Matrix<double, 6, 6> D =
                prob_.mu_grad * std::pow(sq, 0.5 * prob_.q_exp - 1.0) *
                Eigen::Matrix<double, 6, 6>::Identity();
            D.noalias() += prob_.mu_grad * (prob_.q_exp - 2.0) *
                           std::pow(sq, 0.5 * prob_.q_exp - 2.0) * (g * g.transpose());
            DB.middleRows(6 * nd, 6).noalias() = D * BgL_.middleRows(6 * nd, 6);
        }
        K.noalias() += grid_->cell * (BgL_.transpose() * DB);
    }
    return K;
}

DevTensorField PlasticFlowSolver::solve(const TensorField& Fe, const DevTensorField& L0,
                                        SolveReport* rep) {
    long trunc = 0;
    const Eigen::MatrixXd D = driving_nodal(Fe, &trunc);
    const int NN = grid_->nx * grid_->ny;
    const Eigen::VectorXd dual =
        grid_->cell * (BL_.transpose() * Eigen::Map<const Eigen::VectorXd>(D.data(), 3 * NN));
    const double scale = 1.0 + dual.norm();

    detail::NewtonFuncs funcs;
    funcs.gradient = [&](const Eigen::VectorXd& c) { return gradient_with(dual, c); };
    funcs.objective = [&](const Eigen::VectorXd& c) { return objective_with(dual, c); };
    funcs.hessian = [&](const Eigen::VectorXd& c) { return hessian(c); };

    detail::NewtonStats stats;
    Eigen::VectorXd c = detail::newton_minimize(funcs, pack(L0), prob_.tol_newton * scale,
                                                prob_.max_iter, cache_->newton, stats,
                                                "plastic flow");
    if (rep) {
        rep->iterations = stats.iterations;
        rep->hessian_builds = stats.hessian_builds;
        rep->residual_history = stats.residual_history;
        Eigen::VectorXd r = gradient_with(dual, c);
        rep->residual_norm = r.norm();
        rep->residual_max_rel = r.cwiseAbs().maxCoeff() / scale;
        rep->scale = scale;
        rep->trunc.eshelby = trunc;
    }
    return unpack(c);
}

double PlasticFlowSolver::functional_value(const TensorField& Fe,
                                           const DevTensorField& L) const {
    const Eigen::MatrixXd D = driving_nodal(Fe, nullptr);
    const int NN = grid_->nx * grid_->ny;
    const Eigen::VectorXd dual =
        grid_->cell * (BL_.transpose() * Eigen::Map<const Eigen::VectorXd>(D.data(), 3 * NN));
    return objective_with(dual, pack(L));
}

}  // namespace hypo
