#include "hypo/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hypo/momentum.hpp"
#include "hypo/plastic_flow.hpp"

namespace hypo {

namespace fs = std::filesystem;
using nlohmann::json;

VelocityField vortex_velocity(GridPtr grid, int kx, int ky, double amp, int i, int j) {
    VelocityField v(grid, kx, ky);
    if (i < 1 || i > kx || j < 1 || j > ky)
        throw ConfigError("vortex mode outside the velocity space");
    v.x.coef(i - 1, j) = amp * j * M_PI / grid->Ly;   // d(chi)/dy
    v.y.coef(i, j - 1) = -amp * i * M_PI / grid->Lx;  // -d(chi)/dx
    return v;
}

namespace {

TensorField initial_Fe(const Scenario& s, GridPtr grid, int lx, int ly) {
    TensorField Fe = TensorField::uniform(grid, lx, ly, s.Fe0);
    if (s.Fe0_perturb_amp != 0.0) {
        Fe.c[0].coef(s.Fe0_mode_i, s.Fe0_mode_j) += s.Fe0_perturb_amp * s.Fe0_perturb_dir(0, 0);
        Fe.c[1].coef(s.Fe0_mode_i, s.Fe0_mode_j) += s.Fe0_perturb_amp * s.Fe0_perturb_dir(0, 1);
        Fe.c[2].coef(s.Fe0_mode_i, s.Fe0_mode_j) += s.Fe0_perturb_amp * s.Fe0_perturb_dir(1, 0);
        Fe.c[3].coef(s.Fe0_mode_i, s.Fe0_mode_j) += s.Fe0_perturb_amp * s.Fe0_perturb_dir(1, 1);
    }
    return Fe;
}

MomentumProblem momentum_problem(const Scenario& s) {
    MomentumProblem mp;
    mp.material = s.material;
    mp.nu = s.nu;
    mp.p_exp = s.p_exp;
    mp.kappa_friction = s.kappa;
    mp.g = s.g;
    mp.f_wall = {0, 0, 0, 0};  // ramped in per step
    mp.rho0 = s.rho0;
    mp.eps_trunc = s.eps_trunc;
    mp.tol_newton = s.tol_newton;
    mp.max_iter = s.max_iter;
    return mp;
}

FlowProblem flow_problem(const Scenario& s) {
    FlowProblem fp;
    fp.material = s.material;
    fp.mu_grad = s.mu_grad;
    fp.q_exp = s.q_exp;
    fp.variant = s.variant;
    fp.eps_trunc = s.eps_trunc;
    fp.tol_newton = s.tol_newton;
    fp.max_iter = s.max_iter;
    return fp;
}

TransportParams transport_params(const Scenario& s) {
    TransportParams tp;
    tp.k_inv = s.k_inv;
    tp.r_exp = s.r_exp;
    tp.det_floor = s.det_floor;
    tp.iso_tol = s.iso_tol;
    tp.cfl_limit = s.cfl_limit;
    tp.variant = s.variant;
    return tp;
}

double ramp(const Scenario& s, double t) {
    if (s.f_ramp_time <= 0.0) return 1.0;
    return std::min(t / s.f_ramp_time, 1.0);
}

// deterministic per-step RNG stream for the certificate fields
std::mt19937_64 cert_rng(unsigned seed, int step) {
    std::seed_seq seq{static_cast<unsigned long long>(seed),
                      static_cast<unsigned long long>(step) * 0x9e3779b97f4a7c15ull + 1ull};
    return std::mt19937_64(seq);
}

}  // namespace

RunResult run_scenario(const Scenario& s, const RunOptions& opt) {
    RunResult out;
    out.scenario = s;

    const ValidationReport vr = validate(s);
    if (!vr.ok()) {
        out.exit_status = 2;
        out.failure = "validation: " + vr.to_string();
        json summary;
        summary["exit_status"] = out.exit_status;
        summary["failure"] = out.failure;
        out.summary_json = summary.dump(2);
        if (!opt.out_dir.empty()) {
            fs::create_directories(opt.out_dir);
            std::ofstream(fs::path(opt.out_dir) / "summary.json") << out.summary_json << "\n";
        }
        return out;
    }

    const GridPtr grid = Grid2::make(s.Lx, s.Ly, s.nx, s.ny);
    const int kx = s.velocity_modes_x(), ky = s.velocity_modes_y();
    const int lx = s.tensor_modes_x(), ly = s.tensor_modes_y();
    const double area = s.Lx * s.Ly;

    const MomentumProblem mp0 = momentum_problem(s);
    const FlowProblem fp0 = flow_problem(s);
    const TransportParams tp = transport_params(s);

    std::optional<MomentumSolver> momentum;
    std::optional<PlasticFlowSolver> plastic;
    if (!s.prescribed_velocity) {
        momentum.emplace(grid, kx, ky, mp0);
        plastic.emplace(grid, lx, ly, fp0);
    }

    TransportState state;
    state.t = 0.0;
    state.Fe = initial_Fe(s, grid, lx, ly);
    if (s.track_Fp) state.Fp = TensorField::uniform(grid, lx, ly, s.Fp0);
    int step0 = 0;
    double prev_stored = std::numeric_limits<double>::quiet_NaN();
    double gron_integral = 0.0, gron_rate_prev = 0.0;
    double Fe0_L2 = state.Fe.norm_L2();

    if (opt.restart_from) {
        Checkpoint c = read_checkpoint(*opt.restart_from, grid);
        state.Fe = c.Fe;
        state.Fp = c.Fp;
        state.t = c.t;
        step0 = c.step;
        prev_stored = c.prev_stored;
        gron_integral = c.gron_integral;
        gron_rate_prev = c.gron_rate_prev;
        Fe0_L2 = c.Fe0_L2;
    }

    VelocityField v(grid, kx, ky);
    DevTensorField Lp(grid, lx, ly);
    if (s.prescribed_velocity)
        v = vortex_velocity(grid, kx, ky, s.vortex_amp, s.vortex_i, s.vortex_j);

    std::ofstream runlog;
    if (!opt.out_dir.empty()) {
        fs::create_directories(fs::path(opt.out_dir) / "snapshots");
        runlog.open(fs::path(opt.out_dir) / "run.log", step0 > 0 ? std::ios::app : std::ios::out);
    }

    const int n_total = s.n_steps();
    int n_end = n_total;
    if (opt.max_steps >= 0) n_end = std::min(n_total, step0 + opt.max_steps);

    auto emit_checkpoint = [&](int step) {
        if (opt.out_dir.empty()) return;
        Checkpoint c;
        c.t = state.t;
        c.step = step;
        c.prev_stored = prev_stored;
        c.gron_integral = gron_integral;
        c.gron_rate_prev = gron_rate_prev;
        c.Fe0_L2 = Fe0_L2;
        c.Fe = state.Fe;
        c.Fp = state.Fp;
        char buf[64];
        std::snprintf(buf, sizeof(buf), "checkpoint_%06d.ckpt", step);
        write_checkpoint((fs::path(opt.out_dir) / buf).string(), c);
    };

    auto emit_snapshot = [&](int step) {
        if (opt.out_dir.empty()) return;
        char buf[64];
        std::snprintf(buf, sizeof(buf), "snapshots/Fe_%06d.field", step);
        const auto fe = state.Fe.eval();
        write_field_snapshot((fs::path(opt.out_dir) / buf).string(), "Fe", "dimensionless",
                             state.t, *grid, {fe[0], fe[1], fe[2], fe[3]});
        if (state.Fp) {
            std::snprintf(buf, sizeof(buf), "snapshots/Fp_%06d.field", step);
            const auto fp = state.Fp->eval();
            write_field_snapshot((fs::path(opt.out_dir) / buf).string(), "Fp", "dimensionless",
                                 state.t, *grid, {fp[0], fp[1], fp[2], fp[3]});
        }
        const auto vn = v.eval();
        std::snprintf(buf, sizeof(buf), "snapshots/v_%06d.field", step);
        write_field_snapshot((fs::path(opt.out_dir) / buf).string(), "v", "m/s", state.t, *grid,
                             {vn[0], vn[1]});
    };

    int failure_status = 0;
    std::string failure_msg;

    for (int istep = step0; istep <= n_end; ++istep) {
        const bool final_row = (istep == n_end);
        // stage 1+2: quasistatic solves at the current state
        SolveReport mrep, prep;
        if (!s.prescribed_velocity) {
            momentum->problem().f_wall = s.f_wall;
            const double rm = ramp(s, state.t);
            for (auto& f : momentum->problem().f_wall) f *= rm;
            try {
                v = momentum->solve(state.Fe, v, &mrep);
                Lp = plastic->solve(state.Fe, Lp, &prep);
            } catch (const Error& e) {
                failure_status = 3;
                failure_msg = e.what();
                break;
            }
        }

        // diagnostics row for the current state
        HistoryRow row;
        row.step = istep;
        row.t = state.t;
        row.dt = s.dt;
        MomentumProblem mp_now = mp0;
        {
            const double rm = ramp(s, state.t);
            mp_now.f_wall = s.f_wall;
            for (auto& f : mp_now.f_wall) f *= rm;
        }
        row.en = ledger(state.Fe, v, Lp, mp_now, fp0, tp);

        {
            const Grids2 vn = v.eval();
            const Grids4 gv = v.grad();
            row.v_max = std::max(vn[0].cwiseAbs().maxCoeff(), vn[1].cwiseAbs().maxCoeff());
            row.v_rms = std::sqrt(grid->integrate(vn[0].cwiseAbs2() + vn[1].cwiseAbs2()) / area);
            row.gradv_inf = (gv[0].cwiseAbs2() + gv[1].cwiseAbs2() + gv[2].cwiseAbs2() +
                             gv[3].cwiseAbs2())
                                .cwiseSqrt()
                                .maxCoeff();
            row.avg_rate_gamma = grid->integrate(gv[1] + gv[2]) / area;
            row.grad_e_Lp = std::pow(std::max(row.en.grad_rate_v, 0.0) / s.nu, 1.0 / s.p_exp);

            row.Lp_rms = Lp.norm_L2() / std::sqrt(area);
            row.Lp_inf = Lp.max_abs();
            row.Lp_W1q = Lp.norm_W1q(s.q_exp);
            {
                Eigen::MatrixXd la = Lp.a.eval(), lb = Lp.b.eval(), lc = Lp.c.eval();
                Eigen::MatrixXd n2 = 2.0 * la.cwiseAbs2() + lb.cwiseAbs2() + lc.cwiseAbs2();
                const double thr = 10.0 * s.material.plastic.moreau_yosida_delta;
                row.yield_fraction =
                    (n2.array() > thr * thr).cast<double>().sum() / (s.nx * s.ny);
            }

            row.Fe_L2 = state.Fe.norm_L2();
            row.gradFe_Lr = state.Fe.grad_norm_Lr(s.r_exp);
            const DetMonitor dm =
                det_monitor(state.Fe, s.r_exp, s.material.stored.blowup_exponent);
            row.Fe_W1r_proxy = dm.W1r_proxy;
            row.int_det_negk = dm.int_det_neg_kappa;
            row.min_det = dm.min_det;

            const Grids4 fe = state.Fe.eval();
            row.max_dev_I = ((fe[0].array() - 1.0).square() + fe[1].array().square() +
                             fe[2].array().square() + (fe[3].array() - 1.0).square())
                                .sqrt()
                                .maxCoeff();
            row.avg_gamma_e = grid->integrate(fe[1] + fe[2]) / area;

            // volume-averaged total Cauchy shear (elastic + viscous part)
            Eigen::MatrixXd txy(s.nx, s.ny);
            for (int ix = 0; ix < s.nx; ++ix)
                for (int iy = 0; iy < s.ny; ++iy) {
                    Mat2 F;
                    F << fe[0](ix, iy), fe[1](ix, iy), fe[2](ix, iy), fe[3](ix, iy);
                    const Mat2 T = s.material.stored.phi_prime(F) * F.transpose();
                    txy(ix, iy) = T(0, 1) + s.material.viscous.shear_viscosity *
                                                (gv[1](ix, iy) + gv[2](ix, iy));
                }
            row.avg_T_xy = grid->integrate(txy) / area;

            if (state.Fp)
                row.iso_defect = (state.Fp->det_nodal().array() - 1.0).abs().maxCoeff();

            row.reg_share =
                (row.en.rhs_norm_L2 > 0.0) ? row.en.reg_norm_L2 / row.en.rhs_norm_L2 : 0.0;

            // Gronwall ledger: lhs vs Fe0 * exp(int_0^t |grad v|_inf + |Lp|_inf)
            const double rate = row.gradv_inf + row.Lp_inf;
            if (istep > step0) gron_integral += 0.5 * s.dt * (gron_rate_prev + rate);
            gron_rate_prev = rate;
            row.gronwall_lhs = row.Fe_L2;
            row.gronwall_rhs = Fe0_L2 * std::exp(gron_integral);
        }

        row.trunc_stress = mrep.trunc.stress;
        row.trunc_pressure = mrep.trunc.pressure;
        row.trunc_density = mrep.trunc.density;
        row.trunc_eshelby = prep.trunc.eshelby;
        row.iters_momentum = mrep.iterations;
        row.iters_plastic = prep.iterations;
        row.resid_momentum = mrep.residual_max_rel;
        row.resid_plastic = prep.residual_max_rel;

        // variational-inequality certificate against random admissible fields
        if (!s.prescribed_velocity && opt.vi_every > 0 && istep % opt.vi_every == 0) {
            auto rng = cert_rng(s.seed, istep);
            std::normal_distribution<double> nd(0.0, 1.0);
            const double base = plastic->functional_value(state.Fe, Lp);
            const double scale =
                std::max(Lp.max_abs(), 1e-3 * s.material.plastic.moreau_yosida_delta + 1e-12);
            double worst = std::numeric_limits<double>::infinity();
            for (int smp = 0; smp < opt.vi_samples; ++smp) {
                DevTensorField Lt = Lp;
                const double amp = scale * std::pow(10.0, nd(rng) * 0.5);
                for (auto* f : {&Lt.a, &Lt.b, &Lt.c})
                    for (int ii = 0; ii < f->coef.rows(); ++ii)
                        for (int jj = 0; jj < f->coef.cols(); ++jj)
                            f->coef(ii, jj) += amp * nd(rng) / (1.0 + ii + jj);
                worst = std::min(worst, plastic->functional_value(state.Fe, Lt) - base);
            }
            row.vi_slack_min = worst;
        }

        if (runlog.is_open()) {
            runlog << "step " << istep << " t " << state.t << " iters_m " << mrep.iterations
                   << " iters_p " << prep.iterations << " trunc "
                   << row.trunc_stress + row.trunc_pressure + row.trunc_density +
                          row.trunc_eshelby
                   << " yield_frac " << row.yield_fraction << " min_det " << row.min_det
                   << "\n";
        }

        out.history.push_back(row);
        if (!opt.out_dir.empty() && (istep % s.out_every == 0 || final_row)) {
            emit_snapshot(istep);
            emit_checkpoint(istep);
        }
        prev_stored = row.en.stored;
        if (final_row) break;

        // stage 3: transport
        StepMonitor mon;
        try {
            state = step(state, v, Lp, s.dt, tp, &mon);
        } catch (const CflViolation& e) {
            failure_status = 5;
            failure_msg = e.what();
            break;
        } catch (const DeterminantCollapse& e) {
            failure_status = 4;
            failure_msg = e.what();
            break;
        } catch (const IsochoricityViolation& e) {
            failure_status = 6;
            failure_msg = e.what();
            break;
        }
        out.history.back().cfl_theta = mon.cfl_theta;
    }

    fill_time_derivatives(out.history);
    out.apriori = apriori_report(out.history, s.det_floor);
    out.exit_status = failure_status;
    out.failure = failure_msg;
    out.state = state;
    out.v = v;
    out.Lp = Lp;

    json summary;
    summary["scenario"] = s.name;
    summary["steps"] = out.history.size();
    summary["t_final"] = state.t;
    summary["exit_status"] = out.exit_status;
    summary["failure"] = out.failure;
    summary["trunc_total"] = out.apriori.trunc_total;
    summary["min_det"] = out.apriori.min_det;
    summary["det_floor_ok"] = out.apriori.det_floor_ok;
    summary["gronwall_ok"] = out.apriori.gronwall_ok;
    summary["gronwall_worst_margin"] = out.apriori.gronwall_worst_margin;
    summary["max_Fe_W1r"] = out.apriori.max_Fe_W1r;
    summary["max_int_det_negk"] = out.apriori.max_int_det_negk;
    summary["max_abs_balance_residual"] = out.apriori.max_abs_balance_residual;
    summary["balance_residual_L1"] = out.apriori.balance_residual_L1;
    if (!out.history.empty()) {
        const auto& last = out.history.back();
        summary["final"] = {{"stored", last.en.stored},
                            {"v_rms", last.v_rms},
                            {"Lp_rms", last.Lp_rms},
                            {"Fe_L2", last.Fe_L2},
                            {"iso_defect", last.iso_defect},
                            {"max_dev_I", last.max_dev_I}};
        double vmax = 0, devmax = 0;
        for (const auto& rrow : out.history) {
            vmax = std::max(vmax, rrow.v_rms);
            devmax = std::max(devmax, rrow.max_dev_I);
        }
        summary["max_v_rms"] = vmax;
        summary["max_dev_I"] = devmax;
    }
    out.summary_json = summary.dump(2);

    if (!opt.out_dir.empty()) {
        std::ofstream csv(fs::path(opt.out_dir) / "series.csv");
        write_csv(csv, out.history);
        std::ofstream(fs::path(opt.out_dir) / "summary.json") << out.summary_json << "\n";
        save_scenario(s, (fs::path(opt.out_dir) / "scenario.json").string());
    }
    return out;
}

}  // namespace hypo
