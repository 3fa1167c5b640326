#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

// Independent 1D oracle for the traction-driven wall-bounded shear profile:
// the reduced two-point boundary-value problem in y for u = v_x(y),
//
//   sigma = mu_v u' - m',  sigma' = 0,   m = (nu/2) (u''^2/2)^{(p-2)/2} u'',
//   m(0) = m(H) = 0,  -sigma + kappa u(0) = f_bottom,  sigma + kappa u(H) = f_top,
//
// solved by shooting with RK4 substeps and damped Newton on the two unknown
// initial values. Kept free of any project headers on purpose.

namespace oracle {

struct CouetteProblem {
    double H = 1.0;
    double mu_v = 20.0;   // viscous shear coefficient (stress = mu_v u')
    double nu = 1e-3;     // hyperstress coefficient
    double p = 4.0;
    double kappa = 1.0;
    double f_top = 1.0;
    double f_bottom = 0.0;
};

struct CouetteSolution {
    double u0 = 0.0, slope0 = 0.0, sigma = 0.0;
    double u_top = 0.0, u_bottom = 0.0;
    CouetteProblem prob;

    double eval(double y, int substeps = 2000) const {
        double u = u0, up = slope0, m = 0.0;
        const double h = y / substeps;
        if (y <= 0.0) return u0;
        auto curv = [&](double mm) {
            const double s = std::pow(2.0, prob.p / 2.0) * std::abs(mm) / prob.nu;
            const double w = std::pow(s, 1.0 / (prob.p - 1.0));
            return mm >= 0.0 ? w : -w;
        };
        for (int k = 0; k < substeps; ++k) {
            auto f = [&](std::array<double, 3> s) {
                return std::array<double, 3>{s[1], curv(s[2]), prob.mu_v * s[1] - sigma};
            };
            std::array<double, 3> s{u, up, m};
            const auto k1 = f(s);
            const auto k2 = f({s[0] + 0.5 * h * k1[0], s[1] + 0.5 * h * k1[1], s[2] + 0.5 * h * k1[2]});
            const auto k3 = f({s[0] + 0.5 * h * k2[0], s[1] + 0.5 * h * k2[1], s[2] + 0.5 * h * k2[2]});
            const auto k4 = f({s[0] + h * k3[0], s[1] + h * k3[1], s[2] + h * k3[2]});
            u += h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
            up += h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
            m += h / 6.0 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2]);
        }
        return u;
    }
};

inline CouetteSolution solve_couette(const CouetteProblem& prob, int substeps = 2000) {
    auto integrate = [&](double u0, double slope0, double* u_end, double* m_end) {
        const double sigma = prob.kappa * u0 + prob.f_bottom;
        double u = u0, up = slope0, m = 0.0;
        const double h = prob.H / substeps;
        auto curv = [&](double mm) {
            const double s = std::pow(2.0, prob.p / 2.0) * std::abs(mm) / prob.nu;
            const double w = std::pow(s, 1.0 / (prob.p - 1.0));
            return mm >= 0.0 ? w : -w;
        };
        for (int k = 0; k < substeps; ++k) {
            auto f = [&](std::array<double, 3> s) {
                return std::array<double, 3>{s[1], curv(s[2]), prob.mu_v * s[1] - sigma};
            };
            std::array<double, 3> s{u, up, m};
            const auto k1 = f(s);
            const auto k2 = f({s[0] + 0.5 * h * k1[0], s[1] + 0.5 * h * k1[1], s[2] + 0.5 * h * k1[2]});
            const auto k3 = f({s[0] + 0.5 * h * k2[0], s[1] + 0.5 * h * k2[1], s[2] + 0.5 * h * k2[2]});
            const auto k4 = f({s[0] + h * k3[0], s[1] + h * k3[1], s[2] + h * k3[2]});
            u += h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
            up += h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
            m += h / 6.0 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2]);
        }
        *u_end = u;
        *m_end = m;
        return sigma;
    };

    // shooting residuals: m(H) = 0 and sigma + kappa u(H) - f_top = 0
    double u0 = prob.f_top / (2.0 * prob.kappa);
    double s0 = prob.f_top / (2.0 * prob.mu_v);
    for (int it = 0; it < 60; ++it) {
        double uH, mH;
        const double sigma = integrate(u0, s0, &uH, &mH);
        const double r1 = mH;
        const double r2 = sigma + prob.kappa * uH - prob.f_top;
        if (std::abs(r1) + std::abs(r2) < 1e-13 * (1.0 + std::abs(prob.f_top))) {
            CouetteSolution sol;
            sol.u0 = u0;
            sol.slope0 = s0;
            sol.sigma = sigma;
            sol.u_bottom = u0;
            sol.u_top = uH;
            sol.prob = prob;
            return sol;
        }
        const double eps_u = 1e-7 * (1.0 + std::abs(u0));
        const double eps_s = 1e-7 * (1.0 + std::abs(s0));
        double uH1, mH1, uH2, mH2;
        const double sig1 = integrate(u0 + eps_u, s0, &uH1, &mH1);
        const double sig2 = integrate(u0, s0 + eps_s, &uH2, &mH2);
        const double j11 = (mH1 - mH) / eps_u, j12 = (mH2 - mH) / eps_s;
        const double j21 = (sig1 + prob.kappa * uH1 - sigma - prob.kappa * uH) / eps_u;
        const double j22 = (sig2 + prob.kappa * uH2 - sigma - prob.kappa * uH) / eps_s;
        const double det = j11 * j22 - j12 * j21;
        if (std::abs(det) < 1e-300) throw std::runtime_error("couette oracle: singular shoot");
        double du = (-r1 * j22 + r2 * j12) / det;
        double ds = (-j11 * r2 + j21 * r1) / det;
        double damp = 1.0;
        u0 += damp * du;
        s0 += damp * ds;
    }
    throw std::runtime_error("couette oracle: shooting did not converge");
}

}  // namespace oracle
