#pragma once

#include <cmath>

#include "hypo/tensor.hpp"

// Constitutive layer: stored energy with determinant blow-up, quadratic
// viscous potential, yield-regularized plastic potential, and the derived
// stresses (Piola, elastic Cauchy, Eshelby).

namespace hypo {

/// Compressible neo-Hookean-type stored energy with a J^-varkappa
/// blow-up term guarding against local interpenetration:
///
///   phi(F) = G/2 (|F|^2 - d) - G log J + K/2 (log J)^2
///            + eps_phi (J^-vk - 1) + vk eps_phi (J - 1),      J = det F.
///
/// The affine-in-J correction calibrates the reference state: phi(I) = 0,
/// phi'(I) = 0, and phi attains its minimum 0 exactly on rotations.
/// A global lower bound phi(F) + (1 + vk) eps_phi >= eps_phi / J^vk holds.
struct StoredEnergy {
    double shear_modulus = 100.0;   // G, Pa
    double bulk_modulus = 300.0;    // K, Pa
    double blowup_coeff = 0.05;     // eps_phi, Pa
    double blowup_exponent = 9.0;   // varkappa, dimensionless

    template <typename D>
    double phi(const Eigen::MatrixBase<D>& F) const {
        const double d = static_cast<double>(F.rows());
        const double J = determinant(F);
        if (J <= 0.0) throw DeterminantCollapse(J);
        const double lJ = std::log(J);
        return 0.5 * shear_modulus * (F.squaredNorm() - d) - shear_modulus * lJ +
               0.5 * bulk_modulus * lJ * lJ +
               blowup_coeff * (std::pow(J, -blowup_exponent) - 1.0) +
               blowup_exponent * blowup_coeff * (J - 1.0);
    }

    /// Frechet derivative (Piola stress S = phi'(F_e)).
    template <typename D>
    typename D::PlainObject phi_prime(const Eigen::MatrixBase<D>& F) const {
        const double J = determinant(F);
        if (J <= 0.0) throw DeterminantCollapse(J);
        typename D::PlainObject Fit = cofactor(F);  // J * F^-T
        Fit /= J;
        const double vol = -shear_modulus + bulk_modulus * std::log(J) +
                           blowup_exponent * blowup_coeff * (J - std::pow(J, -blowup_exponent));
        return typename D::PlainObject(shear_modulus * F + vol * Fit);
    }
};

/// Quadratic viscous dissipation potential (Kelvin-Voigt branch):
/// xi(e) = lambda_v/2 (tr e)^2 + mu_v |dev e|^2.
struct ViscousPotential {
    double vol_viscosity = 20.0;    // lambda_v, Pa s
    double shear_viscosity = 20.0;  // mu_v, Pa s
    double growth_exponent = 1.0;   // p_growth, recorded for the data check (<= p-1)

    template <typename D>
    double xi(const Eigen::MatrixBase<D>& e) const {
        const double t = e.trace();
        return 0.5 * vol_viscosity * t * t + shear_viscosity * dev(e).squaredNorm();
    }

    template <typename D>
    typename D::PlainObject xi_prime(const Eigen::MatrixBase<D>& e) const {
        typename D::PlainObject out = 2.0 * shear_viscosity * dev(e);
        const double t = vol_viscosity * e.trace();
        for (Eigen::Index i = 0; i < e.rows(); ++i) out(i, i) += t;
        return out;
    }
};

/// Plastic dissipation potential on trace-free rates,
/// zeta(L) = sigma_y |L| + mu_p/2 |L|^2, with the nonsmooth norm replaced
/// by sqrt(|L|^2 + delta^2) - delta so the subdifferential is single-valued.
/// The +infinity branch off the deviatoric subspace is enforced
/// structurally: non-trace-free arguments are a contract violation.
struct PlasticPotential {
    double yield_stress = 0.0;        // sigma_y, Pa
    double plastic_viscosity = 100.0; // mu_p, Pa s
    double homogeneity_floor = 2.0;   // q0 >= 1
    double moreau_yosida_delta = 1e-6;// delta, 1/s

    template <typename D>
    void require_deviatoric(const Eigen::MatrixBase<D>& L) const {
        const double scale = L.norm();
        if (std::abs(L.trace()) > 1e-12 * (1.0 + scale))
            throw NonDeviatoric("plastic potential evaluated off the trace-free subspace");
    }

    template <typename D>
    double zeta_delta(const Eigen::MatrixBase<D>& L) const {
        require_deviatoric(L);
        const double n2 = L.squaredNorm();
        const double d = moreau_yosida_delta;
        return yield_stress * (std::sqrt(n2 + d * d) - d) + 0.5 * plastic_viscosity * n2;
    }

    template <typename D>
    typename D::PlainObject zeta_delta_prime(const Eigen::MatrixBase<D>& L) const {
        require_deviatoric(L);
        const double d = moreau_yosida_delta;
        const double s = std::sqrt(L.squaredNorm() + d * d);
        return typename D::PlainObject((yield_stress / s + plastic_viscosity) * L);
    }

    /// Exact (unsmoothed) potential on the deviatoric subspace.
    template <typename D>
    double zeta(const Eigen::MatrixBase<D>& L) const {
        require_deviatoric(L);
        const double n = L.norm();
        return yield_stress * n + 0.5 * plastic_viscosity * n * n;
    }
};

enum class FlowVariant {
    eshelby,     // driving stress Fe^T S, evolution dFe = (grad v) Fe - Fe Lp
    alternative  // driving stress S Fe^T, evolution dFe = (grad v - Lp) Fe
};

struct Material {
    StoredEnergy stored;
    ViscousPotential viscous;
    PlasticPotential plastic;
};

/// Elastic part of the Cauchy stress, phi'(F_e) F_e^T + phi(F_e) I.
template <typename D>
typename D::PlainObject cauchy_elastic(const StoredEnergy& se, const Eigen::MatrixBase<D>& Fe) {
    typename D::PlainObject T = se.phi_prime(Fe) * Fe.transpose();
    const double p = se.phi(Fe);
    for (Eigen::Index i = 0; i < Fe.rows(); ++i) T(i, i) += p;
    return T;
}

/// Configurational stress driving the flow rule: Fe^T phi'(Fe), or
/// phi'(Fe) Fe^T under the alternative flow-rule split.
template <typename D>
typename D::PlainObject eshelby(const StoredEnergy& se, const Eigen::MatrixBase<D>& Fe,
                                FlowVariant variant = FlowVariant::eshelby) {
    typename D::PlainObject S = se.phi_prime(Fe);
    if (variant == FlowVariant::eshelby) return typename D::PlainObject(Fe.transpose() * S);
    return typename D::PlainObject(S * Fe.transpose());
}

/// Bounding factor of the regularized stresses, 1 / (1 + (x - cap)^+).
/// Returns 1 (inactive) whenever x <= cap.
inline double truncation_factor(double x, double cap) {
    const double excess = x - cap;
    return excess > 0.0 ? 1.0 / (1.0 + excess) : 1.0;
}

}  // namespace hypo
