#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hypo/materials.hpp"
#include "test_support.hpp"

using namespace hypo;

static StoredEnergy default_energy() { return StoredEnergy{100.0, 300.0, 0.05, 9.0}; }

TEST_CASE("stored energy is calibrated at the reference state") {
    const StoredEnergy se = default_energy();
    const Mat2 I = Mat2::Identity();
    CHECK(se.phi(I) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(se.phi_prime(I).norm() <= 1e-12);
}

TEST_CASE("frame indifference") {
    const StoredEnergy se = default_energy();
    auto g = hypotest::rng(21);
    for (int it = 0; it < 100; ++it) {
        const Mat F = hypotest::random_deformation(g, 2, 0.5, 2.0);
        const Mat R = hypotest::random_rotation2(g);
        CHECK(std::abs(se.phi(Mat(R * F)) - se.phi(F)) <=
              1e-10 * (1.0 + std::abs(se.phi(F))));
    }
    // d = 3 path
    for (int it = 0; it < 20; ++it) {
        const Mat F = hypotest::random_deformation(g, 3, 0.5, 2.0);
        const Mat R = hypotest::random_rotation3(g);
        CHECK(std::abs(se.phi(Mat(R * F)) - se.phi(F)) <=
              1e-10 * (1.0 + std::abs(se.phi(F))));
    }
}

TEST_CASE("phi attains its minimum 0 exactly on rotations") {
    const StoredEnergy se = default_energy();
    auto g = hypotest::rng(22);
    for (int it = 0; it < 50; ++it) {
        const Mat2 R = hypotest::random_rotation2(g);
        CHECK(std::abs(se.phi(R)) <= 1e-12);
        CHECK(se.phi_prime(R).norm() <= 1e-10);
    }
    for (int it = 0; it < 200; ++it) {
        const Mat F = hypotest::random_deformation(g, 2, 0.4, 2.2);
        Eigen::JacobiSVD<Mat> svd(F);
        const double dist_to_rot = (svd.singularValues().array() - 1.0).abs().maxCoeff();
        if (dist_to_rot > 1e-3) CHECK(se.phi(F) > 0.0);
    }
}

TEST_CASE("phi_prime is the Frechet derivative of phi") {
    const StoredEnergy se = default_energy();
    auto g = hypotest::rng(23);
    int checked = 0;
    for (int it = 0; it < 40; ++it) {
        const Mat F = hypotest::random_deformation(g, 2, 0.5, 2.0);
        const Mat G = hypotest::random_matrix(g, 2);
        const double exact = double_contract(se.phi_prime(F), G);
        std::array<double, 2> hs{1e-3, 1e-4};
        std::array<double, 2> err{};
        for (size_t k = 0; k < hs.size(); ++k) {
            const double h = hs[k];
            err[k] = std::abs((se.phi(Mat(F + h * G)) - se.phi(Mat(F - h * G))) / (2 * h) -
                              exact);
        }
        if (err[0] > 1e-9) {
            CHECK(std::log10(err[0] / err[1]) >= 1.9);
            ++checked;
        }
    }
    CHECK(checked > 10);
}

TEST_CASE("determinant collapse raises the blow-up error") {
    const StoredEnergy se = default_energy();
    Mat2 F;
    F << 1.0, 0.0, 0.0, -0.5;
    try {
        se.phi(F);
        CHECK(false);
    } catch (const DeterminantCollapse& e) {
        CHECK(e.det == doctest::Approx(-0.5));
    }
    CHECK_THROWS_AS(se.phi_prime(F), DeterminantCollapse);
}

TEST_CASE("blow-up lower bounds") {
    const StoredEnergy se = default_energy();
    for (double t : {0.1, 0.01}) {
        Mat2 F;
        F << t, 0, 0, 1;
        CHECK(se.phi(F) >= se.blowup_coeff / std::pow(t, se.blowup_exponent));
    }
    // shifted global bound phi + (1+vk) eps >= eps / J^vk on random samples
    auto g = hypotest::rng(24);
    for (int it = 0; it < 500; ++it) {
        const Mat F = hypotest::random_deformation(g, 2, 0.05, 3.0);
        const double J = F.determinant();
        CHECK(se.phi(F) + (1.0 + se.blowup_exponent) * se.blowup_coeff >=
              se.blowup_coeff / std::pow(J, se.blowup_exponent) - 1e-9);
    }
}

TEST_CASE("elastic Cauchy stress") {
    const StoredEnergy se = default_energy();
    const Mat2 I = Mat2::Identity();
    CHECK(cauchy_elastic(se, I).norm() <= 1e-12);
    auto g = hypotest::rng(25);
    for (int it = 0; it < 50; ++it) {
        const Mat2 R = hypotest::random_rotation2(g);
        CHECK(cauchy_elastic(se, R).norm() <= 1e-10);
        const Mat F = hypotest::random_deformation(g, 2, 0.5, 2.0);
        const Mat T = cauchy_elastic(se, F);
        CHECK((T - T.transpose()).norm() <= 1e-10 * (1.0 + T.norm()));
    }
}

TEST_CASE("configurational driving stress and the alternative variant") {
    const StoredEnergy se = default_energy();
    const Mat2 I = Mat2::Identity();
    CHECK(eshelby(se, I).norm() <= 1e-12);

    const double lam = 1.2;
    Mat2 F;
    F << lam, 0, 0, 1.0 / lam;
    // diagonal argument: closed-form Fe^T phi'(Fe) for the default phi
    const double J = 1.0;
    const double vol = -se.shear_modulus + se.bulk_modulus * std::log(J) +
                       se.blowup_exponent * se.blowup_coeff *
                           (J - std::pow(J, -se.blowup_exponent));
    Mat2 expect;
    expect << se.shear_modulus * lam * lam + vol, 0, 0,
        se.shear_modulus / (lam * lam) + vol;
    CHECK((eshelby(se, F) - expect).norm() <= 1e-12 * expect.norm());
    CHECK(dev(eshelby(se, F)).norm() > 1.0);  // nonzero deviatoric drive for lam != 1

    const Mat2 Ealt = eshelby(se, F, FlowVariant::alternative);
    CHECK((Ealt - Mat2(se.phi_prime(F) * F.transpose())).norm() <=
          1e-14 * (1 + Ealt.norm()));
}

TEST_CASE("viscous potential") {
    const ViscousPotential xi{20.0, 20.0, 1.0};
    CHECK(xi.xi_prime(Mat2(Mat2::Zero())).norm() == 0.0);
    auto g = hypotest::rng(26);
    for (int it = 0; it < 1000; ++it) {
        const Mat2 a = sym(Mat2(hypotest::random_matrix(g, 2)));
        const Mat2 b = sym(Mat2(hypotest::random_matrix(g, 2)));
        const double m = double_contract(Mat2(xi.xi_prime(a) - xi.xi_prime(b)), Mat2(a - b));
        CHECK(m >= -1e-14);
    }
}

TEST_CASE("plastic potential: smoothing and creep limit") {
    auto g = hypotest::rng(27);
    PlasticPotential creep{0.0, 100.0, 2.0, 1e-6};
    for (int it = 0; it < 100; ++it) {
        Mat2 L = dev(Mat2(hypotest::random_matrix(g, 2)));
        CHECK((creep.zeta_delta_prime(L) - Mat2(creep.plastic_viscosity * L)).norm() <=
              1e-14 * (1 + L.norm()));
    }

    PlasticPotential yield{5.0, 100.0, 1.0, 1e-4};
    CHECK(yield.zeta_delta_prime(Mat2(Mat2::Zero())).norm() == 0.0);
    for (int it = 0; it < 500; ++it) {
        const Mat2 a = dev(Mat2(hypotest::random_matrix(g, 2)));
        const Mat2 b = dev(Mat2(hypotest::random_matrix(g, 2)));
        const double m =
            double_contract(Mat2(yield.zeta_delta_prime(a) - yield.zeta_delta_prime(b)),
                            Mat2(a - b));
        CHECK(m >= -1e-14);
        // smoothing bounds: zeta_delta <= zeta and |zeta_delta - zeta| <= sigma_y delta
        CHECK(yield.zeta_delta(a) <= yield.zeta(a) + 1e-15);
        CHECK(std::abs(yield.zeta_delta(a) - yield.zeta(a)) <=
              yield.yield_stress * yield.moreau_yosida_delta + 1e-15);
    }
    // far from the smoothing scale the subgradient matches sigma_y L/|L| + mu_p L
    for (int it = 0; it < 100; ++it) {
        Mat2 L = dev(Mat2(hypotest::random_matrix(g, 2)));
        if (L.norm() < 50 * yield.moreau_yosida_delta) continue;
        const Mat2 sharp =
            Mat2(yield.yield_stress * L / L.norm() + yield.plastic_viscosity * L);
        const double bound = yield.yield_stress * yield.moreau_yosida_delta *
                             yield.moreau_yosida_delta / L.squaredNorm();
        CHECK((yield.zeta_delta_prime(L) - sharp).norm() <= bound + 1e-15);
    }

    // +infinity branch off the deviatoric subspace is a contract violation
    Mat2 bad;
    bad << 1, 0, 0, 1;
    CHECK_THROWS_AS(yield.zeta_delta(bad), NonDeviatoric);
    CHECK_THROWS_AS(yield.zeta_delta_prime(bad), NonDeviatoric);
}

TEST_CASE("truncation factor") {
    CHECK(truncation_factor(0.5, 1.0) == 1.0);
    CHECK(truncation_factor(1.0, 1.0) == 1.0);
    CHECK(truncation_factor(3.0, 1.0) == doctest::Approx(1.0 / 3.0));
}
