#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hypo/tensor.hpp"
#include "test_support.hpp"

using namespace hypo;

TEST_CASE("double contraction basics") {
    Mat I = Mat::Identity(2, 2);
    CHECK(double_contract(I, I) == doctest::Approx(2.0));
    Mat I3 = Mat::Identity(3, 3);
    CHECK(double_contract(I3, I3) == doctest::Approx(3.0));

    Mat a(2, 2), b(3, 3);
    a.setZero();
    b.setZero();
    CHECK_THROWS_AS(double_contract(a, b), DimensionMismatch);
}

TEST_CASE("triple-product contraction identities") {
    // A : (B C) = (B^T A) : C = (A C^T) : B for random triples
    auto g = hypotest::rng(11);
    for (int d : {2, 3}) {
        for (int it = 0; it < 1000; ++it) {
            const Mat A = hypotest::random_matrix(g, d);
            const Mat B = hypotest::random_matrix(g, d);
            const Mat C = hypotest::random_matrix(g, d);
            const double lhs = double_contract(A, Mat(B * C));
            const double m1 = double_contract(Mat(B.transpose() * A), C);
            const double m2 = double_contract(Mat(A * C.transpose()), B);
            const double bound = 1e-12 * (A.norm() * B.norm() * C.norm() + 1.0);
            CHECK(std::abs(lhs - m1) <= bound);
            CHECK(std::abs(lhs - m2) <= bound);
        }
    }
}

TEST_CASE("dev, tr, sym") {
    auto g = hypotest::rng(12);
    CHECK(dev(Mat(Mat::Identity(2, 2))).norm() == doctest::Approx(0.0));
    for (int it = 0; it < 1000; ++it) {
        const Mat a = hypotest::random_matrix(g, (it % 2) ? 2 : 3);
        CHECK(std::abs(tr(dev(a))) <= 1e-14 * (1.0 + a.norm()));
        const Mat s = sym(a);
        CHECK((s - s.transpose()).norm() == doctest::Approx(0.0));
        CHECK(std::abs(double_contract(dev(a), Mat(Mat::Identity(a.rows(), a.rows())))) <=
              1e-14 * (1.0 + a.norm()));
    }
    Mat skew(2, 2);
    skew << 0, 1, -1, 0;
    CHECK(sym(skew).norm() == doctest::Approx(0.0));
}

TEST_CASE("det, cof, inv on closed forms") {
    Mat I = Mat::Identity(2, 2);
    auto r = det_cof_inv(I);
    CHECK(r.det == doctest::Approx(1.0));
    CHECK((r.cof - I).norm() == doctest::Approx(0.0));
    CHECK((r.inv - I).norm() == doctest::Approx(0.0));

    Mat d(2, 2);
    d << 2, 0, 0, 3;
    auto rd = det_cof_inv(d);
    CHECK(rd.det == doctest::Approx(6.0));
    Mat cof_expect(2, 2);
    cof_expect << 3, 0, 0, 2;
    CHECK((rd.cof - cof_expect).norm() == doctest::Approx(0.0));
    Mat inv_expect(2, 2);
    inv_expect << 0.5, 0, 0, 1.0 / 3.0;
    CHECK((rd.inv - inv_expect).norm() <= 1e-15);
}

TEST_CASE("inverse accuracy and singular error") {
    auto g = hypotest::rng(13);
    for (int d : {2, 3}) {
        for (int it = 0; it < 300; ++it) {
            Mat F = hypotest::random_deformation(g, d, 0.3, 3.0);
            Eigen::JacobiSVD<Mat> svd(F);
            const double cond =
                svd.singularValues()(0) / svd.singularValues()(d - 1);
            if (cond > 1e6) continue;
            auto r = det_cof_inv(F);
            CHECK((r.inv * F - Mat::Identity(d, d)).norm() <= 1e-12 * cond);
        }
    }
    Mat sing(2, 2);
    sing << 1, 2, 2, 4;
    CHECK_NOTHROW(det_cof_inv(sing, false));  // cof defined for singular input
    try {
        det_cof_inv(sing);
        CHECK(false);
    } catch (const SingularMatrix& e) {
        CHECK(e.det == doctest::Approx(0.0));
    }
}

TEST_CASE("cofactor is the gradient of the determinant") {
    // (det(F+hG) - det(F-hG)) / 2h -> cof(F) : G at second order in h
    auto g = hypotest::rng(14);
    // d = 2: det is quadratic, so the centered difference is exact up to rounding
    for (int it = 0; it < 200; ++it) {
        const Mat F = hypotest::random_deformation(g, 2, 0.4, 2.5);
        const Mat G = hypotest::random_matrix(g, 2);
        const double exact = double_contract(cofactor(F), G);
        for (double h : {1e-3, 1e-4, 1e-5}) {
            const double fd =
                (determinant(Mat(F + h * G)) - determinant(Mat(F - h * G))) / (2.0 * h);
            CHECK(std::abs(fd - exact) <= 1e-9 * (1.0 + std::abs(exact)));
        }
    }
    // d = 3: genuine O(h^2) error; measure the observed order on the h pair
    int checked = 0;
    for (int it = 0; it < 50; ++it) {
        const Mat F = hypotest::random_deformation(g, 3, 0.4, 2.5);
        const Mat G = hypotest::random_matrix(g, 3);
        const double exact = double_contract(cofactor(F), G);
        std::array<double, 3> hs{1e-3, 1e-4, 1e-5};
        std::array<double, 3> err{};
        for (size_t k = 0; k < hs.size(); ++k) {
            const double h = hs[k];
            const double fd =
                (determinant(Mat(F + h * G)) - determinant(Mat(F - h * G))) / (2.0 * h);
            err[k] = std::abs(fd - exact);
        }
        if (err[0] > 1e-12 && err[1] > 1e-14) {
            const double order = std::log10(err[0] / err[1]);
            CHECK(order >= 1.9);
            ++checked;
        }
        CHECK(err[2] <= 10.0 * err[1] + 1e-10);
    }
    CHECK(checked > 10);  // the order measurement must actually run
}
