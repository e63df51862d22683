#include "elastica/tensor.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace elastica;

namespace {

Mat3 random_matrix(std::mt19937& rng)
{
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    Mat3 m;
    for (int i = 0; i < 9; ++i)
        m(i / 3, i % 3) = d(rng);
    return m;
}

Vec3 random_vector(std::mt19937& rng)
{
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    return Vec3(d(rng), d(rng), d(rng));
}

} // namespace

TEST(Tensor, SymSkwSplit)
{
    std::mt19937 rng(1);
    for (int t = 0; t < 20; ++t) {
        const Mat3 m = random_matrix(rng);
        EXPECT_LT((sym(m) + skw(m) - m).norm(), 1e-15);
        EXPECT_LT((sym(m) - sym(m).transpose()).norm(), 1e-15);
        EXPECT_LT((skw(m) + skw(m).transpose()).norm(), 1e-15);
        EXPECT_NEAR(ddot(sym(m), skw(m)), 0.0, 1e-14);
    }
}

TEST(Tensor, SkewOfActsAsCrossProduct)
{
    std::mt19937 rng(2);
    for (int t = 0; t < 20; ++t) {
        const Vec3 w = random_vector(rng);
        const Vec3 b = random_vector(rng);
        EXPECT_LT((skew_of(w) * b - w.cross(b)).norm(), 1e-14);
        EXPECT_LT((vec_of(skew_of(w)) - w).norm(), 1e-15);
    }
    // Frobenius product of skew matrices is twice the dot product of their axial vectors.
    const Vec3 a(1, -2, 3), b(0.5, 4, -1);
    EXPECT_NEAR(ddot(skew_of(a), skew_of(b)), 2.0 * a.dot(b), 1e-14);
}

TEST(Tensor, VecOfRejectsNonSkew)
{
    EXPECT_THROW(vec_of(Mat3::Identity()), std::invalid_argument);
    Mat3 k = skew_of(Vec3(1, 2, 3));
    k(0, 1) += 1e-3;
    EXPECT_THROW(vec_of(k), std::invalid_argument);
    EXPECT_NO_THROW(vec_of(Mat3::Zero()));
}

TEST(Tensor, XiKnownValueAndInverse)
{
    Mat3 m;
    m << 1, 2, 3, 4, 5, 6, 7, 8, 10;
    Mat3 expect;  // transpose minus trace 16
    expect << -15, 4, 7, 2, -11, 8, 3, 6, -6;
    EXPECT_LT((xi(m) - expect).norm(), 1e-14);

    std::mt19937 rng(3);
    for (int t = 0; t < 20; ++t) {
        const Mat3 r = random_matrix(rng);
        EXPECT_LT((xi_inv(xi(r)) - r).norm(), 1e-13);
        EXPECT_LT((xi(xi_inv(r)) - r).norm(), 1e-13);
    }
}

TEST(Tensor, ComplianceMatchesClosedForm)
{
    const IsotropicCompliance c{1.0, 1.0};
    Mat3 m;
    m << 1, 2, 0, 0, -1, 3, 1, 0, 1;
    // A M = (M - tr(M) I / 5) / 2 for lambda = mu = 1.
    const Mat3 expect = 0.5 * (m - 0.2 * m.trace() * Mat3::Identity());
    EXPECT_LT((c.apply(m) - expect).norm(), 1e-15);
    EXPECT_LT((c.stiffness(c.apply(m)) - m).norm(), 1e-14);

    Eigen::Matrix<double, 9, 1> v;
    for (int i = 0; i < 9; ++i)
        v(i) = m(i / 3, i % 3);
    const Eigen::Matrix<double, 9, 1> av = c.matrix() * v;
    for (int i = 0; i < 9; ++i)
        EXPECT_NEAR(av(i), expect(i / 3, i % 3), 1e-15);
}

TEST(Tensor, ComplianceSpectrum)
{
    for (const IsotropicCompliance c : {IsotropicCompliance{1.0, 1.0}, IsotropicCompliance{0.0, 0.5},
                                        IsotropicCompliance{100.0, 0.01}, IsotropicCompliance{-0.3, 1.5}}) {
        const Eigen::SelfAdjointEigenSolver<Mat9> es(c.matrix());
        std::vector<double> expect(8, 1.0 / (2.0 * c.mu));
        expect.push_back(1.0 / (3.0 * c.lambda + 2.0 * c.mu));
        std::sort(expect.begin(), expect.end());
        for (int i = 0; i < 9; ++i)
            EXPECT_NEAR(es.eigenvalues()(i), expect[i], 1e-12 * std::max(1.0, expect[i]));
    }
}

TEST(Tensor, ComplianceValidation)
{
    EXPECT_THROW((IsotropicCompliance{1.0, 0.0}.validate()), std::invalid_argument);
    EXPECT_THROW((IsotropicCompliance{-1.0, 1.0}.validate()), std::invalid_argument);
    EXPECT_NO_THROW((IsotropicCompliance{-0.5, 1.0}.validate()));
}

TEST(Tensor, ComplianceField)
{
    const ComplianceField f = [](const Vec3& x, std::size_t) { return IsotropicCompliance{0.0, 1.0 + x(0)}; };
    const Mat3 m = Mat3::Identity();
    EXPECT_LT((apply_compliance(f, m, Vec3(1, 0, 0)) - 0.25 * m).norm(), 1e-15);
    EXPECT_LT((apply_compliance(constant_compliance({0.0, 0.5}), m, Vec3::Zero()) - m).norm(), 1e-15);
}

TEST(Tensor, FiniteDifferencesExactOnQuadratics)
{
    // Central differences are exact for quadratic fields up to roundoff.
    const MatField f = [](const Vec3& x) -> Mat3 {
        Mat3 m;
        m << x(0) * x(0), x(1) * x(2), x(0),  //
            x(1), x(0) * x(1), x(2) * x(2),   //
            x(2) * x(0), 2.0, x(1) * x(1);
        return m;
    };
    const Vec3 x(0.3, -0.4, 0.8);
    const Vec3 div(2 * x(0) + x(2) + 0.0, 0.0 + x(0) + 2 * x(2), x(2));
    EXPECT_LT((fd_div(f, x, 1e-3) - div).norm(), 1e-9);
    EXPECT_LT((fd_div4(f, x, 1e-3) - div).norm(), 1e-9);
    // (curl M)_ij = eps_jkl d_k M_il; row 0 of M is (x0^2, x1 x2, x0): curl = (-x1, -1, 0).
    const Mat3 curl = fd_curl(f, x, 1e-3);
    EXPECT_NEAR(curl(0, 0), -x(1), 1e-9);
    EXPECT_NEAR(curl(0, 1), -1.0, 1e-9);
    EXPECT_NEAR(curl(0, 2), 0.0, 1e-9);
    EXPECT_LT((fd_curl4(f, x, 1e-3) - curl).norm(), 1e-8);
}

TEST(Tensor, DifferentialIdentitiesSecondOrder)
{
    const MatField f = [](const Vec3& x) -> Mat3 {
        Mat3 m;
        m << std::sin(x(0) * x(1)), std::exp(x(2)), std::cos(x(0)),  //
            x(1) * x(1) * x(2), std::sin(x(2) - x(0)), std::exp(-x(1)),  //
            std::cos(x(0) + x(2)), x(0) * x(2), std::sin(3 * x(1));
        return m;
    };
    const std::vector<Vec3> probes{{0.1, 0.2, 0.3}, {0.7, -0.5, 0.2}};
    const double r1 = check_differential_identities(f, probes, 2e-2).max();
    const double r2 = check_differential_identities(f, probes, 1e-2).max();
    EXPECT_GT(r1, 0.0);
    EXPECT_NEAR(std::log2(r1 / r2), 2.0, 0.1);
    EXPECT_LT(check_differential_identities(f, probes, 1e-4).max(), 1e-6);
}
