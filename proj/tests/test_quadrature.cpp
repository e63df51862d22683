#include "elastica/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace elastica;

namespace {

double factorial(int n)
{
    double f = 1.0;
    for (int i = 2; i <= n; ++i)
        f *= i;
    return f;
}

// Integral of l0^a l1^b l2^c l3^d over a simplex of unit measure (Dirichlet moments).
double tet_moment(int a, int b, int c, int d)
{
    return factorial(a) * factorial(b) * factorial(c) * factorial(d) * 6.0 / factorial(a + b + c + d + 3);
}

double tri_moment(int a, int b, int c)
{
    return factorial(a) * factorial(b) * factorial(c) * 2.0 / factorial(a + b + c + 2);
}

} // namespace

class TetRule : public ::testing::TestWithParam<int>
{
};

INSTANTIATE_TEST_SUITE_P(Degrees, TetRule, ::testing::Range(1, 7));

TEST_P(TetRule, ExactUpToDegree)
{
    const int deg = GetParam();
    const QuadratureRule r = simplex_rule(deg);
    EXPECT_GE(r.degree, deg);
    EXPECT_NEAR(std::accumulate(r.weights.begin(), r.weights.end(), 0.0), 1.0, 1e-14);
    for (const auto& p : r.points) {
        EXPECT_NEAR(p[0] + p[1] + p[2] + p[3], 1.0, 1e-14);
        for (double c : p)
            EXPECT_GE(c, -1e-14);
    }
    for (int a = 0; a <= deg; ++a)
        for (int b = 0; a + b <= deg; ++b)
            for (int c = 0; a + b + c <= deg; ++c)
                for (int d = 0; a + b + c + d <= deg; ++d) {
                    double q = 0.0;
                    for (std::size_t k = 0; k < r.size(); ++k) {
                        const auto& p = r.points[k];
                        q += r.weights[k] * std::pow(p[0], a) * std::pow(p[1], b) * std::pow(p[2], c) *
                             std::pow(p[3], d);
                    }
                    EXPECT_NEAR(q, tet_moment(a, b, c, d), 1e-13) << a << b << c << d;
                }
}

TEST(Quadrature, InvalidDegree)
{
    EXPECT_THROW(simplex_rule(0), std::invalid_argument);
    EXPECT_THROW(simplex_rule(7), std::invalid_argument);
}

TEST(Quadrature, TriangleAndLineRules)
{
    for (int deg = 1; deg <= 6; ++deg) {
        const TriangleRule t = triangle_rule(deg);
        for (int a = 0; a <= deg; ++a)
            for (int b = 0; a + b <= deg; ++b)
                for (int c = 0; a + b + c <= deg; ++c) {
                    double q = 0.0;
                    for (std::size_t k = 0; k < t.size(); ++k)
                        q += t.weights[k] * std::pow(t.points[k][0], a) * std::pow(t.points[k][1], b) *
                             std::pow(t.points[k][2], c);
                    EXPECT_NEAR(q, tri_moment(a, b, c), 1e-13);
                }
        const LineRule l = line_rule(deg);
        for (int a = 0; a <= deg; ++a) {
            double q = 0.0;
            for (std::size_t k = 0; k < l.size(); ++k)
                q += l.weights[k] * std::pow(l.points[k][0], a);
            EXPECT_NEAR(q, 1.0 / (a + 1), 1e-14);
        }
    }
}

TEST(Quadrature, GaussLegendre)
{
    std::vector<double> x, w;
    gauss_legendre(5, x, w);
    ASSERT_EQ(x.size(), 5u);
    for (int k = 0; k <= 9; ++k) {
        double q = 0.0;
        for (int i = 0; i < 5; ++i)
            q += w[i] * std::pow(x[i], k);
        EXPECT_NEAR(q, 1.0 / (k + 1), 1e-15);
    }
    EXPECT_NEAR(x[2], 0.5, 1e-15);
}

TEST(Quadrature, CornerRuleExactOnLinearsOnly)
{
    const SimplicialMesh m = single_tet_mesh({Vec3(0.1, 0, 0), Vec3(1, 0.2, 0), Vec3(0, 1.5, 0.1), Vec3(0.3, 0.2, 2)});
    const auto linear = [](const Vec3& x) { return 1.0 + 2.0 * x(0) - x(1) + 0.5 * x(2); };
    const auto quad = [](const Vec3& x) { return x(0) * x(1); };
    const QuadratureRule r = simplex_rule(4);
    EXPECT_NEAR(corner_quadrature(m, 0, linear), integrate(m, 0, r, linear), 1e-14);
    EXPECT_GT(std::abs(corner_quadrature(m, 0, quad) - integrate(m, 0, r, quad)), 1e-4);
    EXPECT_NEAR(integrate(m, 0, r, [](const Vec3&) { return 1.0; }), m.cell_volume(0), 1e-15);
}
