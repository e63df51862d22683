#include "elastica/fespace.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace elastica;

namespace {

Mat3 linear_matrix(const Vec3& x)
{
    Mat3 m;
    m << 1 + x(0), 2 * x(1) - x(2), 0.5,  //
        x(2), -1 + 3 * x(0), x(0) + x(1),  //
        0.25 * x(1), 2.0, x(2) - x(0);
    return m;
}

Vec3 linear_vector(const Vec3& x) { return Vec3(1 + x(1), x(0) - 2 * x(2), 0.3 + x(0) + x(1) + x(2)); }

std::span<const double> sp(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

Vector random_coeffs(std::size_t n, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Vector v(n);
    for (auto& c : v)
        c = d(rng);
    return v;
}

const std::array<std::array<double, 4>, 3> probes{{{0.25, 0.25, 0.25, 0.25}, {0.1, 0.2, 0.3, 0.4}, {0.7, 0.1, 0.1, 0.1}}};

} // namespace

class Variants : public ::testing::TestWithParam<DofVariant>
{
};

INSTANTIATE_TEST_SUITE_P(Both, Variants, ::testing::Values(DofVariant::nodal, DofVariant::moment));

TEST_P(Variants, StressReproducesLinears)
{
    const SimplicialMesh m = generate_cube_mesh(2);
    const StressSpace s(m, GetParam());
    const Vector c = s.interpolate(linear_matrix);
    ASSERT_EQ(static_cast<std::size_t>(c.size()), s.size());
    // row-wise divergence, constant.
    const Vec3 div(3, 0, 1);
    for (Index t = 0; t < m.num_cells(); ++t) {
        for (const auto& b : probes)
            EXPECT_LT((s.evaluate(sp(c), t, b) - linear_matrix(m.point(t, b))).norm(), 1e-13);
        EXPECT_LT((s.divergence(sp(c), t) - div).norm(), 1e-12);
    }
}

TEST_P(Variants, MultiplierReproducesLinears)
{
    const SimplicialMesh m = generate_cube_mesh(2);
    const MultiplierSpace q(m, GetParam());
    const Vector c = q.interpolate(linear_vector);
    for (Index t = 0; t < m.num_cells(); ++t)
        for (const auto& b : probes) {
            const Vec3 x = m.point(t, b);
            EXPECT_LT((q.evaluate(sp(c), t, b) - linear_vector(x)).norm(), 1e-13);
            EXPECT_LT((q.evaluate_skew(sp(c), t, b) - skew_of(linear_vector(x))).norm(), 1e-13);
        }
}

TEST_P(Variants, ShapeDivergenceAndCurlMatchDifferences)
{
    const SimplicialMesh m = single_tet_mesh({Vec3(0.1, 0, 0), Vec3(1, 0.2, 0), Vec3(0, 1.5, 0.1), Vec3(0.3, 0.2, 2)});
    const StressSpace s(m, GetParam());
    const MultiplierSpace q(m, GetParam());
    const std::array<double, 4> b0{0.1, 0.2, 0.3, 0.4};
    ShapeVectors sv, qv;
    s.shape(0, b0, sv);
    q.shape(0, b0, qv);
    const double h = 1e-3;
    for (int k = 0; k < 12; ++k) {
        double div = 0.0;
        Vec3 curl = Vec3::Zero();
        for (int d = 0; d < 3; ++d) {
            Vec3 e = Vec3::Zero();
            e(d) = h;
            const Vec3 x = m.point(0, b0);
            ShapeVectors sp, sm, qp, qm;
            s.shape(0, m.barycentric(0, x + e), sp);
            s.shape(0, m.barycentric(0, x - e), sm);
            q.shape(0, m.barycentric(0, x + e), qp);
            q.shape(0, m.barycentric(0, x - e), qm);
            div += (sp.value[k](d) - sm.value[k](d)) / (2 * h);
            const Vec3 dw = (qp.value[k] - qm.value[k]) / (2 * h);
            // curl w = sum_d e_d x dw/dx_d
            curl += Vec3::Unit(d).cross(dw);
        }
        EXPECT_NEAR(sv.div[k], div, 1e-9);
        EXPECT_LT((qv.curl[k] - curl).norm(), 1e-9);
    }
}

TEST_P(Variants, NormalAndTangentialContinuity)
{
    const SimplicialMesh m = generate_cube_mesh(2);
    const StressSpace s(m, GetParam());
    const MultiplierSpace q(m, GetParam());
    const Vector cs = random_coeffs(s.size(), 7);
    const Vector cq = random_coeffs(q.size(), 8);
    std::size_t checked = 0;
    for (Index f = 0; f < m.num_facets(); ++f) {
        const auto fc = m.facet_cells(f);
        if (fc[1] == no_index)
            continue;
        const auto& fv = m.facet(f);
        const Vec3 x = 0.2 * m.vertex(fv[0]) + 0.3 * m.vertex(fv[1]) + 0.5 * m.vertex(fv[2]);
        const Vec3& n = m.facet_normal(f);
        const Mat3 s0 = s.evaluate(sp(cs), fc[0], m.barycentric(fc[0], x));
        const Mat3 s1 = s.evaluate(sp(cs), fc[1], m.barycentric(fc[1], x));
        EXPECT_LT((s0 * n - s1 * n).norm(), 1e-12);
        EXPECT_GT((s0 - s1).norm(), 1e-6);  // full tensor is discontinuous
        const Vec3 w0 = q.evaluate(sp(cq), fc[0], m.barycentric(fc[0], x));
        const Vec3 w1 = q.evaluate(sp(cq), fc[1], m.barycentric(fc[1], x));
        EXPECT_LT((w0.cross(n) - w1.cross(n)).norm(), 1e-12);
        ++checked;
    }
    EXPECT_EQ(checked, m.num_facets() - 48);  // 12 n^2 boundary facets
}

TEST_P(Variants, ConvertRoundTrip)
{
    const SimplicialMesh m = generate_cube_mesh(1);
    const DofVariant v = GetParam();
    const DofVariant other = v == DofVariant::nodal ? DofVariant::moment : DofVariant::nodal;
    const StressSpace s(m, v), s2(m, other);
    const MultiplierSpace q(m, v), q2(m, other);
    const Vector cs = random_coeffs(s.size(), 3);
    const Vector cq = random_coeffs(q.size(), 4);
    const Vector ds = s.convert(sp(cs), other);
    const Vector dq = q.convert(sp(cq), other);
    EXPECT_LT((s2.convert(sp(ds), v) - cs).norm(), 1e-13);
    EXPECT_LT((q2.convert(sp(dq), v) - cq).norm(), 1e-13);
    for (Index t = 0; t < m.num_cells(); ++t)
        for (const auto& b : probes) {
            EXPECT_LT((s.evaluate(sp(cs), t, b) - s2.evaluate(sp(ds), t, b)).norm(), 1e-12);
            EXPECT_LT((q.evaluate(sp(cq), t, b) - q2.evaluate(sp(dq), t, b)).norm(), 1e-12);
        }
    EXPECT_LT((s.convert(sp(cs), v) - cs).norm(), 0.0 + 1e-15);
}

TEST(FeSpace, NodalFunctionals)
{
    // Nodal DOF (f, p, i) reads (sigma n_f)_i at vertex p of facet f; edge DOF (e, p) reads w . t_e at endpoint p.
    const SimplicialMesh m = generate_cube_mesh(1);
    const StressSpace s(m, DofVariant::nodal);
    const MultiplierSpace q(m, DofVariant::nodal);
    for (std::size_t d = 0; d < s.size(); d += 5) {
        Vector e = Vector::Zero(s.size());
        e(d) = 1.0;
        const Index f = d / 9;
        const int p = (d % 9) / 3, i = d % 3;
        const Index t = m.facet_cells(f)[0];
        for (int pp = 0; pp < 3; ++pp) {
            const Vec3 tr = s.evaluate(sp(e), t, m.barycentric(t, m.vertex(m.facet(f)[pp]))) * m.facet_normal(f);
            for (int ii = 0; ii < 3; ++ii)
                EXPECT_NEAR(tr(ii), (pp == p && ii == i) ? 1.0 : 0.0, 1e-13);
        }
        EXPECT_EQ(s.dof_vertex(d), m.facet(f)[p]);
    }
    for (std::size_t d = 0; d < q.size(); ++d) {
        Vector e = Vector::Zero(q.size());
        e(d) = 1.0;
        const Index edge = d / 2;
        const Index t = m.edge_cells(edge)[0];
        for (int pp = 0; pp < 2; ++pp) {
            const Vec3 w = q.evaluate(sp(e), t, m.barycentric(t, m.vertex(m.edge(edge)[pp])));
            EXPECT_NEAR(w.dot(m.edge_tangent(edge)), pp == static_cast<int>(d % 2) ? 1.0 : 0.0, 1e-13);
        }
    }
}

TEST(FeSpace, DisplacementProjection)
{
    const SimplicialMesh m = generate_cube_mesh(2);
    const DisplacementSpace v(m);
    const Vector c = v.project(linear_vector);
    for (Index t = 0; t < m.num_cells(); ++t)
        EXPECT_LT((v.evaluate(sp(c), t) - linear_vector(m.point(t, probes[0]))).norm(), 1e-13);
}

TEST(FeSpace, LayoutAndOrder)
{
    const SimplicialMesh m = generate_cube_mesh(2);
    const Spaces sp = build_spaces(m, DofVariant::nodal);
    EXPECT_EQ(sp.dofmap.n_sigma, 9 * m.num_facets());
    EXPECT_EQ(sp.dofmap.n_u, 3 * m.num_cells());
    EXPECT_EQ(sp.dofmap.n_p, 2 * m.num_edges());
    EXPECT_EQ(sp.dofmap.total(), sp.dofmap.offset_p() + sp.dofmap.n_p);
    EXPECT_THROW(StressSpace(m, DofVariant::nodal, 1), std::invalid_argument);
    EXPECT_THROW(MultiplierSpace(m, DofVariant::moment, 2), std::invalid_argument);
}
