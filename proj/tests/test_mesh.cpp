#include "elastica/mesh.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace elastica;

struct Counts
{
    int n;
    std::size_t v, e, f, t;
};

class CubeCounts : public ::testing::TestWithParam<Counts>
{
};

// Frozen from an independent enumeration of the Kuhn triangulation.
INSTANTIATE_TEST_SUITE_P(Kuhn, CubeCounts,
                         ::testing::Values(Counts{1, 8, 19, 18, 6}, Counts{2, 27, 98, 120, 48},
                                           Counts{4, 125, 604, 864, 384}, Counts{8, 729, 4184, 6528, 3072}));

TEST_P(CubeCounts, MatchOracle)
{
    const Counts c = GetParam();
    const SimplicialMesh m = generate_cube_mesh(c.n);
    EXPECT_EQ(m.num_vertices(), c.v);
    EXPECT_EQ(m.num_edges(), c.e);
    EXPECT_EQ(m.num_facets(), c.f);
    EXPECT_EQ(m.num_cells(), c.t);
    EXPECT_EQ(static_cast<long>(c.v) - static_cast<long>(c.e) + static_cast<long>(c.f) - static_cast<long>(c.t), 1);
    EXPECT_NEAR(m.total_volume(), 1.0, 1e-12);
}

TEST(Mesh, IncidenceIsConsistent)
{
    const SimplicialMesh m = generate_cube_mesh(2);
    for (Index c = 0; c < m.num_cells(); ++c) {
        const auto& cv = m.cell(c);
        EXPECT_TRUE(std::is_sorted(cv.begin(), cv.end()));
        for (int k = 0; k < 4; ++k) {
            const auto& fv = m.facet(m.cell_facets(c)[k]);
            const auto& lf = local_facet_vertices[k];
            for (int p = 0; p < 3; ++p)
                EXPECT_EQ(fv[p], cv[lf[p]]);
        }
        for (int k = 0; k < 6; ++k) {
            const auto& ev = m.edge(m.cell_edges(c)[k]);
            EXPECT_EQ(ev[0], cv[local_edge_vertices[k][0]]);
            EXPECT_EQ(ev[1], cv[local_edge_vertices[k][1]]);
        }
    }
    for (Index f = 0; f < m.num_facets(); ++f) {
        const auto fc = m.facet_cells(f);
        EXPECT_NE(fc[0], no_index);
        if (fc[1] != no_index)
            EXPECT_LT(fc[0], fc[1]);
    }
    for (Index e = 0; e < m.num_edges(); ++e)
        for (Index c : m.edge_cells(e)) {
            const auto& ce = m.cell_edges(c);
            EXPECT_NE(std::find(ce.begin(), ce.end(), e), ce.end());
        }
    EXPECT_EQ(m.find_edge(1, 0), m.find_edge(0, 1));
    EXPECT_EQ(m.find_facet({m.facet(5)[2], m.facet(5)[0], m.facet(5)[1]}), Index{5});
    EXPECT_EQ(m.find_edge(0, 26), no_index);
}

TEST(Mesh, BoundaryFlags)
{
    const int n = 3;
    const SimplicialMesh m = generate_cube_mesh(n);
    std::size_t bf = 0, bv = 0;
    for (Index f = 0; f < m.num_facets(); ++f)
        bf += m.boundary_facet(f) ? 1 : 0;
    for (Index v = 0; v < m.num_vertices(); ++v) {
        const Vec3& x = m.vertex(v);
        const bool on = (x.array() < 1e-12).any() || (x.array() > 1 - 1e-12).any();
        EXPECT_EQ(m.boundary_vertex(v), on);
        bv += on ? 1 : 0;
    }
    EXPECT_EQ(bf, static_cast<std::size_t>(12 * n * n));
    EXPECT_EQ(bv, static_cast<std::size_t>((n + 1) * (n + 1) * (n + 1) - (n - 1) * (n - 1) * (n - 1)));
}

TEST(Mesh, NormalsAndOrientation)
{
    const SimplicialMesh m = generate_cube_mesh(2);
    for (Index c = 0; c < m.num_cells(); ++c) {
        Vec3 closure = Vec3::Zero();
        for (int k = 0; k < 4; ++k) {
            const Index f = m.cell_facets(c)[k];
            const Vec3 n = m.facet_sign(c, k) * m.facet_normal(f);
            EXPECT_NEAR(n.norm(), 1.0, 1e-14);
            EXPECT_GT(n.dot(m.vertex(m.facet(f)[0]) - m.vertex(m.cell(c)[k])), 0.0);
            closure += m.facet_area(f) * n;
        }
        EXPECT_LT(closure.norm(), 1e-14);
        const AffineMap map = m.affine_map(c);
        EXPECT_NEAR(map.jacobian.determinant(), 6.0 * m.cell_volume(c), 1e-14);
        EXPECT_GT(m.cell_volume(c), 0.0);
    }
    for (Index e = 0; e < m.num_edges(); ++e) {
        const Vec3 d = m.vertex(m.edge(e)[1]) - m.vertex(m.edge(e)[0]);
        EXPECT_LT((m.edge_tangent(e) - d / d.norm()).norm(), 1e-15);
    }
}

TEST(Mesh, BarycentricRoundTrip)
{
    const SimplicialMesh m = generate_cube_mesh(2);
    const std::array<double, 4> b{0.1, 0.2, 0.3, 0.4};
    for (Index c = 0; c < m.num_cells(); ++c) {
        const auto back = m.barycentric(c, m.point(c, b));
        for (int k = 0; k < 4; ++k)
            EXPECT_NEAR(back[k], b[k], 1e-13);
        const auto g = m.barycentric_gradients(c);
        EXPECT_LT((g[0] + g[1] + g[2] + g[3]).norm(), 1e-13);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                EXPECT_NEAR(g[i].dot(m.vertex(m.cell(c)[j]) - m.vertex(m.cell(c)[0])),
                            (i == j ? 1.0 : 0.0) - (i == 0 ? 1.0 : 0.0), 1e-13);
    }
}

TEST(Mesh, QualityAndPatches)
{
    const SimplicialMesh m = generate_cube_mesh(2);
    const MeshQuality q = m.quality();
    EXPECT_NEAR(q.h_max, std::sqrt(3.0) / 2.0, 1e-14);
    // Kuhn cells of edge 1/n have volume 1/(6 n^3) and diameter sqrt(3)/n.
    EXPECT_NEAR(q.regularity, std::pow(std::sqrt(3.0), 3) * 6.0, 1e-10);

    const Index centre = 13;  // (1/2, 1/2, 1/2)
    ASSERT_LT((m.vertex(centre) - Vec3(0.5, 0.5, 0.5)).norm(), 1e-15);
    const VertexPatch p = m.vertex_patch(centre);
    EXPECT_EQ(p.cells.size(), 24u);
    EXPECT_EQ(p.outer_facets.size(), 24u);
    EXPECT_EQ(p.inner_facets.size(), 36u);
    EXPECT_EQ(p.edges.size(), 14u);
    EXPECT_EQ(m.vertex_cells(centre).size(), 24u);
}

TEST(Mesh, RejectsBadInput)
{
    const std::vector<Vec3> v{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}};
    try {
        SimplicialMesh::build(v, {{0, 1, 2, 9}});
        FAIL() << "expected bad index";
    } catch (const MeshError& e) {
        EXPECT_EQ(e.kind(), MeshError::Kind::bad_index);
    }
    try {
        SimplicialMesh::build({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {0, 1, 0}}, {{0, 1, 2, 3}});
        FAIL() << "expected degenerate cell";
    } catch (const MeshError& e) {
        EXPECT_EQ(e.kind(), MeshError::Kind::degenerate_cell);
        EXPECT_EQ(e.simplex(), (std::vector<Index>{0, 1, 2, 3}));
    }
    try {
        // Three cells sharing facet (0, 1, 2).
        SimplicialMesh::build({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, -1}, {0.2, 0.2, 2}},
                              {{0, 1, 2, 3}, {0, 1, 2, 4}, {0, 1, 2, 5}});
        FAIL() << "expected nonconforming facet";
    } catch (const MeshError& e) {
        EXPECT_EQ(e.kind(), MeshError::Kind::nonconforming_facet);
        EXPECT_EQ(e.simplex(), (std::vector<Index>{0, 1, 2}));
    }
    try {
        // Facet (0, 1, 2) of the first cell meets two cells split at the midpoint 5 of edge (1, 2).
        SimplicialMesh::build({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0.3, 0.3, -1}, {0.5, 0.5, 0}},
                              {{0, 1, 2, 3}, {0, 1, 5, 4}, {0, 2, 5, 4}});
        FAIL() << "expected hanging vertex";
    } catch (const MeshError& e) {
        EXPECT_EQ(e.kind(), MeshError::Kind::hanging_vertex);
    }
}

TEST(Mesh, SingleTetrahedron)
{
    const SimplicialMesh r = reference_tet_mesh();
    EXPECT_EQ(r.num_facets(), 4u);
    EXPECT_EQ(r.num_edges(), 6u);
    EXPECT_NEAR(r.cell_volume(0), 1.0 / 6.0, 1e-15);
    const SimplicialMesh s = single_tet_mesh({Vec3(0, 0, 0), Vec3(0, 1, 0), Vec3(1, 0, 0), Vec3(0, 0, 2)});
    EXPECT_EQ(s.cell_orientation(0), -1);
    EXPECT_NEAR(s.affine_map(0).jacobian.determinant(), 2.0, 1e-14);
}

TEST(MeshIO, HeaderAndRoundTrip)
{
    std::ostringstream a;
    write_mesh(a, generate_cube_mesh(1));
    EXPECT_EQ(a.str().rfind("tetmesh 1\n8 6\n", 0), 0u);

    std::ostringstream b;
    write_mesh(b, generate_cube_mesh(2));
    EXPECT_EQ(b.str().rfind("tetmesh 1\n27 48\n", 0), 0u);
    std::istringstream in(b.str());
    const SimplicialMesh back = read_mesh(in);
    std::ostringstream c;
    write_mesh(c, back);
    EXPECT_EQ(b.str(), c.str());

    const Box box{Vec3(-1, 0.1, 2), Vec3(0.3, 0.7, 2.9)};
    std::ostringstream d;
    write_mesh(d, generate_cube_mesh(3, box));
    std::istringstream in2(d.str());
    const SimplicialMesh back2 = read_mesh(in2);
    EXPECT_NEAR(back2.total_volume(), 1.3 * 0.6 * 0.9, 1e-14);
}

TEST(MeshIO, ParseErrors)
{
    for (const std::string bad : {"", "tetmesh 2\n0 0\n", "tetmesh 1\n4 1\n0 0 0\n1 0 0\n0 1 0\n",
                                  "tetmesh 1\n4 1\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n0 1 2\n"}) {
        std::istringstream in(bad);
        try {
            read_mesh(in);
            FAIL() << "accepted: " << bad;
        } catch (const MeshError& e) {
            EXPECT_EQ(e.kind(), MeshError::Kind::parse);
        }
    }
    EXPECT_THROW(read_mesh_file("/nonexistent/dir/mesh.tet"), std::exception);
}
