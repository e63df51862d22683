#pragma once

#include "elastica/tensor.hpp"

#include <array>
#include <cstddef>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace elastica {

using Index = std::size_t;
inline constexpr Index no_index = std::numeric_limits<Index>::max();

/// Local edge k of a cell joins local vertices edge_vertices[k][0] < edge_vertices[k][1].
inline constexpr std::array<std::array<int, 2>, 6> local_edge_vertices{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Local facet k is opposite local vertex k; its vertices in ascending local order.
inline constexpr std::array<std::array<int, 3>, 4> local_facet_vertices{
    {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};

class MeshError : public std::runtime_error
{
public:
    enum class Kind { bad_index, degenerate_cell, nonconforming_facet, hanging_vertex, parse };

    MeshError(Kind kind, std::vector<Index> simplex, const std::string& what)
        : std::runtime_error(what), kind_(kind), simplex_(std::move(simplex))
    {
    }

    Kind kind() const { return kind_; }
    /// Vertex indices of the offending simplex.
    const std::vector<Index>& simplex() const { return simplex_; }

private:
    Kind kind_;
    std::vector<Index> simplex_;
};

struct AffineMap
{
    Mat3 jacobian;
    Vec3 translation;
};

struct MeshQuality
{
    double h_max = 0.0;
    /// max over cells of h_T^3 / |vol T|
    double regularity = 0.0;
};

struct VertexPatch
{
    std::vector<Index> cells;
    std::vector<Index> inner_facets;  // facets of the patch containing the vertex
    std::vector<Index> outer_facets;  // facets of the patch not containing it
    std::vector<Index> edges;         // edges containing the vertex
};

/// Conformal tetrahedral complex. Cells, facets and edges store their vertex
/// indices in ascending order; facet and edge lists are sorted lexicographically.
/// Immutable once built.
class SimplicialMesh
{
public:
    static SimplicialMesh build(std::vector<Vec3> vertices, std::vector<std::array<Index, 4>> cells);

    std::size_t num_vertices() const { return vertices_.size(); }
    std::size_t num_edges() const { return edges_.size(); }
    std::size_t num_facets() const { return facets_.size(); }
    std::size_t num_cells() const { return cells_.size(); }

    const std::vector<Vec3>& vertices() const { return vertices_; }
    const std::vector<std::array<Index, 4>>& cells() const { return cells_; }
    const std::vector<std::array<Index, 3>>& facets() const { return facets_; }
    const std::vector<std::array<Index, 2>>& edges() const { return edges_; }

    const Vec3& vertex(Index v) const { return vertices_[v]; }
    const std::array<Index, 4>& cell(Index c) const { return cells_[c]; }
    const std::array<Index, 3>& facet(Index f) const { return facets_[f]; }
    const std::array<Index, 2>& edge(Index e) const { return edges_[e]; }

    /// Global facet index of local facet k (opposite local vertex k).
    const std::array<Index, 4>& cell_facets(Index c) const { return cell_facets_[c]; }
    const std::array<Index, 6>& cell_edges(Index c) const { return cell_edges_[c]; }
    /// Adjacent cells, lower index first; second is no_index on the boundary.
    const std::array<Index, 2>& facet_cells(Index f) const { return facet_cells_[f]; }
    const std::vector<Index>& edge_cells(Index e) const { return edge_cells_[e]; }
    const std::vector<Index>& vertex_cells(Index v) const { return vertex_cells_[v]; }

    /// Unit normal pointing out of facet_cells(f)[0] (outward on the boundary).
    const Vec3& facet_normal(Index f) const { return facet_normals_[f]; }
    /// Unit tangent from the lower to the higher vertex index.
    const Vec3& edge_tangent(Index e) const { return edge_tangents_[e]; }
    double facet_area(Index f) const { return facet_areas_[f]; }
    double edge_length(Index e) const { return (vertices_[edges_[e][1]] - vertices_[edges_[e][0]]).norm(); }
    double cell_volume(Index c) const { return volumes_[c]; }
    /// +1 if the stored ascending order is positively oriented, -1 otherwise.
    int cell_orientation(Index c) const { return orientation_[c]; }
    /// +1 if facet_normal(cell_facets(c)[k]) points out of c.
    int facet_sign(Index c, int k) const { return facet_cells_[cell_facets_[c][k]][0] == c ? 1 : -1; }

    bool boundary_facet(Index f) const { return facet_cells_[f][1] == no_index; }
    bool boundary_edge(Index e) const { return boundary_edge_[e]; }
    bool boundary_vertex(Index v) const { return boundary_vertex_[v]; }

    Index find_edge(Index a, Index b) const;
    Index find_facet(std::array<Index, 3> verts) const;

    /// Maps (0, e1, e2, e3) onto the cell's vertices in positively oriented order;
    /// det(jacobian) = 6 |vol T|.
    AffineMap affine_map(Index c) const;
    /// Gradients of the barycentric coordinates of the cell's (ascending) vertices.
    std::array<Vec3, 4> barycentric_gradients(Index c) const;
    /// Barycentric coordinates of a physical point with respect to the ascending vertices.
    std::array<double, 4> barycentric(Index c, const Vec3& x) const;
    Vec3 point(Index c, const std::array<double, 4>& bary) const;
    Vec3 centroid(Index c) const;
    double cell_diameter(Index c) const;

    VertexPatch vertex_patch(Index v) const;
    MeshQuality quality() const;
    double total_volume() const;

private:
    std::vector<Vec3> vertices_;
    std::vector<std::array<Index, 4>> cells_;
    std::vector<std::array<Index, 3>> facets_;
    std::vector<std::array<Index, 2>> edges_;
    std::vector<std::array<Index, 4>> cell_facets_;
    std::vector<std::array<Index, 6>> cell_edges_;
    std::vector<std::array<Index, 2>> facet_cells_;
    std::vector<std::vector<Index>> edge_cells_;
    std::vector<std::vector<Index>> vertex_cells_;
    std::vector<Vec3> facet_normals_;
    std::vector<Vec3> edge_tangents_;
    std::vector<double> facet_areas_;
    std::vector<double> volumes_;
    std::vector<int> orientation_;
    std::vector<bool> boundary_edge_;
    std::vector<bool> boundary_vertex_;
};

inline SimplicialMesh build_connectivity(std::vector<Vec3> vertices, std::vector<std::array<Index, 4>> cells)
{
    return SimplicialMesh::build(std::move(vertices), std::move(cells));
}

struct Box
{
    Vec3 lower = Vec3::Zero();
    Vec3 upper = Vec3::Ones();
};

/// (n+1)^3 lattice vertices, each cube split into the 6 Kuhn tetrahedra around its main diagonal.
SimplicialMesh generate_cube_mesh(int n, const Box& extent = {});

/// Single tetrahedron on the given vertices.
SimplicialMesh single_tet_mesh(const std::array<Vec3, 4>& verts);
SimplicialMesh reference_tet_mesh();

/// ASCII format: "tetmesh 1", "<V> <T>", V lines "x y z", T lines "v0 v1 v2 v3" (0-based).
void write_mesh(std::ostream& out, const SimplicialMesh& mesh);
SimplicialMesh read_mesh(std::istream& in);
void write_mesh_file(const std::string& path, const SimplicialMesh& mesh);
SimplicialMesh read_mesh_file(const std::string& path);

} // namespace elastica
