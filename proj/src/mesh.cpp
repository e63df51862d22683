#include "elastica/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace elastica {

namespace {

template <std::size_t N>
std::string simplex_string(const std::array<Index, N>& s)
{
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < N; ++i)
        os << (i ? "," : "") << s[i];
    os << ')';
    return os.str();
}

template <std::size_t N>
std::vector<Index> to_vector(const std::array<Index, N>& s)
{
    return {s.begin(), s.end()};
}

double signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d)
{
    return (b - a).dot((c - a).cross(d - a)) / 6.0;
}

// Point p in the closed triangle (a, b, c) and on its plane, but not one of its corners.
bool lies_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c, double tol)
{
    const Vec3 n = (b - a).cross(c - a);
    const double area2 = n.norm();
    if (std::abs((p - a).dot(n)) > tol * area2)
        return false;
    const double l0 = (b - p).cross(c - p).dot(n) / (area2 * area2);
    const double l1 = (c - p).cross(a - p).dot(n) / (area2 * area2);
    const double l2 = 1.0 - l0 - l1;
    const double eps = 1e-10;
    return l0 >= -eps && l1 >= -eps && l2 >= -eps;
}

} // namespace

SimplicialMesh SimplicialMesh::build(std::vector<Vec3> vertices, std::vector<std::array<Index, 4>> cells)
{
    SimplicialMesh m;
    m.vertices_ = std::move(vertices);
    m.cells_ = std::move(cells);
    const std::size_t nv = m.vertices_.size();
    const std::size_t nc = m.cells_.size();

    m.volumes_.resize(nc);
    m.orientation_.resize(nc);
    for (Index c = 0; c < nc; ++c) {
        auto& cell = m.cells_[c];
        for (Index v : cell)
            if (v >= nv)
                throw MeshError(MeshError::Kind::bad_index, to_vector(cell),
                                "cell " + std::to_string(c) + " references missing vertex " + std::to_string(v));
        std::sort(cell.begin(), cell.end());
        if (std::adjacent_find(cell.begin(), cell.end()) != cell.end())
            throw MeshError(MeshError::Kind::degenerate_cell, to_vector(cell),
                            "cell " + std::to_string(c) + " repeats a vertex " + simplex_string(cell));
        const double vol = signed_volume(m.vertices_[cell[0]], m.vertices_[cell[1]], m.vertices_[cell[2]],
                                         m.vertices_[cell[3]]);
        double h = 0.0;
        for (const auto& e : local_edge_vertices)
            h = std::max(h, (m.vertices_[cell[e[1]]] - m.vertices_[cell[e[0]]]).norm());
        if (std::abs(vol) <= 1e-12 * h * h * h)
            throw MeshError(MeshError::Kind::degenerate_cell, to_vector(cell),
                            "cell " + std::to_string(c) + " has zero volume " + simplex_string(cell));
        m.volumes_[c] = std::abs(vol);
        m.orientation_[c] = vol > 0 ? 1 : -1;
    }

    // Facets: gather (tuple, cell, local index), sort, group.
    struct FacetRef { std::array<Index, 3> verts; Index cell; int local; };
    std::vector<FacetRef> frefs;
    frefs.reserve(4 * nc);
    for (Index c = 0; c < nc; ++c)
        for (int k = 0; k < 4; ++k) {
            const auto& lf = local_facet_vertices[k];
            frefs.push_back({{m.cells_[c][lf[0]], m.cells_[c][lf[1]], m.cells_[c][lf[2]]}, c, k});
        }
    std::sort(frefs.begin(), frefs.end(), [](const FacetRef& a, const FacetRef& b) {
        return a.verts != b.verts ? a.verts < b.verts : a.cell < b.cell;
    });
    m.cell_facets_.assign(nc, {});
    for (std::size_t i = 0; i < frefs.size();) {
        std::size_t j = i;
        while (j < frefs.size() && frefs[j].verts == frefs[i].verts)
            ++j;
        if (j - i > 2)
            throw MeshError(MeshError::Kind::nonconforming_facet, to_vector(frefs[i].verts),
                            "facet " + simplex_string(frefs[i].verts) + " is shared by " + std::to_string(j - i) +
                                " cells");
        const Index f = m.facets_.size();
        m.facets_.push_back(frefs[i].verts);
        m.facet_cells_.push_back({frefs[i].cell, j - i == 2 ? frefs[i + 1].cell : no_index});
        for (std::size_t k = i; k < j; ++k)
            m.cell_facets_[frefs[k].cell][frefs[k].local] = f;
        i = j;
    }

    struct EdgeRef { std::array<Index, 2> verts; Index cell; int local; };
    std::vector<EdgeRef> erefs;
    erefs.reserve(6 * nc);
    for (Index c = 0; c < nc; ++c)
        for (int k = 0; k < 6; ++k) {
            const auto& le = local_edge_vertices[k];
            erefs.push_back({{m.cells_[c][le[0]], m.cells_[c][le[1]]}, c, k});
        }
    std::sort(erefs.begin(), erefs.end(), [](const EdgeRef& a, const EdgeRef& b) {
        return a.verts != b.verts ? a.verts < b.verts : a.cell < b.cell;
    });
    m.cell_edges_.assign(nc, {});
    for (std::size_t i = 0; i < erefs.size();) {
        std::size_t j = i;
        while (j < erefs.size() && erefs[j].verts == erefs[i].verts)
            ++j;
        const Index e = m.edges_.size();
        m.edges_.push_back(erefs[i].verts);
        std::vector<Index> adj;
        for (std::size_t k = i; k < j; ++k) {
            m.cell_edges_[erefs[k].cell][erefs[k].local] = e;
            adj.push_back(erefs[k].cell);
        }
        m.edge_cells_.push_back(std::move(adj));
        i = j;
    }

    m.vertex_cells_.assign(nv, {});
    for (Index c = 0; c < nc; ++c)
        for (Index v : m.cells_[c])
            m.vertex_cells_[v].push_back(c);

    m.facet_normals_.resize(m.facets_.size());
    m.facet_areas_.resize(m.facets_.size());
    for (Index f = 0; f < m.facets_.size(); ++f) {
        const auto& fv = m.facets_[f];
        const Vec3& a = m.vertices_[fv[0]];
        Vec3 n = (m.vertices_[fv[1]] - a).cross(m.vertices_[fv[2]] - a);
        m.facet_areas_[f] = 0.5 * n.norm();
        n.normalize();
        const Index c0 = m.facet_cells_[f][0];
        const auto& cf = m.cell_facets_[c0];
        const int k = static_cast<int>(std::find(cf.begin(), cf.end(), f) - cf.begin());
        if (n.dot(m.vertices_[m.cells_[c0][k]] - a) > 0)
            n = -n;
        m.facet_normals_[f] = n;
    }

    m.edge_tangents_.resize(m.edges_.size());
    for (Index e = 0; e < m.edges_.size(); ++e)
        m.edge_tangents_[e] = (m.vertices_[m.edges_[e][1]] - m.vertices_[m.edges_[e][0]]).normalized();

    m.boundary_edge_.assign(m.edges_.size(), false);
    m.boundary_vertex_.assign(nv, false);
    for (Index f = 0; f < m.facets_.size(); ++f) {
        if (!m.boundary_facet(f))
            continue;
        const auto& fv = m.facets_[f];
        for (Index v : fv)
            m.boundary_vertex_[v] = true;
        m.boundary_edge_[m.find_edge(fv[0], fv[1])] = true;
        m.boundary_edge_[m.find_edge(fv[0], fv[2])] = true;
        m.boundary_edge_[m.find_edge(fv[1], fv[2])] = true;
    }

    // A vertex lying on a boundary facet that does not contain it signals a
    // hanging node (the facet is really an interface with a refined neighbour).
    std::vector<Index> by_x(nv);
    std::iota(by_x.begin(), by_x.end(), Index{0});
    std::sort(by_x.begin(), by_x.end(),
              [&](Index a, Index b) { return m.vertices_[a](0) < m.vertices_[b](0); });
    for (Index f = 0; f < m.facets_.size(); ++f) {
        if (!m.boundary_facet(f))
            continue;
        const auto& fv = m.facets_[f];
        const Vec3& a = m.vertices_[fv[0]];
        const Vec3& b = m.vertices_[fv[1]];
        const Vec3& c = m.vertices_[fv[2]];
        const Vec3 lo = a.cwiseMin(b).cwiseMin(c);
        const Vec3 hi = a.cwiseMax(b).cwiseMax(c);
        const double tol = 1e-10 * (hi - lo).norm();
        auto it = std::lower_bound(by_x.begin(), by_x.end(), lo(0) - tol,
                                   [&](Index v, double x) { return m.vertices_[v](0) < x; });
        for (; it != by_x.end() && m.vertices_[*it](0) <= hi(0) + tol; ++it) {
            const Index v = *it;
            if (v == fv[0] || v == fv[1] || v == fv[2])
                continue;
            const Vec3& p = m.vertices_[v];
            if ((p.array() < lo.array() - tol).any() || (p.array() > hi.array() + tol).any())
                continue;
            if (lies_on_triangle(p, a, b, c, 1e-10))
                throw MeshError(MeshError::Kind::hanging_vertex, to_vector(fv),
                                "vertex " + std::to_string(v) + " hangs on facet " + simplex_string(fv));
        }
    }
    return m;
}

Index SimplicialMesh::find_edge(Index a, Index b) const
{
    const std::array<Index, 2> key{std::min(a, b), std::max(a, b)};
    auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
    return (it != edges_.end() && *it == key) ? static_cast<Index>(it - edges_.begin()) : no_index;
}

Index SimplicialMesh::find_facet(std::array<Index, 3> verts) const
{
    std::sort(verts.begin(), verts.end());
    auto it = std::lower_bound(facets_.begin(), facets_.end(), verts);
    return (it != facets_.end() && *it == verts) ? static_cast<Index>(it - facets_.begin()) : no_index;
}

AffineMap SimplicialMesh::affine_map(Index c) const
{
    auto v = cells_[c];
    if (orientation_[c] < 0)
        std::swap(v[2], v[3]);
    const Vec3& x0 = vertices_[v[0]];
    AffineMap map;
    map.jacobian.col(0) = vertices_[v[1]] - x0;
    map.jacobian.col(1) = vertices_[v[2]] - x0;
    map.jacobian.col(2) = vertices_[v[3]] - x0;
    map.translation = x0;
    return map;
}

std::array<Vec3, 4> SimplicialMesh::barycentric_gradients(Index c) const
{
    const auto& v = cells_[c];
    const Vec3& x0 = vertices_[v[0]];
    Mat3 j;
    j.col(0) = vertices_[v[1]] - x0;
    j.col(1) = vertices_[v[2]] - x0;
    j.col(2) = vertices_[v[3]] - x0;
    // Rows of J^{-1} are the gradients of lambda_1..lambda_3.
    const Mat3 jinv = j.inverse();
    std::array<Vec3, 4> g;
    for (int k = 1; k < 4; ++k)
        g[k] = jinv.row(k - 1).transpose();
    g[0] = -(g[1] + g[2] + g[3]);
    return g;
}

std::array<double, 4> SimplicialMesh::barycentric(Index c, const Vec3& x) const
{
    const auto g = barycentric_gradients(c);
    const Vec3 d = x - vertices_[cells_[c][0]];
    std::array<double, 4> l;
    l[1] = g[1].dot(d);
    l[2] = g[2].dot(d);
    l[3] = g[3].dot(d);
    l[0] = 1.0 - l[1] - l[2] - l[3];
    return l;
}

Vec3 SimplicialMesh::point(Index c, const std::array<double, 4>& bary) const
{
    Vec3 x = Vec3::Zero();
    for (int k = 0; k < 4; ++k)
        x += bary[k] * vertices_[cells_[c][k]];
    return x;
}

Vec3 SimplicialMesh::centroid(Index c) const { return point(c, {0.25, 0.25, 0.25, 0.25}); }

double SimplicialMesh::cell_diameter(Index c) const
{
    double h = 0.0;
    for (const auto& e : local_edge_vertices)
        h = std::max(h, (vertices_[cells_[c][e[1]]] - vertices_[cells_[c][e[0]]]).norm());
    return h;
}

VertexPatch SimplicialMesh::vertex_patch(Index v) const
{
    VertexPatch p;
    p.cells = vertex_cells_[v];
    std::vector<Index> facets;
    for (Index c : p.cells)
        for (Index f : cell_facets_[c])
            facets.push_back(f);
    std::sort(facets.begin(), facets.end());
    facets.erase(std::unique(facets.begin(), facets.end()), facets.end());
    for (Index f : facets) {
        const auto& fv = facets_[f];
        if (std::find(fv.begin(), fv.end(), v) != fv.end())
            p.inner_facets.push_back(f);
        else
            p.outer_facets.push_back(f);
    }
    for (Index c : p.cells)
        for (Index e : cell_edges_[c])
            if (edges_[e][0] == v || edges_[e][1] == v)
                p.edges.push_back(e);
    std::sort(p.edges.begin(), p.edges.end());
    p.edges.erase(std::unique(p.edges.begin(), p.edges.end()), p.edges.end());
    return p;
}

MeshQuality SimplicialMesh::quality() const
{
    MeshQuality q;
    for (Index c = 0; c < cells_.size(); ++c) {
        const double h = cell_diameter(c);
        q.h_max = std::max(q.h_max, h);
        q.regularity = std::max(q.regularity, h * h * h / volumes_[c]);
    }
    return q;
}

double SimplicialMesh::total_volume() const
{
    return std::accumulate(volumes_.begin(), volumes_.end(), 0.0);
}

SimplicialMesh generate_cube_mesh(int n, const Box& extent)
{
    if (n < 1)
        throw std::invalid_argument("generate_cube_mesh: n must be positive");
    const Index m = static_cast<Index>(n) + 1;
    auto id = [m](Index i, Index j, Index k) { return (i * m + j) * m + k; };

    std::vector<Vec3> verts;
    verts.reserve(m * m * m);
    const Vec3 span = extent.upper - extent.lower;
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j)
            for (Index k = 0; k < m; ++k)
                verts.push_back(extent.lower + Vec3(span(0) * double(i) / n, span(1) * double(j) / n,
                                                    span(2) * double(k) / n));

    static constexpr std::array<std::array<int, 3>, 6> perms{
        {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    std::vector<std::array<Index, 4>> cells;
    cells.reserve(6 * static_cast<Index>(n) * n * n);
    for (Index i = 0; i < m - 1; ++i)
        for (Index j = 0; j < m - 1; ++j)
            for (Index k = 0; k < m - 1; ++k)
                for (const auto& p : perms) {
                    std::array<Index, 3> ijk{i, j, k};
                    std::array<Index, 4> cell;
                    cell[0] = id(ijk[0], ijk[1], ijk[2]);
                    for (int s = 0; s < 3; ++s) {
                        ++ijk[p[s]];
                        cell[s + 1] = id(ijk[0], ijk[1], ijk[2]);
                    }
                    cells.push_back(cell);
                }
    return SimplicialMesh::build(std::move(verts), std::move(cells));
}

SimplicialMesh single_tet_mesh(const std::array<Vec3, 4>& verts)
{
    return SimplicialMesh::build({verts.begin(), verts.end()}, {{0, 1, 2, 3}});
}

SimplicialMesh reference_tet_mesh()
{
    return single_tet_mesh({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)});
}

} // namespace elastica
