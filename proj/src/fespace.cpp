#include "elastica/fespace.hpp"

#include "elastica/quadrature.hpp"

#include <stdexcept>
#include <string>

namespace elastica {

const char* to_string(DofVariant v) { return v == DofVariant::nodal ? "nodal" : "moment"; }

namespace {

void require_lowest_order(int order)
{
    if (order != 0)
        throw std::invalid_argument("only order r = 0 is implemented (got r = " + std::to_string(order) + ")");
}

// Moment DOFs are barycentric averages of a linear trace g over the entity:
// facet m = M g with M = (1 + delta) / 12, edge m = M g with M = (1 + delta) / 6.
// Moment shape function p is sum_q G(q, p) * nodal shape function q with G = M^{-1}.
constexpr double facet_g(int q, int p) { return q == p ? 9.0 : -3.0; }
constexpr double facet_m(int q, int p) { return q == p ? 2.0 / 12.0 : 1.0 / 12.0; }
constexpr double edge_g(int q, int p) { return q == p ? 4.0 : -2.0; }
constexpr double edge_m(int q, int p) { return q == p ? 2.0 / 6.0 : 1.0 / 6.0; }

} // namespace

std::array<double, 4> reference_to_barycentric(const SimplicialMesh& mesh, Index cell, const Vec3& ref_point)
{
    const AffineMap map = mesh.affine_map(cell);
    return mesh.barycentric(cell, map.jacobian * ref_point + map.translation);
}

// ---------------------------------------------------------------------------
// StressSpace

StressSpace::StressSpace(const SimplicialMesh& mesh, DofVariant variant, int order)
    : mesh_(&mesh), variant_(variant)
{
    require_lowest_order(order);
}

std::array<Index, 36> StressSpace::cell_dofs(Index cell) const
{
    std::array<Index, 36> d;
    const auto& cf = mesh_->cell_facets(cell);
    for (int k = 0; k < 4; ++k)
        for (int p = 0; p < 3; ++p)
            for (int i = 0; i < 3; ++i)
                d[9 * k + 3 * p + i] = dof(cf[k], p, i);
    return d;
}

void StressSpace::shape(Index cell, const std::array<double, 4>& bary, ShapeVectors& out) const
{
    const auto& cv = mesh_->cell(cell);
    const auto& cf = mesh_->cell_facets(cell);
    const auto grad = mesh_->barycentric_gradients(cell);
    for (int k = 0; k < 4; ++k) {
        const Vec3& n = mesh_->facet_normal(cf[k]);
        const Vec3& opposite = mesh_->vertex(cv[k]);
        std::array<Vec3, 3> val;
        std::array<double, 3> div;
        for (int p = 0; p < 3; ++p) {
            // lambda_v times the edge direction towards the opposite vertex, scaled to unit normal trace.
            const int v = local_facet_vertices[k][p];
            const Vec3 edge = opposite - mesh_->vertex(cv[v]);
            const Vec3 dir = edge / edge.dot(n);
            val[p] = bary[v] * dir;
            div[p] = grad[v].dot(dir);
        }
        for (int p = 0; p < 3; ++p) {
            if (variant_ == DofVariant::nodal) {
                out.value[3 * k + p] = val[p];
                out.div[3 * k + p] = div[p];
            } else {
                out.value[3 * k + p] = Vec3::Zero();
                out.div[3 * k + p] = 0.0;
                for (int q = 0; q < 3; ++q) {
                    out.value[3 * k + p] += facet_g(q, p) * val[q];
                    out.div[3 * k + p] += facet_g(q, p) * div[q];
                }
            }
            out.curl[3 * k + p] = Vec3::Zero();
        }
    }
}

void StressSpace::eval(Index cell, const std::array<double, 4>& bary, std::array<Mat3, 36>& values,
                       std::array<Vec3, 36>& divs) const
{
    ShapeVectors s;
    shape(cell, bary, s);
    for (int j = 0; j < 12; ++j)
        for (int i = 0; i < 3; ++i) {
            Mat3& m = values[3 * j + i];
            m.setZero();
            m.row(i) = s.value[j].transpose();
            divs[3 * j + i] = Vec3::Unit(i) * s.div[j];
        }
}

void StressSpace::eval_ref(Index cell, const Vec3& ref_point, std::array<Mat3, 36>& values,
                           std::array<Vec3, 36>& divs) const
{
    eval(cell, reference_to_barycentric(*mesh_, cell, ref_point), values, divs);
}

Mat3 StressSpace::evaluate(std::span<const double> coeffs, Index cell, const std::array<double, 4>& bary) const
{
    ShapeVectors s;
    shape(cell, bary, s);
    const auto& cf = mesh_->cell_facets(cell);
    Mat3 m = Mat3::Zero();
    for (int k = 0; k < 4; ++k)
        for (int p = 0; p < 3; ++p)
            for (int i = 0; i < 3; ++i)
                m.row(i) += coeffs[dof(cf[k], p, i)] * s.value[3 * k + p].transpose();
    return m;
}

Vec3 StressSpace::divergence(std::span<const double> coeffs, Index cell) const
{
    ShapeVectors s;
    shape(cell, {0.25, 0.25, 0.25, 0.25}, s);
    const auto& cf = mesh_->cell_facets(cell);
    Vec3 d = Vec3::Zero();
    for (int k = 0; k < 4; ++k)
        for (int p = 0; p < 3; ++p)
            for (int i = 0; i < 3; ++i)
                d(i) += coeffs[dof(cf[k], p, i)] * s.div[3 * k + p];
    return d;
}

Vector StressSpace::interpolate(const MatField& field) const
{
    Vector c = Vector::Zero(static_cast<Eigen::Index>(size()));
    const auto rule = triangle_rule(6);
    for (Index f = 0; f < mesh_->num_facets(); ++f) {
        const auto& fv = mesh_->facet(f);
        const Vec3& n = mesh_->facet_normal(f);
        for (int p = 0; p < 3; ++p) {
            Vec3 t = Vec3::Zero();
            if (variant_ == DofVariant::nodal) {
                t = field(mesh_->vertex(fv[p])) * n;
            } else {
                for (std::size_t q = 0; q < rule.size(); ++q) {
                    const auto& b = rule.points[q];
                    const Vec3 x = b[0] * mesh_->vertex(fv[0]) + b[1] * mesh_->vertex(fv[1]) +
                                   b[2] * mesh_->vertex(fv[2]);
                    t += rule.weights[q] * b[p] * (field(x) * n);
                }
            }
            for (int i = 0; i < 3; ++i)
                c(dof(f, p, i)) = t(i);
        }
    }
    return c;
}

Vector StressSpace::convert(std::span<const double> coeffs, DofVariant to) const
{
    Vector out(static_cast<Eigen::Index>(size()));
    if (to == variant_) {
        for (std::size_t d = 0; d < size(); ++d)
            out(d) = coeffs[d];
        return out;
    }
    // moment -> nodal: g = G m;  nodal -> moment: m = M g.
    const bool to_nodal = to == DofVariant::nodal;
    for (Index f = 0; f < mesh_->num_facets(); ++f)
        for (int i = 0; i < 3; ++i)
            for (int p = 0; p < 3; ++p) {
                double s = 0.0;
                for (int q = 0; q < 3; ++q)
                    s += (to_nodal ? facet_g(p, q) : facet_m(p, q)) * coeffs[dof(f, q, i)];
                out(dof(f, p, i)) = s;
            }
    return out;
}

// ---------------------------------------------------------------------------
// DisplacementSpace

Vector DisplacementSpace::project(const VecField& u, int quad_degree) const
{
    const auto rule = simplex_rule(quad_degree);
    Vector c(static_cast<Eigen::Index>(size()));
    for (Index t = 0; t < mesh_->num_cells(); ++t) {
        Vec3 avg = Vec3::Zero();
        for (std::size_t q = 0; q < rule.size(); ++q)
            avg += rule.weights[q] * u(mesh_->point(t, rule.points[q]));
        c.segment<3>(static_cast<Eigen::Index>(3 * t)) = avg;
    }
    return c;
}

// ---------------------------------------------------------------------------
// MultiplierSpace

MultiplierSpace::MultiplierSpace(const SimplicialMesh& mesh, DofVariant variant, int order)
    : mesh_(&mesh), variant_(variant)
{
    require_lowest_order(order);
}

std::array<Index, 12> MultiplierSpace::cell_dofs(Index cell) const
{
    std::array<Index, 12> d;
    const auto& ce = mesh_->cell_edges(cell);
    for (int k = 0; k < 6; ++k)
        for (int p = 0; p < 2; ++p)
            d[2 * k + p] = dof(ce[k], p);
    return d;
}

void MultiplierSpace::shape(Index cell, const std::array<double, 4>& bary, ShapeVectors& out) const
{
    const auto& ce = mesh_->cell_edges(cell);
    const auto grad = mesh_->barycentric_gradients(cell);
    for (int k = 0; k < 6; ++k) {
        const Vec3& t = mesh_->edge_tangent(ce[k]);
        std::array<Vec3, 2> val, curl;
        for (int p = 0; p < 2; ++p) {
            // lambda_v times grad lambda_o (o the other endpoint), which is
            // orthogonal to the two other edges through v; scaled to unit tangential trace.
            const int v = local_edge_vertices[k][p];
            const int o = local_edge_vertices[k][1 - p];
            const Vec3 dir = grad[o] / grad[o].dot(t);
            val[p] = bary[v] * dir;
            curl[p] = grad[v].cross(dir);
        }
        for (int p = 0; p < 2; ++p) {
            if (variant_ == DofVariant::nodal) {
                out.value[2 * k + p] = val[p];
                out.curl[2 * k + p] = curl[p];
            } else {
                out.value[2 * k + p] = edge_g(0, p) * val[0] + edge_g(1, p) * val[1];
                out.curl[2 * k + p] = edge_g(0, p) * curl[0] + edge_g(1, p) * curl[1];
            }
            out.div[2 * k + p] = 0.0;
        }
    }
}

void MultiplierSpace::eval(Index cell, const std::array<double, 4>& bary, std::array<Vec3, 12>& values,
                           std::array<Vec3, 12>& curls) const
{
    ShapeVectors s;
    shape(cell, bary, s);
    values = s.value;
    curls = s.curl;
}

void MultiplierSpace::eval_ref(Index cell, const Vec3& ref_point, std::array<Vec3, 12>& values,
                               std::array<Vec3, 12>& curls) const
{
    eval(cell, reference_to_barycentric(*mesh_, cell, ref_point), values, curls);
}

Vec3 MultiplierSpace::evaluate(std::span<const double> coeffs, Index cell, const std::array<double, 4>& bary) const
{
    ShapeVectors s;
    shape(cell, bary, s);
    const auto d = cell_dofs(cell);
    Vec3 w = Vec3::Zero();
    for (int j = 0; j < 12; ++j)
        w += coeffs[d[j]] * s.value[j];
    return w;
}

Vector MultiplierSpace::interpolate(const VecField& proxy) const
{
    Vector c(static_cast<Eigen::Index>(size()));
    const auto rule = line_rule(6);
    for (Index e = 0; e < mesh_->num_edges(); ++e) {
        const auto& ev = mesh_->edge(e);
        const Vec3& t = mesh_->edge_tangent(e);
        for (int p = 0; p < 2; ++p) {
            double s = 0.0;
            if (variant_ == DofVariant::nodal) {
                s = proxy(mesh_->vertex(ev[p])).dot(t);
            } else {
                for (std::size_t q = 0; q < rule.size(); ++q) {
                    const auto& b = rule.points[q];
                    const Vec3 x = b[0] * mesh_->vertex(ev[0]) + b[1] * mesh_->vertex(ev[1]);
                    s += rule.weights[q] * b[p] * proxy(x).dot(t);
                }
            }
            c(dof(e, p)) = s;
        }
    }
    return c;
}

Vector MultiplierSpace::convert(std::span<const double> coeffs, DofVariant to) const
{
    Vector out(static_cast<Eigen::Index>(size()));
    const bool to_nodal = to == DofVariant::nodal;
    for (Index e = 0; e < mesh_->num_edges(); ++e)
        for (int p = 0; p < 2; ++p) {
            if (to == variant_) {
                out(dof(e, p)) = coeffs[dof(e, p)];
                continue;
            }
            double s = 0.0;
            for (int q = 0; q < 2; ++q)
                s += (to_nodal ? edge_g(p, q) : edge_m(p, q)) * coeffs[dof(e, q)];
            out(dof(e, p)) = s;
        }
    return out;
}

Spaces build_spaces(const SimplicialMesh& mesh, DofVariant variant, int order)
{
    Spaces s{StressSpace(mesh, variant, order), DisplacementSpace(mesh), MultiplierSpace(mesh, variant, order), {}};
    s.dofmap.n_sigma = s.stress.size();
    s.dofmap.n_u = s.displacement.size();
    s.dofmap.n_p = s.multiplier.size();
    return s;
}

} // namespace elastica
