#pragma once

#include "elastica/mesh.hpp"
#include "elastica/tensor.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <span>

namespace elastica {

/// Unisolvent functionals for the facet (stress) and edge (multiplier) spaces.
///  nodal:  (sigma n_f)_i at facet vertices, (w . t_e) at edge endpoints
///  moment: the same traces averaged against the facet/edge barycentric coordinates
enum class DofVariant { moment, nodal };

const char* to_string(DofVariant v);

using VecField = std::function<Vec3(const Vec3&)>;
using Vector = Eigen::VectorXd;

/// Values of the 12 vector shape functions of one cell. Stress shape function
/// (k, p, i) is the matrix with row i equal to vec[3k + p] and zeros elsewhere.
struct ShapeVectors
{
    std::array<Vec3, 12> value;
    std::array<double, 12> div;   // stress: divergence of the row
    std::array<Vec3, 12> curl;    // multiplier: curl of the proxy
};

/// Piecewise-linear H(div) rows (P1 Lambda^2 per row), 9 DOFs per facet.
/// Global DOF (f, p, i) = 9 f + 3 p + i, p the position of the vertex in the facet tuple.
/// Local DOF (k, p, i) = 9 k + 3 p + i on local facet k.
class StressSpace
{
public:
    static constexpr int dofs_per_cell = 36;

    StressSpace(const SimplicialMesh& mesh, DofVariant variant, int order = 0);

    const SimplicialMesh& mesh() const { return *mesh_; }
    DofVariant variant() const { return variant_; }
    int order() const { return 0; }
    std::size_t size() const { return 9 * mesh_->num_facets(); }

    static Index dof(Index facet, int p, int i) { return 9 * facet + 3 * p + i; }
    std::array<Index, 36> cell_dofs(Index cell) const;
    /// Vertex carrying nodal DOF d.
    Index dof_vertex(Index d) const { return mesh_->facet(d / 9)[(d % 9) / 3]; }

    /// Row vectors and their divergences at a barycentric point of the cell.
    void shape(Index cell, const std::array<double, 4>& bary, ShapeVectors& out) const;
    /// Per-DOF matrix values and divergence vectors (36 of each).
    void eval(Index cell, const std::array<double, 4>& bary, std::array<Mat3, 36>& values,
              std::array<Vec3, 36>& divs) const;
    /// Same, at a point of the reference tetrahedron pushed through mesh.affine_map(cell).
    void eval_ref(Index cell, const Vec3& ref_point, std::array<Mat3, 36>& values,
                  std::array<Vec3, 36>& divs) const;

    Mat3 evaluate(std::span<const double> coeffs, Index cell, const std::array<double, 4>& bary) const;
    Vec3 divergence(std::span<const double> coeffs, Index cell) const;

    /// Canonical interpolant: the DOF functionals applied to a continuous field.
    Vector interpolate(const MatField& field) const;
    /// Re-express coefficients in another variant (same function).
    Vector convert(std::span<const double> coeffs, DofVariant to) const;

private:
    const SimplicialMesh* mesh_;
    DofVariant variant_;
};

/// Cellwise constant vectors; DOF 3 t + i.
class DisplacementSpace
{
public:
    explicit DisplacementSpace(const SimplicialMesh& mesh) : mesh_(&mesh) {}

    const SimplicialMesh& mesh() const { return *mesh_; }
    std::size_t size() const { return 3 * mesh_->num_cells(); }
    static Index dof(Index cell, int i) { return 3 * cell + i; }

    Vec3 evaluate(std::span<const double> coeffs, Index cell) const
    {
        return Vec3(coeffs[3 * cell], coeffs[3 * cell + 1], coeffs[3 * cell + 2]);
    }

    /// L2 projection (cell averages) with a simplex rule of the given degree.
    Vector project(const VecField& u, int quad_degree = 6) const;

private:
    const SimplicialMesh* mesh_;
};

/// Skew multiplier q stored through its axial vector w = vec q, a full P1
/// tangentially continuous field (P1 Lambda^1). Global DOF (e, p) = 2 e + p.
class MultiplierSpace
{
public:
    static constexpr int dofs_per_cell = 12;

    MultiplierSpace(const SimplicialMesh& mesh, DofVariant variant, int order = 0);

    const SimplicialMesh& mesh() const { return *mesh_; }
    DofVariant variant() const { return variant_; }
    int order() const { return 0; }
    std::size_t size() const { return 2 * mesh_->num_edges(); }

    static Index dof(Index edge, int p) { return 2 * edge + p; }
    std::array<Index, 12> cell_dofs(Index cell) const;
    Index dof_vertex(Index d) const { return mesh_->edge(d / 2)[d % 2]; }

    /// Proxy values and curls of the 12 local shape functions (local DOF 2 k + p on local edge k).
    void shape(Index cell, const std::array<double, 4>& bary, ShapeVectors& out) const;
    void eval(Index cell, const std::array<double, 4>& bary, std::array<Vec3, 12>& values,
              std::array<Vec3, 12>& curls) const;
    void eval_ref(Index cell, const Vec3& ref_point, std::array<Vec3, 12>& values,
                  std::array<Vec3, 12>& curls) const;

    Vec3 evaluate(std::span<const double> coeffs, Index cell, const std::array<double, 4>& bary) const;
    Mat3 evaluate_skew(std::span<const double> coeffs, Index cell, const std::array<double, 4>& bary) const
    {
        return skew_of(evaluate(coeffs, cell, bary));
    }

    Vector interpolate(const VecField& proxy) const;
    Vector convert(std::span<const double> coeffs, DofVariant to) const;

private:
    const SimplicialMesh* mesh_;
    DofVariant variant_;
};

/// Block layout of the monolithic unknown [sigma; u; p].
struct DofMap
{
    std::size_t n_sigma = 0;
    std::size_t n_u = 0;
    std::size_t n_p = 0;

    std::size_t offset_u() const { return n_sigma; }
    std::size_t offset_p() const { return n_sigma + n_u; }
    std::size_t total() const { return n_sigma + n_u + n_p; }
};

struct Spaces
{
    StressSpace stress;
    DisplacementSpace displacement;
    MultiplierSpace multiplier;
    DofMap dofmap;

    const SimplicialMesh& mesh() const { return stress.mesh(); }
    DofVariant variant() const { return stress.variant(); }
};

Spaces build_spaces(const SimplicialMesh& mesh, DofVariant variant, int order = 0);

/// Barycentric point of the cell for a point of the reference tetrahedron.
std::array<double, 4> reference_to_barycentric(const SimplicialMesh& mesh, Index cell, const Vec3& ref_point);

} // namespace elastica
