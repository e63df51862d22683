#include "elastica/assembly.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <stdexcept>

namespace elastica {

const char* to_string(QuadratureMode m) { return m == QuadratureMode::exact ? "exact" : "corner"; }

namespace {

using Triplet = Eigen::Triplet<double>;
using Local36 = Eigen::Matrix<double, 36, 36>;
using Local12x36 = Eigen::Matrix<double, 12, 36>;
using Local3x36 = Eigen::Matrix<double, 3, 36>;

struct CellContribution
{
    Local36 a;
    Local12x36 c;
    Local3x36 b;
    Vec3 g;
};

// The corner rule as a barycentric rule: the four vertices, weight 1/4 each.
QuadratureRule corner_rule()
{
    return {{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}, {0.25, 0.25, 0.25, 0.25}, 1};
}

// Stress shape (j, i) is e_i phi_jᵀ, so with alpha = 1/(2 mu), beta = alpha lambda/(3 lambda + 2 mu):
//   A(j,i):(l,m) = alpha delta_im phi_j.phi_l - beta (phi_j)_i (phi_l)_m
//   (j,i):skew_of(psi_r) = (psi_r x phi_j)_i
void element(const Spaces& spaces, const ProblemSpec& problem, Index cell, const QuadratureRule& form_rule,
             const QuadratureRule& load_rule, CellContribution& out)
{
    const SimplicialMesh& mesh = spaces.mesh();
    const double vol = mesh.cell_volume(cell);
    out.a.setZero();
    out.c.setZero();
    out.b.setZero();
    out.g.setZero();

    ShapeVectors s, q;
    for (std::size_t k = 0; k < form_rule.size(); ++k) {
        const auto& bary = form_rule.points[k];
        const Vec3 x = mesh.point(cell, bary);
        const double w = form_rule.weights[k] * vol;
        spaces.stress.shape(cell, bary, s);
        spaces.multiplier.shape(cell, bary, q);
        const IsotropicCompliance comp = problem.compliance(x, cell);
        const double alpha = 1.0 / (2.0 * comp.mu);
        const double beta = alpha * comp.lambda / (3.0 * comp.lambda + 2.0 * comp.mu);
        for (int j = 0; j < 12; ++j) {
            const Vec3& pj = s.value[j];
            for (int l = 0; l < 12; ++l) {
                const Vec3& pl = s.value[l];
                const double dot = w * alpha * pj.dot(pl);
                for (int i = 0; i < 3; ++i)
                    for (int m = 0; m < 3; ++m)
                        out.a(3 * j + i, 3 * l + m) += (i == m ? dot : 0.0) - w * beta * pj(i) * pl(m);
            }
            for (int r = 0; r < 12; ++r) {
                const Vec3 cr = q.value[r].cross(pj);
                for (int i = 0; i < 3; ++i)
                    out.c(r, 3 * j + i) += w * cr(i);
            }
        }
    }

    spaces.stress.shape(cell, {0.25, 0.25, 0.25, 0.25}, s);
    for (int j = 0; j < 12; ++j)
        for (int i = 0; i < 3; ++i)
            out.b(i, 3 * j + i) = vol * s.div[j];

    if (problem.body_load) {
        for (std::size_t k = 0; k < load_rule.size(); ++k)
            out.g += load_rule.weights[k] * vol * problem.body_load(mesh.point(cell, load_rule.points[k]));
    }
}

template <class Mat>
void scatter(const Mat& local, std::span<const Index> rows, std::span<const Index> cols, std::vector<Triplet>& t)
{
    for (Eigen::Index r = 0; r < local.rows(); ++r)
        for (Eigen::Index c = 0; c < local.cols(); ++c)
            if (local(r, c) != 0.0)
                t.emplace_back(static_cast<int>(rows[r]), static_cast<int>(cols[c]), local(r, c));
}

SparseMatrix from_triplets(std::size_t rows, std::size_t cols, const std::vector<Triplet>& t)
{
    SparseMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return m;
}

Vector boundary_rhs(const Spaces& spaces, const VecField& u_d, int degree)
{
    const SimplicialMesh& mesh = spaces.mesh();
    Vector rhs = Vector::Zero(static_cast<Eigen::Index>(spaces.stress.size()));
    if (!u_d)
        return rhs;
    const auto rule = triangle_rule(degree);
    ShapeVectors s;
    for (Index f = 0; f < mesh.num_facets(); ++f) {
        if (!mesh.boundary_facet(f))
            continue;
        const Index cell = mesh.facet_cells(f)[0];
        const auto& cf = mesh.cell_facets(cell);
        const int k = static_cast<int>(std::find(cf.begin(), cf.end(), f) - cf.begin());
        const auto& lf = local_facet_vertices[k];
        const Vec3& n = mesh.facet_normal(f);
        const auto dofs = spaces.stress.cell_dofs(cell);
        for (std::size_t qp = 0; qp < rule.size(); ++qp) {
            std::array<double, 4> bary{0, 0, 0, 0};
            for (int a = 0; a < 3; ++a)
                bary[lf[a]] = rule.points[qp][a];
            const Vec3 x = mesh.point(cell, bary);
            const Vec3 ud = u_d(x);
            const double w = rule.weights[qp] * mesh.facet_area(f);
            spaces.stress.shape(cell, bary, s);
            // (e_i phi_jᵀ n) . u_D = (phi_j . n) u_D,i; only the facet's own DOFs have a trace there.
            for (int p = 0; p < 3; ++p) {
                const int j = 3 * k + p;
                const double flux = s.value[j].dot(n);
                for (int i = 0; i < 3; ++i)
                    rhs(static_cast<Eigen::Index>(dofs[3 * j + i])) += w * flux * ud(i);
            }
        }
    }
    return rhs;
}

} // namespace

SaddleSystem assemble(const Spaces& spaces, const ProblemSpec& problem, QuadratureMode mode,
                      const AssemblyOptions& options)
{
    if (mode == QuadratureMode::corner && spaces.variant() != DofVariant::nodal)
        throw std::invalid_argument("corner quadrature requires the nodal DOF variant");
    const SimplicialMesh& mesh = spaces.mesh();
    const std::size_t nc = mesh.num_cells();

    const int form_degree =
        options.form_degree > 0 ? options.form_degree : (problem.variable_compliance ? 4 : 2);
    const QuadratureRule form_rule = mode == QuadratureMode::corner ? corner_rule() : simplex_rule(form_degree);
    const QuadratureRule load_rule = simplex_rule(options.load_degree);

    std::vector<Triplet> ta, tb, tc;
    ta.reserve(nc * (mode == QuadratureMode::corner ? 4 * 81 : 36 * 36));
    tb.reserve(nc * 36);
    tc.reserve(nc * (mode == QuadratureMode::corner ? 4 * 27 : 12 * 36));
    Vector rhs_g = Vector::Zero(static_cast<Eigen::Index>(spaces.displacement.size()));

    // Element work is parallel; accumulation runs in cell order so the result
    // does not depend on the thread count.
    constexpr std::size_t chunk = 512;
    std::vector<CellContribution> buffer(std::min(chunk, nc));
    for (std::size_t first = 0; first < nc; first += chunk) {
        const std::size_t last = std::min(nc, first + chunk);
        detail::parallel_for(first, last, options.threads, [&](std::size_t c) {
            element(spaces, problem, c, form_rule, load_rule, buffer[c - first]);
        });
        for (std::size_t c = first; c < last; ++c) {
            const auto sd = spaces.stress.cell_dofs(c);
            const auto qd = spaces.multiplier.cell_dofs(c);
            const std::array<Index, 3> ud{3 * c, 3 * c + 1, 3 * c + 2};
            const CellContribution& e = buffer[c - first];
            scatter(e.a, sd, sd, ta);
            scatter(e.b, ud, sd, tb);
            scatter(e.c, qd, sd, tc);
            rhs_g.segment<3>(static_cast<Eigen::Index>(3 * c)) += e.g;
        }
    }

    SaddleSystem sys;
    sys.mode = mode;
    sys.variant = spaces.variant();
    sys.num_vertices = mesh.num_vertices();
    sys.A = from_triplets(spaces.stress.size(), spaces.stress.size(), ta);
    sys.B = from_triplets(spaces.displacement.size(), spaces.stress.size(), tb);
    sys.C = from_triplets(spaces.multiplier.size(), spaces.stress.size(), tc);
    sys.rhs_g = std::move(rhs_g);
    sys.rhs_bc = boundary_rhs(spaces, problem.boundary_displacement, options.boundary_degree);

    if (mode == QuadratureMode::corner) {
        sys.sigma_vertex.resize(spaces.stress.size());
        for (Index d = 0; d < spaces.stress.size(); ++d)
            sys.sigma_vertex[d] = spaces.stress.dof_vertex(d);
        sys.q_vertex.resize(spaces.multiplier.size());
        for (Index d = 0; d < spaces.multiplier.size(); ++d)
            sys.q_vertex[d] = spaces.multiplier.dof_vertex(d);
    }
    return sys;
}

std::vector<VertexBlock> vertex_block_structure(const SaddleSystem& system)
{
    if (system.mode != QuadratureMode::corner)
        throw std::logic_error("vertex blocks exist only for corner-quadrature systems");
    std::vector<VertexBlock> blocks(system.num_vertices);
    for (Index v = 0; v < blocks.size(); ++v)
        blocks[v].vertex = v;
    for (Index d = 0; d < system.sigma_vertex.size(); ++d)
        blocks[system.sigma_vertex[d]].sigma.push_back(d);
    for (Index d = 0; d < system.q_vertex.size(); ++d)
        blocks[system.q_vertex[d]].q.push_back(d);
    return blocks;
}

namespace {

template <class LocalFn>
SparseMatrix assemble_gram(const Spaces& spaces, std::size_t n, LocalFn&& local)
{
    const SimplicialMesh& mesh = spaces.mesh();
    std::vector<Triplet> t;
    for (Index c = 0; c < mesh.num_cells(); ++c)
        local(c, t);
    return from_triplets(n, n, t);
}

} // namespace

SparseMatrix stress_mass(const Spaces& spaces)
{
    const auto rule = simplex_rule(2);
    return assemble_gram(spaces, spaces.stress.size(), [&](Index c, std::vector<Triplet>& t) {
        Eigen::Matrix<double, 12, 12> m = Eigen::Matrix<double, 12, 12>::Zero();
        ShapeVectors s;
        for (std::size_t k = 0; k < rule.size(); ++k) {
            spaces.stress.shape(c, rule.points[k], s);
            const double w = rule.weights[k] * spaces.mesh().cell_volume(c);
            for (int j = 0; j < 12; ++j)
                for (int l = 0; l < 12; ++l)
                    m(j, l) += w * s.value[j].dot(s.value[l]);
        }
        const auto d = spaces.stress.cell_dofs(c);
        for (int j = 0; j < 12; ++j)
            for (int l = 0; l < 12; ++l)
                for (int i = 0; i < 3; ++i)
                    t.emplace_back(static_cast<int>(d[3 * j + i]), static_cast<int>(d[3 * l + i]), m(j, l));
    });
}

SparseMatrix stress_divdiv(const Spaces& spaces)
{
    return assemble_gram(spaces, spaces.stress.size(), [&](Index c, std::vector<Triplet>& t) {
        ShapeVectors s;
        spaces.stress.shape(c, {0.25, 0.25, 0.25, 0.25}, s);
        const double vol = spaces.mesh().cell_volume(c);
        const auto d = spaces.stress.cell_dofs(c);
        for (int j = 0; j < 12; ++j)
            for (int l = 0; l < 12; ++l)
                for (int i = 0; i < 3; ++i)
                    t.emplace_back(static_cast<int>(d[3 * j + i]), static_cast<int>(d[3 * l + i]),
                                   vol * s.div[j] * s.div[l]);
    });
}

SparseMatrix displacement_mass(const Spaces& spaces)
{
    return assemble_gram(spaces, spaces.displacement.size(), [&](Index c, std::vector<Triplet>& t) {
        for (int i = 0; i < 3; ++i)
            t.emplace_back(static_cast<int>(3 * c + i), static_cast<int>(3 * c + i), spaces.mesh().cell_volume(c));
    });
}

SparseMatrix multiplier_mass(const Spaces& spaces)
{
    const auto rule = simplex_rule(2);
    return assemble_gram(spaces, spaces.multiplier.size(), [&](Index c, std::vector<Triplet>& t) {
        Eigen::Matrix<double, 12, 12> m = Eigen::Matrix<double, 12, 12>::Zero();
        ShapeVectors s;
        for (std::size_t k = 0; k < rule.size(); ++k) {
            spaces.multiplier.shape(c, rule.points[k], s);
            const double w = 2.0 * rule.weights[k] * spaces.mesh().cell_volume(c);
            for (int j = 0; j < 12; ++j)
                for (int l = 0; l < 12; ++l)
                    m(j, l) += w * s.value[j].dot(s.value[l]);
        }
        const auto d = spaces.multiplier.cell_dofs(c);
        for (int j = 0; j < 12; ++j)
            for (int l = 0; l < 12; ++l)
                t.emplace_back(static_cast<int>(d[j]), static_cast<int>(d[l]), m(j, l));
    });
}

} // namespace elastica
