#pragma once

#include "elastica/fespace.hpp"
#include "elastica/quadrature.hpp"

#include <Eigen/Sparse>

#include <vector>

namespace elastica {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

enum class QuadratureMode { exact, corner };

const char* to_string(QuadratureMode m);

struct ProblemSpec
{
    ComplianceField compliance = constant_compliance({});
    bool variable_compliance = false;
    VecField body_load;              // empty means g = 0
    VecField boundary_displacement;  // empty means u_D = 0
};

struct AssemblyOptions
{
    /// Exact-mode rule for a and c; 0 selects 2 (constant compliance) or 4 (variable).
    int form_degree = 0;
    /// Rule for the load vector, shared by both modes.
    int load_degree = 6;
    int boundary_degree = 4;
    int threads = 1;
};

/// Blocks of
///   [ A  Bᵀ Cᵀ ] [s]   [rhs_bc]
///   [ B  0  0  ] [u] = [rhs_g ]
///   [ C  0  0  ] [p]   [  0   ]
/// with a(s, t) = (A s, t), b(t, v) = (div t, v), c(t, q) = (t, q) for skew q.
struct SaddleSystem
{
    SparseMatrix A;  // n_sigma x n_sigma
    SparseMatrix B;  // n_u x n_sigma
    SparseMatrix C;  // n_p x n_sigma
    Vector rhs_g;
    Vector rhs_bc;
    QuadratureMode mode = QuadratureMode::exact;
    DofVariant variant = DofVariant::moment;
    std::size_t num_vertices = 0;
    /// Corner mode only: owning vertex of each stress / multiplier DOF.
    std::vector<Index> sigma_vertex;
    std::vector<Index> q_vertex;

    std::size_t n_sigma() const { return static_cast<std::size_t>(A.rows()); }
    std::size_t n_u() const { return static_cast<std::size_t>(B.rows()); }
    std::size_t n_p() const { return static_cast<std::size_t>(C.rows()); }
};

/// Throws std::invalid_argument for corner mode on moment-variant spaces.
SaddleSystem assemble(const Spaces& spaces, const ProblemSpec& problem, QuadratureMode mode,
                      const AssemblyOptions& options = {});

struct VertexBlock
{
    Index vertex = 0;
    std::vector<Index> sigma;  // ascending
    std::vector<Index> q;      // ascending
};

/// One block per mesh vertex; throws std::logic_error on exact-mode systems.
std::vector<VertexBlock> vertex_block_structure(const SaddleSystem& system);

/// Gram matrices used by norms and the inf-sup estimates (exact integration).
SparseMatrix stress_mass(const Spaces& spaces);
SparseMatrix stress_divdiv(const Spaces& spaces);
SparseMatrix displacement_mass(const Spaces& spaces);
/// int q : q = 2 int w . w for q = skew_of(w).
SparseMatrix multiplier_mass(const Spaces& spaces);

} // namespace elastica
