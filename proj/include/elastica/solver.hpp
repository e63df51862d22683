#pragma once

#include "elastica/assembly.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace elastica {

class SolverError : public std::runtime_error
{
public:
    explicit SolverError(const std::string& what, Index vertex = no_index, std::vector<double> spectrum = {})
        : std::runtime_error(what), vertex_(vertex), spectrum_(std::move(spectrum))
    {
    }

    /// Vertex of the failing local block, or no_index for global failures.
    Index vertex() const { return vertex_; }
    /// Eigenvalues of the failing local saddle block (ascending).
    const std::vector<double>& spectrum() const { return spectrum_; }

private:
    Index vertex_;
    std::vector<double> spectrum_;
};

enum class SpdMethod { automatic, cholesky, cg };
/// automatic: ldlt for corner systems, otherwise lu (or gmres above direct_max_dim when a
/// preconditioner is supplied). ldlt factors the whole KKT matrix with the stress unknowns
/// eliminated first, which needs a vertex-local stress block to stay sparse.
enum class SaddleMethod { automatic, lu, ldlt, gmres };

struct SolverOptions
{
    double rtol = 1e-10;
    int threads = 1;
    SpdMethod spd_method = SpdMethod::automatic;
    /// Above this dimension the automatic choice switches from Cholesky to PCG.
    std::size_t cholesky_max_dim = 60000;
    int max_refinement_steps = 3;
    SaddleMethod saddle_method = SaddleMethod::automatic;
    /// Above this dimension the automatic choice uses GMRES when a preconditioner is supplied.
    std::size_t direct_max_dim = 20000;
    int gmres_restart = 60;
    int gmres_max_iterations = 2000;
};

struct SolveDiagnostics
{
    std::string method;
    std::size_t dimension = 0;
    std::size_t nonzeros = 0;
    double rhs_norm = 0.0;
    double residual_norm = 0.0;
    int iterations = 0;  // CG iterations or refinement steps
    // Reduced path only.
    std::size_t local_blocks = 0;
    double local_condition_min = 0.0;
    double local_condition_max = 0.0;
    double factor_seconds = 0.0;
    double solve_seconds = 0.0;

    double relative_residual() const { return rhs_norm > 0 ? residual_norm / rhs_norm : residual_norm; }
};

struct Solution
{
    Vector sigma;
    Vector u;
    Vector p;
    SolveDiagnostics diagnostics;
};

struct ReducedSystem;

/// Monolithic symmetric indefinite solve: sparse LU, or GMRES preconditioned by the
/// exact inverse of a corner-quadrature system on the same spaces (see corner_preconditioner).
Solution solve_full(const SaddleSystem& system, const SolverOptions& options = {},
                    const ReducedSystem* preconditioner = nullptr);

/// Factorized vertex-local saddle block [[A_v, C_vᵀ], [C_v, 0]] and the pieces
/// needed for back substitution: s_v = Z_v f_v, p_v = Y_v f_v with f = rhs_bc - Bᵀ u.
struct LocalBlock
{
    Index vertex = 0;
    std::vector<Index> sigma;
    std::vector<Index> q;
    std::vector<Index> u;      // displacement DOFs coupled through B
    Eigen::MatrixXd Z;         // sigma x sigma
    Eigen::MatrixXd Y;         // q x sigma
    Eigen::MatrixXd W;         // (C A^{-1} Cᵀ)^{-1}, q x q
    Eigen::MatrixXd B;         // u x sigma
    double condition = 0.0;
};

struct SpdFactor;

/// Displacement Schur complement S = B Z Bᵀ (SPD) with S u = B Z rhs_bc - rhs_g.
struct ReducedSystem
{
    SparseMatrix S;
    Vector rhs;
    std::vector<LocalBlock> blocks;
    Vector rhs_bc;
    Vector rhs_g;
    std::size_t n_sigma = 0;
    std::size_t n_p = 0;
    double condition_min = 0.0;
    double condition_max = 0.0;
    double build_seconds = 0.0;
    /// Cholesky factor of S, present when the dimension allows a direct factorization.
    std::shared_ptr<const SpdFactor> factor;
};

/// Throws SolverError naming the vertex when a local block is singular.
ReducedSystem build_reduced(const SaddleSystem& system, const SolverOptions& options = {});

Solution solve_reduced(const ReducedSystem& reduced, const SolverOptions& options = {});
/// Same factorization, different data.
Solution solve_reduced(const ReducedSystem& reduced, const Vector& rhs_g, const Vector& rhs_bc,
                       const SolverOptions& options = {});

/// Local back substitution for stress and multiplier given u.
std::pair<Vector, Vector> recover_fields(const ReducedSystem& reduced, const Vector& u,
                                         const Vector& rhs_bc, int threads = 1);
inline std::pair<Vector, Vector> recover_fields(const ReducedSystem& reduced, const Vector& u)
{
    return recover_fields(reduced, u, reduced.rhs_bc);
}

/// Solves the corner saddle system with a general right-hand side [r_sigma; r_u; r_p].
Vector apply_reduced_inverse(const ReducedSystem& reduced, const Vector& rhs);

/// Corner-mode reduction for spaces already carrying an exact-mode system.
ReducedSystem corner_preconditioner(const Spaces& spaces, const ProblemSpec& problem,
                                    const SolverOptions& options = {});

struct SaddleResiduals
{
    double total = 0.0;     // |K x - b| / |b| (absolute when b = 0)
    double momentum = 0.0;  // |B s - rhs_g| / |rhs_g|
    double symmetry = 0.0;  // |C s| / (|C| |s|)
};

SaddleResiduals saddle_residuals(const SaddleSystem& system, const Solution& solution);

/// Monolithic matrix in [sigma; u; p] ordering.
Eigen::SparseMatrix<double> saddle_matrix(const SaddleSystem& system);
Vector saddle_rhs(const SaddleSystem& system);

} // namespace elastica
