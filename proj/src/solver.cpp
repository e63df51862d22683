#include "elastica/solver.hpp"

#include "parallel.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#ifdef ELASTICA_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif
#include <unsupported/Eigen/IterativeSolvers>

#include <algorithm>
#include <chrono>
#include <sstream>

namespace elastica {

struct SpdFactor
{
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
};

namespace {

using ColMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double scale_norm(const SparseMatrix& m, const Vector& x)
{
    return (m.cwiseAbs() * x.cwiseAbs()).norm();
}

} // namespace

Eigen::SparseMatrix<double> saddle_matrix(const SaddleSystem& system)
{
    const auto ns = static_cast<int>(system.n_sigma());
    const auto nu = static_cast<int>(system.n_u());
    const auto np = static_cast<int>(system.n_p());
    std::vector<Triplet> t;
    t.reserve(system.A.nonZeros() + 2 * (system.B.nonZeros() + system.C.nonZeros()));
    auto add = [&](const SparseMatrix& m, int r0, int c0, bool transpose_too) {
        for (int r = 0; r < m.outerSize(); ++r)
            for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
                t.emplace_back(r0 + r, c0 + static_cast<int>(it.col()), it.value());
                if (transpose_too)
                    t.emplace_back(c0 + static_cast<int>(it.col()), r0 + r, it.value());
            }
    };
    add(system.A, 0, 0, false);
    add(system.B, ns, 0, true);
    add(system.C, ns + nu, 0, true);
    ColMatrix k(ns + nu + np, ns + nu + np);
    k.setFromTriplets(t.begin(), t.end());
    k.makeCompressed();
    return k;
}

Vector saddle_rhs(const SaddleSystem& system)
{
    Vector b = Vector::Zero(static_cast<Eigen::Index>(system.n_sigma() + system.n_u() + system.n_p()));
    b.head(system.rhs_bc.size()) = system.rhs_bc;
    b.segment(system.rhs_bc.size(), system.rhs_g.size()) = system.rhs_g;
    return b;
}

namespace {

/// Adapter exposing apply_reduced_inverse through Eigen's preconditioner interface.
class CornerInverse
{
public:
    CornerInverse() = default;
    void set(const ReducedSystem* reduced) { reduced_ = reduced; }

    template <class M>
    CornerInverse& analyzePattern(const M&) { return *this; }
    template <class M>
    CornerInverse& factorize(const M&) { return *this; }
    template <class M>
    CornerInverse& compute(const M&) { return *this; }

    template <class Rhs>
    Vector solve(const Rhs& b) const { return apply_reduced_inverse(*reduced_, Vector(b)); }
    Eigen::ComputationInfo info() const { return Eigen::Success; }

private:
    const ReducedSystem* reduced_ = nullptr;
};

Vector solve_direct(const ColMatrix& k, const Vector& b, const SolverOptions& options, SolveDiagnostics& diag)
{
    const auto t0 = Clock::now();
#ifdef ELASTICA_HAVE_UMFPACK
    Eigen::UmfPackLU<ColMatrix> lu;
    diag.method = "umfpack-lu";
#else
    Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>> lu;
    diag.method = "sparse-lu";
#endif
    lu.compute(k);
    diag.factor_seconds = seconds_since(t0);
    if (lu.info() != Eigen::Success) {
        std::ostringstream os;
        os << "saddle factorization failed (" << diag.method << ", dimension " << diag.dimension << ")";
#ifndef ELASTICA_HAVE_UMFPACK
        os << ": " << lu.lastErrorMessage();
#endif
        throw SolverError(os.str());
    }
    const auto t1 = Clock::now();
    Vector x = lu.solve(b);
    Vector r = b - k * x;
    // Iterative refinement recovers the digits lost to pivoting on the zero blocks.
    for (int step = 0; step < options.max_refinement_steps && r.norm() > 1e-3 * options.rtol * diag.rhs_norm;
         ++step) {
        x += lu.solve(r);
        r = b - k * x;
        diag.iterations = step + 1;
    }
    diag.solve_seconds = seconds_since(t1);
    return x;
}

/// Sparse LDLᵀ of the KKT matrix, stress unknowns first, multipliers in AMD order of the
/// pattern of M |A| Mᵀ. No pivoting is needed: the stress pivots are positive and the
/// remaining Schur complement is negative definite.
Vector solve_ldlt(const SaddleSystem& system, const ColMatrix& k, const Vector& b, const SolverOptions& options,
                  SolveDiagnostics& diag)
{
    const auto t0 = Clock::now();
    const auto ns = static_cast<Eigen::Index>(system.n_sigma());
    const auto nm = k.rows() - ns;

    ColMatrix m = k.bottomLeftCorner(nm, ns);
    ColMatrix a = k.topLeftCorner(ns, ns);
    for (auto* mat : {&m, &a})
        for (Eigen::Index j = 0; j < mat->outerSize(); ++j)
            for (ColMatrix::InnerIterator it(*mat, j); it; ++it)
                it.valueRef() = 1.0;
    const ColMatrix pattern = (m * a * ColMatrix(m.transpose())).pruned();
    Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> amd;
    Eigen::AMDOrdering<int>()(pattern, amd);

    Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> perm(k.rows());
    for (Eigen::Index i = 0; i < ns; ++i)
        perm.indices()(i) = static_cast<int>(i);
    for (Eigen::Index i = 0; i < nm; ++i)
        perm.indices()(ns + i) = static_cast<int>(ns) + amd.indices()(i);
    // Same convention as Eigen's orderings: factor P K Pᵀ with P = perm⁻¹.
    const Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> pt = perm.inverse();
    const ColMatrix kp = pt * k * pt.transpose();

    Eigen::SimplicialLDLT<ColMatrix, Eigen::Lower, Eigen::NaturalOrdering<int>> ldlt(kp);
    diag.method = "kkt-ldlt";
    diag.factor_seconds = seconds_since(t0);
    if (ldlt.info() != Eigen::Success)
        throw SolverError("LDL^T factorization of the saddle system failed (zero pivot)");
    const auto t1 = Clock::now();
    auto solve = [&](const Vector& rhs) -> Vector { return perm * ldlt.solve(perm.inverse() * rhs); };
    Vector x = solve(b);
    Vector r = b - k * x;
    for (int step = 0; step < options.max_refinement_steps && r.norm() > 1e-3 * options.rtol * diag.rhs_norm;
         ++step) {
        x += solve(r);
        r = b - k * x;
        diag.iterations = step + 1;
    }
    diag.solve_seconds = seconds_since(t1);
    return x;
}

Vector solve_gmres(const ColMatrix& k, const Vector& b, const ReducedSystem& pre, const SolverOptions& options,
                   SolveDiagnostics& diag)
{
    if (!pre.factor)
        throw std::invalid_argument("GMRES preconditioner needs a factorized reduced system");
    if (pre.n_sigma + static_cast<std::size_t>(pre.S.rows()) + pre.n_p != static_cast<std::size_t>(k.rows()))
        throw std::invalid_argument("preconditioner and saddle system have different dimensions");
    const auto t0 = Clock::now();
    Eigen::GMRES<ColMatrix, CornerInverse> gmres;
    gmres.preconditioner().set(&pre);
    gmres.set_restart(options.gmres_restart);
    gmres.setMaxIterations(options.gmres_max_iterations);
    // The stopping test sees the preconditioned residual; the true one is checked below.
    gmres.setTolerance(1e-2 * options.rtol);
    gmres.compute(k);
    diag.method = "gmres-corner";
    diag.factor_seconds = pre.build_seconds;

    Vector x = Vector::Zero(k.rows());
    Vector r = b;
    int total = 0;
    for (int pass = 0; pass <= options.max_refinement_steps && r.norm() > 1e-2 * options.rtol * diag.rhs_norm;
         ++pass) {
        x += gmres.solve(r);
        total += static_cast<int>(gmres.iterations());
        r = b - k * x;
    }
    diag.iterations = total;
    diag.solve_seconds = seconds_since(t0);
    return x;
}

} // namespace

Solution solve_full(const SaddleSystem& system, const SolverOptions& options, const ReducedSystem* preconditioner)
{
    const ColMatrix k = saddle_matrix(system);
    const Vector b = saddle_rhs(system);

    Solution sol;
    auto& diag = sol.diagnostics;
    diag.dimension = static_cast<std::size_t>(k.rows());
    diag.nonzeros = static_cast<std::size_t>(k.nonZeros());
    diag.rhs_norm = b.norm();

    SaddleMethod method = options.saddle_method;
    if (method == SaddleMethod::automatic) {
        if (system.mode == QuadratureMode::corner)
            method = SaddleMethod::ldlt;
        else if (preconditioner != nullptr && diag.dimension > options.direct_max_dim)
            method = SaddleMethod::gmres;
        else
            method = SaddleMethod::lu;
    }
    if (method == SaddleMethod::gmres && preconditioner == nullptr)
        throw std::invalid_argument("GMRES on the saddle system needs a corner preconditioner");

    Vector x;
    if (diag.rhs_norm == 0.0) {
        x = Vector::Zero(k.rows());
        diag.method = "trivial";
    } else if (method == SaddleMethod::gmres) {
        x = solve_gmres(k, b, *preconditioner, options, diag);
    } else if (method == SaddleMethod::ldlt) {
        x = solve_ldlt(system, k, b, options, diag);
    } else {
        x = solve_direct(k, b, options, diag);
    }
    diag.residual_norm = (b - k * x).norm();
    if (diag.rhs_norm > 0.0 && !(diag.residual_norm <= options.rtol * diag.rhs_norm)) {
        std::ostringstream os;
        os << "saddle solve (" << diag.method << ") residual " << diag.relative_residual() << " exceeds rtol "
           << options.rtol;
        throw SolverError(os.str());
    }
    const auto ns = static_cast<Eigen::Index>(system.n_sigma());
    const auto nu = static_cast<Eigen::Index>(system.n_u());
    const auto np = static_cast<Eigen::Index>(system.n_p());
    sol.sigma = x.head(ns);
    sol.u = x.segment(ns, nu);
    sol.p = x.tail(np);
    return sol;
}

namespace {

void factor_block(const SaddleSystem& system, const SparseMatrix& bt, const VertexBlock& vb, LocalBlock& lb)
{
    lb.vertex = vb.vertex;
    lb.sigma = vb.sigma;
    lb.q = vb.q;
    const auto ns = static_cast<Eigen::Index>(lb.sigma.size());
    const auto nq = static_cast<Eigen::Index>(lb.q.size());

    auto local_index = [](const std::vector<Index>& ids, Index g) -> Eigen::Index {
        auto it = std::lower_bound(ids.begin(), ids.end(), g);
        if (it == ids.end() || *it != g)
            return -1;
        return it - ids.begin();
    };

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(ns, ns);
    for (Eigen::Index r = 0; r < ns; ++r)
        for (SparseMatrix::InnerIterator it(system.A, static_cast<Eigen::Index>(lb.sigma[r])); it; ++it) {
            const Eigen::Index c = local_index(lb.sigma, static_cast<Index>(it.col()));
            if (c < 0)
                throw std::logic_error("stress matrix couples DOFs of different vertices");
            a(r, c) = it.value();
        }
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(nq, ns);
    for (Eigen::Index r = 0; r < nq; ++r)
        for (SparseMatrix::InnerIterator it(system.C, static_cast<Eigen::Index>(lb.q[r])); it; ++it) {
            const Eigen::Index col = local_index(lb.sigma, static_cast<Index>(it.col()));
            if (col < 0)
                throw std::logic_error("multiplier matrix couples DOFs of different vertices");
            c(r, col) = it.value();
        }

    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(ns + nq, ns + nq);
    k.topLeftCorner(ns, ns) = a;
    k.bottomLeftCorner(nq, ns) = c;
    k.topRightCorner(ns, nq) = c.transpose();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd lam = eig.eigenvalues();
    const double largest = lam.cwiseAbs().maxCoeff();
    const double smallest = lam.cwiseAbs().minCoeff();
    auto fail = [&](const std::string& why) {
        std::ostringstream os;
        os << "local saddle block at vertex " << lb.vertex << " is singular (" << why << "; size " << ns << "+"
           << nq << ", |lambda| in [" << smallest << ", " << largest << "])";
        throw SolverError(os.str(), lb.vertex, std::vector<double>(lam.data(), lam.data() + lam.size()));
    };
    if (!(smallest > 1e-12 * largest))
        fail("eigenvalue below 1e-12 of the largest");
    lb.condition = largest / smallest;

    const Eigen::LLT<Eigen::MatrixXd> a_llt(a);
    if (a_llt.info() != Eigen::Success)
        fail("stress block not positive definite");
    const Eigen::MatrixXd ainv_ct = a_llt.solve(c.transpose());        // A^{-1} Cᵀ
    const Eigen::MatrixXd schur = c * ainv_ct;                          // C A^{-1} Cᵀ
    const Eigen::LLT<Eigen::MatrixXd> s_llt(schur);
    if (s_llt.info() != Eigen::Success)
        fail("multiplier Schur complement not positive definite");
    lb.Y = s_llt.solve(ainv_ct.transpose());                            // S^{-1} C A^{-1}
    lb.W = s_llt.solve(Eigen::MatrixXd::Identity(nq, nq));
    lb.Z = a_llt.solve(Eigen::MatrixXd::Identity(ns, ns)) - ainv_ct * lb.Y;
    lb.Z = 0.5 * (lb.Z + lb.Z.transpose()).eval();

    // Columns of B for the block's stress DOFs (rows of Bᵀ).
    std::vector<Index> u;
    for (Index s : lb.sigma)
        for (SparseMatrix::InnerIterator it(bt, static_cast<Eigen::Index>(s)); it; ++it)
            u.push_back(static_cast<Index>(it.col()));
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    lb.u = std::move(u);
    lb.B = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(lb.u.size()), ns);
    for (Eigen::Index col = 0; col < ns; ++col)
        for (SparseMatrix::InnerIterator it(bt, static_cast<Eigen::Index>(lb.sigma[col])); it; ++it)
            lb.B(local_index(lb.u, static_cast<Index>(it.col())), col) = it.value();
}

Vector gather(const Vector& x, const std::vector<Index>& ids)
{
    Vector out(static_cast<Eigen::Index>(ids.size()));
    for (std::size_t i = 0; i < ids.size(); ++i)
        out(static_cast<Eigen::Index>(i)) = x(static_cast<Eigen::Index>(ids[i]));
    return out;
}

} // namespace

ReducedSystem build_reduced(const SaddleSystem& system, const SolverOptions& options)
{
    if (system.mode != QuadratureMode::corner)
        throw std::logic_error("the vertex-local reduction needs a corner-quadrature system");
    const auto t0 = Clock::now();
    const auto structure = vertex_block_structure(system);
    const SparseMatrix bt = system.B.transpose();

    ReducedSystem red;
    red.n_sigma = system.n_sigma();
    red.n_p = system.n_p();
    red.rhs_bc = system.rhs_bc;
    red.rhs_g = system.rhs_g;
    red.blocks.resize(structure.size());
    detail::parallel_for(0, structure.size(), options.threads,
                         [&](std::size_t v) { factor_block(system, bt, structure[v], red.blocks[v]); });

    // S = sum_v B_v Z_v B_vᵀ, accumulated in vertex order.
    std::vector<Triplet> t;
    red.rhs = -system.rhs_g;
    red.condition_min = std::numeric_limits<double>::infinity();
    for (const LocalBlock& lb : red.blocks) {
        if (lb.sigma.empty())
            continue;
        red.condition_min = std::min(red.condition_min, lb.condition);
        red.condition_max = std::max(red.condition_max, lb.condition);
        const Eigen::MatrixXd bz = lb.B * lb.Z;
        const Eigen::MatrixXd s = bz * lb.B.transpose();
        for (Eigen::Index i = 0; i < s.rows(); ++i)
            for (Eigen::Index j = 0; j < s.cols(); ++j)
                t.emplace_back(static_cast<int>(lb.u[i]), static_cast<int>(lb.u[j]), s(i, j));
        const Vector r = bz * gather(system.rhs_bc, lb.sigma);
        for (Eigen::Index i = 0; i < r.size(); ++i)
            red.rhs(static_cast<Eigen::Index>(lb.u[i])) += r(i);
    }
    red.S = SparseMatrix(static_cast<Eigen::Index>(system.n_u()), static_cast<Eigen::Index>(system.n_u()));
    red.S.setFromTriplets(t.begin(), t.end());
    red.S.makeCompressed();
    if (options.spd_method == SpdMethod::cholesky ||
        (options.spd_method == SpdMethod::automatic && system.n_u() <= options.cholesky_max_dim)) {
        auto f = std::make_shared<SpdFactor>();
        f->llt.compute(ColMatrix(red.S));
        if (f->llt.info() != Eigen::Success)
            throw SolverError("Cholesky factorization of the displacement Schur complement failed "
                              "(matrix not positive definite)");
        red.factor = std::move(f);
    }
    red.build_seconds = seconds_since(t0);
    return red;
}

std::pair<Vector, Vector> recover_fields(const ReducedSystem& reduced, const Vector& u, const Vector& rhs_bc,
                                         int threads)
{
    Vector sigma = Vector::Zero(static_cast<Eigen::Index>(reduced.n_sigma));
    Vector p = Vector::Zero(static_cast<Eigen::Index>(reduced.n_p));
    // Blocks own disjoint DOFs, so the writes do not race.
    detail::parallel_for(0, reduced.blocks.size(), threads, [&](std::size_t v) {
        const LocalBlock& lb = reduced.blocks[v];
        if (lb.sigma.empty())
            return;
        const Vector f = gather(rhs_bc, lb.sigma) - lb.B.transpose() * gather(u, lb.u);
        const Vector s = lb.Z * f;
        const Vector q = lb.Y * f;
        for (std::size_t i = 0; i < lb.sigma.size(); ++i)
            sigma(static_cast<Eigen::Index>(lb.sigma[i])) = s(static_cast<Eigen::Index>(i));
        for (std::size_t i = 0; i < lb.q.size(); ++i)
            p(static_cast<Eigen::Index>(lb.q[i])) = q(static_cast<Eigen::Index>(i));
    });
    return {std::move(sigma), std::move(p)};
}

Solution solve_reduced(const ReducedSystem& reduced, const SolverOptions& options)
{
    return solve_reduced(reduced, reduced.rhs_g, reduced.rhs_bc, options);
}

Solution solve_reduced(const ReducedSystem& reduced, const Vector& rhs_g, const Vector& rhs_bc,
                       const SolverOptions& options)
{
    Vector rhs = -rhs_g;
    for (const LocalBlock& lb : reduced.blocks) {
        if (lb.sigma.empty())
            continue;
        const Vector r = lb.B * (lb.Z * gather(rhs_bc, lb.sigma));
        for (Eigen::Index i = 0; i < r.size(); ++i)
            rhs(static_cast<Eigen::Index>(lb.u[i])) += r(i);
    }

    Solution sol;
    auto& diag = sol.diagnostics;
    diag.dimension = static_cast<std::size_t>(reduced.S.rows());
    diag.nonzeros = static_cast<std::size_t>(reduced.S.nonZeros());
    diag.rhs_norm = rhs.norm();
    diag.local_blocks = reduced.blocks.size();
    diag.local_condition_min = reduced.condition_min;
    diag.local_condition_max = reduced.condition_max;
    diag.factor_seconds = reduced.build_seconds;

    const auto t0 = Clock::now();
    const ColMatrix s = reduced.S;
    const bool use_cg = options.spd_method == SpdMethod::cg ||
                        (options.spd_method == SpdMethod::automatic && diag.dimension > options.cholesky_max_dim);
    if (diag.rhs_norm == 0.0) {
        sol.u = Vector::Zero(s.rows());
        diag.method = "trivial";
    } else if (!use_cg) {
        if (reduced.factor) {
            sol.u = reduced.factor->llt.solve(rhs);
        } else {
            const Eigen::SimplicialLLT<ColMatrix> llt(s);
            if (llt.info() != Eigen::Success)
                throw SolverError("Cholesky factorization of the displacement Schur complement failed "
                                  "(matrix not positive definite)");
            sol.u = llt.solve(rhs);
        }
        diag.method = "cholesky";
    } else {
        Eigen::ConjugateGradient<ColMatrix, Eigen::Lower | Eigen::Upper, Eigen::IncompleteCholesky<double>> cg;
        cg.setTolerance(options.rtol);
        cg.setMaxIterations(static_cast<Eigen::Index>(10 * diag.dimension));
        cg.compute(s);
        if (cg.info() != Eigen::Success)
            throw SolverError("incomplete Cholesky preconditioner failed on the Schur complement");
        sol.u = cg.solve(rhs);
        diag.iterations = static_cast<int>(cg.iterations());
        if (cg.info() != Eigen::Success)
            throw SolverError("conjugate gradients did not converge on the Schur complement");
        diag.method = "pcg-ichol";
    }
    diag.residual_norm = (rhs - s * sol.u).norm();
    diag.solve_seconds = seconds_since(t0);
    auto [sigma, p] = recover_fields(reduced, sol.u, rhs_bc, options.threads);
    sol.sigma = std::move(sigma);
    sol.p = std::move(p);
    return sol;
}

Vector apply_reduced_inverse(const ReducedSystem& reduced, const Vector& rhs)
{
    if (!reduced.factor)
        throw std::logic_error("apply_reduced_inverse needs the Cholesky factor of the reduced system");
    const auto ns = static_cast<Eigen::Index>(reduced.n_sigma);
    const auto nu = reduced.S.rows();
    const auto np = static_cast<Eigen::Index>(reduced.n_p);
    const Vector rs = rhs.head(ns);
    const Vector rp = rhs.tail(np);

    // Local solves give s = Z f + Yᵀ r_p and p = Y f - W r_p with f = r_s - Bᵀ u,
    // and B s = r_u fixes u through S u = B Z r_s + B Yᵀ r_p - r_u.
    Vector su = -rhs.segment(ns, nu);
    std::vector<Vector> lift(reduced.blocks.size());
    for (std::size_t v = 0; v < reduced.blocks.size(); ++v) {
        const LocalBlock& lb = reduced.blocks[v];
        if (lb.sigma.empty())
            continue;
        lift[v] = lb.Y.transpose() * gather(rp, lb.q);
        const Vector r = lb.B * (lb.Z * gather(rs, lb.sigma) + lift[v]);
        for (Eigen::Index i = 0; i < r.size(); ++i)
            su(static_cast<Eigen::Index>(lb.u[i])) += r(i);
    }
    const Vector u = reduced.factor->llt.solve(su);

    Vector x(ns + nu + np);
    x.segment(ns, nu) = u;
    for (std::size_t v = 0; v < reduced.blocks.size(); ++v) {
        const LocalBlock& lb = reduced.blocks[v];
        if (lb.sigma.empty())
            continue;
        const Vector f = gather(rs, lb.sigma) - lb.B.transpose() * gather(u, lb.u);
        const Vector rq = gather(rp, lb.q);
        const Vector s = lb.Z * f + lift[v];
        const Vector q = lb.Y * f - lb.W * rq;
        for (std::size_t i = 0; i < lb.sigma.size(); ++i)
            x(static_cast<Eigen::Index>(lb.sigma[i])) = s(static_cast<Eigen::Index>(i));
        for (std::size_t i = 0; i < lb.q.size(); ++i)
            x(ns + nu + static_cast<Eigen::Index>(lb.q[i])) = q(static_cast<Eigen::Index>(i));
    }
    return x;
}

ReducedSystem corner_preconditioner(const Spaces& spaces, const ProblemSpec& problem, const SolverOptions& options)
{
    AssemblyOptions ao;
    ao.threads = options.threads;
    SolverOptions so = options;
    so.spd_method = SpdMethod::cholesky;
    return build_reduced(assemble(spaces, problem, QuadratureMode::corner, ao), so);
}

SaddleResiduals saddle_residuals(const SaddleSystem& system, const Solution& solution)
{
    SaddleResiduals r;
    const ColMatrix k = saddle_matrix(system);
    const Vector b = saddle_rhs(system);
    Vector x(k.rows());
    x << solution.sigma, solution.u, solution.p;
    const double bn = b.norm();
    const double res = (k * x - b).norm();
    r.total = bn > 0 ? res / bn : res;

    const Vector bs = system.B * solution.sigma;
    const double gn = system.rhs_g.norm();
    const double momentum = (bs - system.rhs_g).norm();
    const double bscale = scale_norm(system.B, solution.sigma);
    r.momentum = gn > 0 ? momentum / gn : (bscale > 0 ? momentum / bscale : momentum);

    const double cscale = scale_norm(system.C, solution.sigma);
    const double sym = (system.C * solution.sigma).norm();
    r.symmetry = cscale > 0 ? sym / cscale : sym;
    return r;
}

} // namespace elastica
