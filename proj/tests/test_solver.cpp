#include "elastica/cases.hpp"
#include "elastica/solver.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <random>

using namespace elastica;

namespace {

struct Fixture
{
    SimplicialMesh mesh;
    Spaces spaces;
    ProblemSpec problem;

    Fixture(int n, const std::string& name)
        : mesh(generate_cube_mesh(n)), spaces(build_spaces(mesh, DofVariant::nodal)),
          problem(manufactured_case(name).problem())
    {
    }
};

double rel(const Vector& a, const Vector& b) { return (a - b).norm() / std::max(b.norm(), 1e-300); }

Vector random_vector(Eigen::Index n, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Vector v(n);
    for (auto& c : v)
        c = d(rng);
    return v;
}

} // namespace

TEST(Solver, ReducedMatchesMonolithic)
{
    const Fixture f(2, "trig_varcoef");
    const SaddleSystem sys = assemble(f.spaces, f.problem, QuadratureMode::corner);
    SolverOptions lu;
    lu.saddle_method = SaddleMethod::lu;
    const Solution full = solve_full(sys, lu);
    const ReducedSystem red = build_reduced(sys);
    const Solution r = solve_reduced(red);
    EXPECT_LT(rel(r.sigma, full.sigma), 1e-11);
    EXPECT_LT(rel(r.u, full.u), 1e-11);
    EXPECT_LT(rel(r.p, full.p), 1e-11);
    EXPECT_LT(saddle_residuals(sys, r).total, 1e-11);
    EXPECT_EQ(red.blocks.size(), f.mesh.num_vertices());
    EXPECT_GE(red.condition_min, 1.0);
    EXPECT_GE(red.condition_max, red.condition_min);
}

TEST(Solver, SchurComplementIsSpd)
{
    const Fixture f(2, "trig");
    const ReducedSystem red = build_reduced(assemble(f.spaces, f.problem, QuadratureMode::corner));
    const Eigen::MatrixXd s(red.S);
    EXPECT_LT((s - s.transpose()).cwiseAbs().maxCoeff(), 1e-12 * s.cwiseAbs().maxCoeff());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
    EXPECT_EQ(static_cast<std::size_t>(s.rows()), f.spaces.dofmap.n_u);
}

TEST(Solver, ReducedInverseOnGeneralRhs)
{
    const Fixture f(2, "trig");
    const SaddleSystem sys = assemble(f.spaces, f.problem, QuadratureMode::corner);
    const ReducedSystem red = build_reduced(sys);
    const Eigen::SparseMatrix<double> k = saddle_matrix(sys);
    const Vector b = random_vector(k.rows(), 11);
    const Vector x = apply_reduced_inverse(red, b);
    EXPECT_LT((k * x - b).norm() / b.norm(), 1e-11);
}

TEST(Solver, SameFactorizationNewData)
{
    const Fixture f(2, "trig");
    const SaddleSystem sys = assemble(f.spaces, f.problem, QuadratureMode::corner);
    const ReducedSystem red = build_reduced(sys);
    const Vector g = random_vector(sys.rhs_g.size(), 5);
    const Vector bc = random_vector(sys.rhs_bc.size(), 6);
    const Solution r = solve_reduced(red, g, bc);
    const Eigen::SparseMatrix<double> k = saddle_matrix(sys);
    Vector x(k.rows()), b = Vector::Zero(k.rows());
    x << r.sigma, r.u, r.p;
    b.head(bc.size()) = bc;
    b.segment(bc.size(), g.size()) = g;
    EXPECT_LT((k * x - b).norm() / b.norm(), 1e-11);
}

TEST(Solver, SaddleMethodsAgree)
{
    const Fixture f(2, "trig");
    const SaddleSystem ex = assemble(f.spaces, f.problem, QuadratureMode::exact);
    const SaddleSystem co = assemble(f.spaces, f.problem, QuadratureMode::corner);
    SolverOptions o;
    o.saddle_method = SaddleMethod::lu;
    const Solution ref = solve_full(ex, o);
    const Solution ref_c = solve_full(co, o);
    EXPECT_EQ(ref.diagnostics.method.empty(), false);

    o.saddle_method = SaddleMethod::gmres;
    const ReducedSystem pre = corner_preconditioner(f.spaces, f.problem);
    const Solution g = solve_full(ex, o, &pre);
    EXPECT_LT(rel(g.sigma, ref.sigma), 1e-9);
    EXPECT_LT(rel(g.u, ref.u), 1e-9);
    EXPECT_LT(rel(g.p, ref.p), 1e-9);
    EXPECT_GT(g.diagnostics.iterations, 0);

    o.saddle_method = SaddleMethod::ldlt;
    const Solution l = solve_full(co, o);
    EXPECT_LT(rel(l.sigma, ref_c.sigma), 1e-11);
    EXPECT_LT(rel(l.p, ref_c.p), 1e-11);
    EXPECT_LT(saddle_residuals(co, l).total, 1e-10);
}

TEST(Solver, CgMatchesCholesky)
{
    const Fixture f(3, "trig");
    const ReducedSystem red = build_reduced(assemble(f.spaces, f.problem, QuadratureMode::corner));
    SolverOptions cg;
    cg.spd_method = SpdMethod::cg;
    cg.rtol = 1e-12;
    const Solution a = solve_reduced(red);
    const Solution b = solve_reduced(red, cg);
    EXPECT_LT(rel(b.u, a.u), 1e-9);
    EXPECT_GT(b.diagnostics.iterations, 0);
}

TEST(Solver, ThreadsDoNotChangeReducedSystem)
{
    const Fixture f(3, "trig_varcoef");
    const SaddleSystem sys = assemble(f.spaces, f.problem, QuadratureMode::corner);
    SolverOptions one, three;
    three.threads = 3;
    const ReducedSystem a = build_reduced(sys, one);
    const ReducedSystem b = build_reduced(sys, three);
    EXPECT_EQ((Eigen::MatrixXd(a.S) - Eigen::MatrixXd(b.S)).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ((a.rhs - b.rhs).norm(), 0.0);
}

TEST(Solver, SingularLocalBlockNamesVertex)
{
    const Fixture f(1, "trig");
    SaddleSystem sys = assemble(f.spaces, f.problem, QuadratureMode::corner);
    const Index target = 3;
    for (int k = 0; k < sys.A.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(sys.A, k); it; ++it)
            if (sys.sigma_vertex[it.row()] == target)
                it.valueRef() = 0.0;
    try {
        build_reduced(sys);
        FAIL() << "expected a singular block";
    } catch (const SolverError& e) {
        EXPECT_EQ(e.vertex(), target);
        EXPECT_FALSE(e.spectrum().empty());
        EXPECT_NE(std::string(e.what()).find(std::to_string(target)), std::string::npos);
    }
}

TEST(Solver, ResidualMetrics)
{
    const Fixture f(2, "trig");
    const SaddleSystem sys = assemble(f.spaces, f.problem, QuadratureMode::corner);
    Solution s = solve_reduced(build_reduced(sys));
    const SaddleResiduals ok = saddle_residuals(sys, s);
    EXPECT_LT(ok.momentum, 1e-11);
    EXPECT_LT(ok.symmetry, 1e-11);
    s.p.setZero();
    EXPECT_GT(saddle_residuals(sys, s).total, 1e-6);
    const Vector rhs = saddle_rhs(sys);
    EXPECT_EQ(rhs.size(), static_cast<Eigen::Index>(f.spaces.dofmap.total()));
}
