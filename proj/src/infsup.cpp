#include "elastica/verification.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <sstream>
#include <stdexcept>

namespace elastica {

namespace {

using Dense = Eigen::MatrixXd;

Dense dense(const SparseMatrix& m)
{
    return Dense(m);
}

Dense block_diag(const Dense& a, const Dense& b)
{
    Dense out = Dense::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

/// Orthonormal basis of the null space of m (rows are constraints).
Dense null_space(const Dense& m)
{
    const Eigen::ColPivHouseholderQR<Dense> qr(m.transpose());
    const Eigen::Index n = m.cols();
    const Dense q = qr.householderQ() * Dense::Identity(n, n);
    return q.rightCols(n - qr.rank());
}

/// Smallest singular value of the operator m between the metrics x (domain) and y (range):
/// min over v of sup over t of vᵀ m t / (|t|_x |v|_y).
double smallest_singular(const Dense& m, const Dense& x, const Dense& y)
{
    const Eigen::LLT<Dense> lx(x);
    const Eigen::LLT<Dense> ly(y);
    if (lx.info() != Eigen::Success || ly.info() != Eigen::Success)
        throw std::runtime_error("inf-sup metric is not positive definite");
    // H = Ly^{-1} M Lx^{-T}
    const Dense t = lx.matrixL().solve(m.transpose());
    const Dense h = ly.matrixL().solve(t.transpose());
    if (h.rows() > h.cols())
        return 0.0;
    const Eigen::BDCSVD<Dense> svd(h);
    return svd.singularValues().minCoeff();
}

} // namespace

InfSupReport estimate_infsup(const Spaces& spaces, const ComplianceField& compliance, QuadratureMode mode,
                             int threads)
{
    const DofMap& dm = spaces.dofmap;
    if (dm.total() > infsup_dimension_cap) {
        std::ostringstream os;
        os << "inf-sup estimate needs dense linear algebra; " << dm.total() << " unknowns exceed the cap of "
           << infsup_dimension_cap;
        throw std::invalid_argument(os.str());
    }
    ProblemSpec problem;
    problem.compliance = compliance;
    AssemblyOptions ao;
    ao.threads = threads;
    const SaddleSystem system = assemble(spaces, problem, mode, ao);

    InfSupReport r;
    r.mode = mode;
    r.dimension = dm.total();
    if (mode == QuadratureMode::corner) {
        SolverOptions so;
        so.threads = threads;
        const ReducedSystem red = build_reduced(system, so);
        r.local_blocks = red.blocks.size();
        r.local_condition_min = red.condition_min;
        r.local_condition_max = red.condition_max;
    }

    const Dense x = dense(stress_mass(spaces)) + dense(stress_divdiv(spaces));
    const Dense b = dense(system.B);
    const Dense c = dense(system.C);
    const Dense mu = dense(displacement_mass(spaces));
    const Dense mq = dense(multiplier_mass(spaces));

    Dense bc(b.rows() + c.rows(), b.cols());
    bc << b, c;
    r.beta_full = smallest_singular(bc, x, block_diag(mu, mq));

    const Dense kb = null_space(b);
    r.beta_c_kerb = smallest_singular(c * kb, kb.transpose() * x * kb, mq);

    const Dense k = null_space(bc);
    const Dense a = dense(system.A);
    const Eigen::GeneralizedSelfAdjointEigenSolver<Dense> ges(k.transpose() * a * k, k.transpose() * x * k,
                                                              Eigen::EigenvaluesOnly);
    if (ges.info() != Eigen::Success)
        throw std::runtime_error("kernel coercivity eigensolve failed");
    r.alpha = ges.eigenvalues().minCoeff();
    return r;
}

} // namespace elastica
