#include "elastica/verification.hpp"

#include <Eigen/SparseCholesky>

#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace elastica {

double ErrorReport::conservation() const
{
    const double scale = g_norm > 0 ? g_norm : sigma_h_norm;
    return scale > 0 ? e_div / scale : e_div;
}

const char* to_string(SolvePath p)
{
    return p == SolvePath::full ? "full" : "reduced";
}

ErrorReport compute_errors(const Spaces& spaces, const Solution& solution, const ManufacturedCase& mc,
                           int quad_degree)
{
    const SimplicialMesh& mesh = spaces.mesh();
    const QuadratureRule rule = simplex_rule(quad_degree);
    const Vector pu = spaces.displacement.project(mc.u, quad_degree);
    const std::span<const double> s(solution.sigma.data(), static_cast<std::size_t>(solution.sigma.size()));
    const std::span<const double> q(solution.p.data(), static_cast<std::size_t>(solution.p.size()));
    const std::span<const double> u(solution.u.data(), static_cast<std::size_t>(solution.u.size()));

    ErrorReport r;
    r.h = mesh.quality().h_max;
    double es = 0, eu = 0, ep = 0, esc = 0, ediv = 0, gn = 0, sn = 0, skw2 = 0;
    for (Index c = 0; c < mesh.num_cells(); ++c) {
        const double vol = mesh.cell_volume(c);
        const Vec3 uh = spaces.displacement.evaluate(u, c);
        Vec3 g_avg = Vec3::Zero();
        for (std::size_t k = 0; k < rule.size(); ++k) {
            const auto& b = rule.points[k];
            const double wt = rule.weights[k] * vol;
            const Vec3 x = mesh.point(c, b);
            const Mat3 sh = spaces.stress.evaluate(s, c, b);
            const Mat3 ph = spaces.multiplier.evaluate_skew(q, c, b);
            es += wt * (mc.sigma(x) - sh).squaredNorm();
            ep += wt * (mc.p(x) - ph).squaredNorm();
            eu += wt * (mc.u(x) - uh).squaredNorm();
            sn += wt * sh.squaredNorm();
            skw2 += wt * skw(sh).squaredNorm();
            if (mc.g) {
                const Vec3 gx = mc.g(x);
                gn += wt * gx.squaredNorm();
                g_avg += rule.weights[k] * gx;
            }
        }
        const Vec3 pu_c(pu(3 * c), pu(3 * c + 1), pu(3 * c + 2));
        esc += vol * (uh - pu_c).squaredNorm();
        ediv += vol * (spaces.stress.divergence(s, c) - g_avg).squaredNorm();
    }
    r.e_sigma = std::sqrt(es);
    r.e_u = std::sqrt(eu);
    r.e_p = std::sqrt(ep);
    r.e_superconv = std::sqrt(esc);
    r.e_div = std::sqrt(ediv);
    r.g_norm = std::sqrt(gn);
    r.sigma_h_norm = std::sqrt(sn);
    r.skw_sigma = std::sqrt(skw2);
    return r;
}

namespace {

double relative_difference(const Vector& a, const Vector& b)
{
    const double d = (a - b).norm();
    const double s = b.norm();
    return s > 0 ? d / s : d;
}

} // namespace

StudyEntry solve_case(const SimplicialMesh& mesh, const ManufacturedCase& mc, QuadratureMode mode,
                      const StudyOptions& options, Solution* solution_out)
{
    if (options.path == SolvePath::reduced && mode != QuadratureMode::corner)
        throw std::invalid_argument("the reduced path requires corner quadrature");
    const auto t0 = std::chrono::steady_clock::now();
    SolverOptions so;
    so.rtol = options.rtol;
    so.threads = options.threads;
    // Corner quadrature and the preconditioned large solves need vertex-supported bases: solve in
    // the nodal basis, then change basis to the requested variant.
    const Spaces requested = build_spaces(mesh, options.variant);
    const bool large = requested.dofmap.total() > so.direct_max_dim;
    const DofVariant solve_variant =
        (mode == QuadratureMode::corner || large) ? DofVariant::nodal : options.variant;
    const Spaces spaces = build_spaces(mesh, solve_variant);
    AssemblyOptions ao;
    ao.threads = options.threads;
    const SaddleSystem system = assemble(spaces, mc.problem(), mode, ao);

    StudyEntry entry;
    entry.assembly_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    entry.n_sigma = system.n_sigma();
    entry.n_u = system.n_u();
    entry.n_p = system.n_p();

    Solution sol;
    if (options.path == SolvePath::full) {
        std::optional<ReducedSystem> pre;
        if (mode == QuadratureMode::exact && large)
            pre = corner_preconditioner(spaces, mc.problem(), so);
        sol = solve_full(system, so, pre ? &*pre : nullptr);
    } else {
        sol = solve_reduced(build_reduced(system, so), so);
        if (options.compare_paths) {
            const Solution full = solve_full(system, so);
            entry.path_difference = std::array<double, 3>{relative_difference(sol.sigma, full.sigma),
                                                          relative_difference(sol.u, full.u),
                                                          relative_difference(sol.p, full.p)};
        }
    }
    entry.residuals = saddle_residuals(system, sol);
    entry.diagnostics = sol.diagnostics;
    if (solve_variant != options.variant) {
        sol.sigma = spaces.stress.convert({sol.sigma.data(), static_cast<std::size_t>(sol.sigma.size())},
                                          options.variant);
        sol.p = spaces.multiplier.convert({sol.p.data(), static_cast<std::size_t>(sol.p.size())}, options.variant);
        entry.diagnostics.method += " (nodal basis, converted)";
    }
    entry.errors = compute_errors(requested, sol, mc);
    if (solution_out)
        *solution_out = std::move(sol);
    return entry;
}

std::vector<RateRow> observed_rates(const std::vector<ErrorReport>& reports)
{
    std::vector<RateRow> rates;
    auto rate = [](double e0, double e1, double h0, double h1) {
        return std::log(e0 / e1) / std::log(h0 / h1);
    };
    for (std::size_t k = 1; k < reports.size(); ++k) {
        const auto& a = reports[k - 1];
        const auto& b = reports[k];
        rates.push_back({rate(a.e_sigma, b.e_sigma, a.h, b.h), rate(a.e_u, b.e_u, a.h, b.h),
                         rate(a.e_p, b.e_p, a.h, b.h), rate(a.e_superconv, b.e_superconv, a.h, b.h)});
    }
    return rates;
}

ConvergenceStudy convergence_study(const ManufacturedCase& mc, QuadratureMode mode, const std::vector<int>& n_list,
                                   const StudyOptions& options)
{
    if (n_list.size() < 3)
        throw std::invalid_argument("a convergence study needs at least 3 meshes");
    for (std::size_t k = 0; k < n_list.size(); ++k)
        if (n_list[k] < 1 || (k > 0 && n_list[k] <= n_list[k - 1]))
            throw std::invalid_argument("n_list must be positive and strictly ascending");
    if (options.path == SolvePath::reduced && mode != QuadratureMode::corner)
        throw std::invalid_argument("the reduced path requires corner quadrature");

    ConvergenceStudy study;
    study.case_name = mc.name;
    study.mode = mode;
    study.options = options;
    std::vector<ErrorReport> reports;
    for (int n : n_list) {
        const SimplicialMesh mesh = generate_cube_mesh(n);
        StudyEntry e = solve_case(mesh, mc, mode, options);
        e.errors.n = n;
        reports.push_back(e.errors);
        study.entries.push_back(std::move(e));
    }
    study.rates = observed_rates(reports);
    return study;
}

std::vector<RateCheck> check_rates(const ConvergenceStudy& study, double sigma, double u, double p,
                                   double superconv)
{
    struct Item
    {
        const char* name;
        double target;
        double ErrorReport::*err;
        double RateRow::*rate;
    };
    const Item items[] = {{"sigma", sigma, &ErrorReport::e_sigma, &RateRow::sigma},
                          {"u", u, &ErrorReport::e_u, &RateRow::u},
                          {"p", p, &ErrorReport::e_p, &RateRow::p},
                          {"superconv", superconv, &ErrorReport::e_superconv, &RateRow::superconv}};
    std::vector<RateCheck> out;
    for (const Item& it : items) {
        if (it.target < 0)
            continue;
        RateCheck rc;
        rc.quantity = it.name;
        rc.target = it.target;
        rc.monotone = !study.entries.empty();
        for (std::size_t k = 1; k < study.entries.size(); ++k)
            rc.monotone = rc.monotone && study.entries[k].errors.*it.err < study.entries[k - 1].errors.*it.err;
        rc.finest_rate = study.rates.empty() ? 0.0 : study.rates.back().*it.rate;
        out.push_back(rc);
    }
    return out;
}

ProbeFields default_probe_fields()
{
    using std::cos;
    using std::exp;
    using std::sin;
    ProbeFields f;
    f.tau = [](const Vec3& x) -> Mat3 {
        Mat3 m;
        m << sin(x(0) + 2 * x(1)), x(2) * x(2), cos(x(1) - x(2)),   //
            exp(0.5 * x(0)), cos(2 * x(2)) + x(0), sin(x(0) * x(1)),  //
            x(1) * x(2), sin(3 * x(0)), exp(-x(1)) + x(2);
        return m;
    };
    f.w = [](const Vec3& x) -> Vec3 { return Vec3(cos(x(1) * x(2)), sin(2 * x(0)) + x(2), exp(x(0) - x(1))); };
    f.tau_test = [](const Vec3& x) -> Mat3 {
        Mat3 m;
        m << cos(x(0) - x(2)), sin(x(1)), x(0) * x(1),               //
            x(2) - x(0) * x(0), exp(0.3 * x(1)), cos(x(0) + x(1)),    //
            sin(2 * x(2)), x(0) + x(1) * x(2), cos(3 * x(1));
        return m;
    };
    f.w_test = [](const Vec3& x) -> Vec3 { return Vec3(sin(x(0) + x(2)), x(1) * x(1), cos(2 * x(1)) * x(0)); };
    return f;
}

QuadratureProbe quadrature_error_probe(const SimplicialMesh& mesh, const ComplianceField& compliance,
                                       const ProbeFields& fields, int exact_degree)
{
    const Spaces spaces = build_spaces(mesh, DofVariant::nodal);
    ProblemSpec problem;
    problem.compliance = compliance;
    problem.variable_compliance = true;
    AssemblyOptions ao;
    ao.form_degree = exact_degree;
    const SaddleSystem ex = assemble(spaces, problem, QuadratureMode::exact, ao);
    const SaddleSystem co = assemble(spaces, problem, QuadratureMode::corner, ao);
    const SparseMatrix da = ex.A - co.A;
    const SparseMatrix dc = ex.C - co.C;

    const Vector s = spaces.stress.interpolate(fields.tau);
    const Vector w = spaces.multiplier.interpolate(fields.w);
    const Vector et = da * s + dc.transpose() * w;
    const Vector ez = dc * s;

    using ColMatrix = Eigen::SparseMatrix<double>;
    const Eigen::SimplicialLLT<ColMatrix> ms(ColMatrix(stress_mass(spaces)));
    const Eigen::SimplicialLLT<ColMatrix> mq(ColMatrix(multiplier_mass(spaces)));
    if (ms.info() != Eigen::Success || mq.info() != Eigen::Success)
        throw std::runtime_error("mass matrix factorization failed in the quadrature probe");

    QuadratureProbe out;
    out.h = mesh.quality().h_max;
    out.dual = std::sqrt(et.dot(ms.solve(et)) + ez.dot(mq.solve(ez)));
    const Vector t = spaces.stress.interpolate(fields.tau_test);
    const Vector z = spaces.multiplier.interpolate(fields.w_test);
    out.smooth = std::abs(t.dot(et) + z.dot(ez));
    return out;
}

double finest_slope(const std::vector<double>& h, const std::vector<double>& e)
{
    if (h.size() < 2 || h.size() != e.size())
        throw std::invalid_argument("slope needs two or more matching points");
    const std::size_t k = h.size() - 1;
    return std::log(e[k - 1] / e[k]) / std::log(h[k - 1] / h[k]);
}

double fitted_slope(const std::vector<double>& h, const std::vector<double>& e)
{
    if (h.size() < 2 || h.size() != e.size())
        throw std::invalid_argument("slope needs two or more matching points");
    double mx = 0, my = 0;
    const double n = static_cast<double>(h.size());
    for (std::size_t k = 0; k < h.size(); ++k) {
        mx += std::log(h[k]) / n;
        my += std::log(e[k]) / n;
    }
    double sxy = 0, sxx = 0;
    for (std::size_t k = 0; k < h.size(); ++k) {
        sxy += (std::log(h[k]) - mx) * (std::log(e[k]) - my);
        sxx += (std::log(h[k]) - mx) * (std::log(h[k]) - mx);
    }
    return sxy / sxx;
}

} // namespace elastica
