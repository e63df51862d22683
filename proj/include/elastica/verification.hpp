#pragma once

#include "elastica/cases.hpp"
#include "elastica/solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace elastica {

struct ErrorReport
{
    int n = 0;           // cube subdivisions, 0 for external meshes
    double h = 0.0;      // largest cell diameter
    double e_sigma = 0.0;
    double e_u = 0.0;
    double e_p = 0.0;
    double e_superconv = 0.0;   // |u_h - P_h u|, volume-weighted cell mismatch
    double e_div = 0.0;         // |div sigma_h - P_h g|
    double g_norm = 0.0;        // |g|
    double sigma_h_norm = 0.0;  // |sigma_h|
    double skw_sigma = 0.0;     // |skw sigma_h|, informative only

    /// |div sigma_h - P_h g| relative to |g|, or to |sigma_h| when g = 0.
    double conservation() const;
    bool conservation_ok(double tol = 1e-10) const { return conservation() <= tol; }
};

/// Errors of a computed solution against the case; all integrals with a simplex rule of quad_degree.
ErrorReport compute_errors(const Spaces& spaces, const Solution& solution, const ManufacturedCase& mc,
                           int quad_degree = 6);

enum class SolvePath { full, reduced };
const char* to_string(SolvePath p);

struct StudyOptions
{
    SolvePath path = SolvePath::full;
    DofVariant variant = DofVariant::nodal;
    /// Also solve the corner system monolithically and record the relative field differences.
    bool compare_paths = false;
    int threads = 1;
    double rtol = 1e-10;
};

struct StudyEntry
{
    ErrorReport errors;
    SaddleResiduals residuals;
    SolveDiagnostics diagnostics;
    std::size_t n_sigma = 0, n_u = 0, n_p = 0;
    double assembly_seconds = 0.0;
    /// Relative |x_reduced - x_full| / |x_full| per field (compare_paths only).
    std::optional<std::array<double, 3>> path_difference;
};

/// Rates between consecutive entries, log(e_{k-1} / e_k) / log(h_{k-1} / h_k).
struct RateRow
{
    double sigma = 0.0, u = 0.0, p = 0.0, superconv = 0.0;
};

struct ConvergenceStudy
{
    std::string case_name;
    QuadratureMode mode = QuadratureMode::exact;
    StudyOptions options;
    std::vector<StudyEntry> entries;
    std::vector<RateRow> rates;  // rates[k] pairs entries k and k+1
};

/// One solve on cube_mesh(n).
StudyEntry solve_case(const SimplicialMesh& mesh, const ManufacturedCase& mc, QuadratureMode mode,
                      const StudyOptions& options, Solution* solution_out = nullptr);

/// Throws std::invalid_argument unless n_list is strictly ascending with at least 3 entries,
/// or when the reduced path is requested in exact mode.
ConvergenceStudy convergence_study(const ManufacturedCase& mc, QuadratureMode mode, const std::vector<int>& n_list,
                                   const StudyOptions& options = {});

std::vector<RateRow> observed_rates(const std::vector<ErrorReport>& reports);

/// Accepted when the errors strictly decrease and the finest-pair slope reaches the target.
struct RateCheck
{
    std::string quantity;
    double target = 0.0;
    double finest_rate = 0.0;
    bool monotone = false;
    bool pass() const { return monotone && finest_rate >= target; }
};

/// Targets are given as slopes; a negative target skips the quantity.
std::vector<RateCheck> check_rates(const ConvergenceStudy& study, double sigma, double u, double p,
                                   double superconv);

/// Difference of the exact and corner evaluations of
///   a(s, t) + c(t, w) + c(s, z)
/// on (s, w) = Pi xi and test pairs (t, z).
struct QuadratureProbe
{
    int n = 0;
    double h = 0.0;
    double dual = 0.0;    // sup over discrete test pairs of |E| / |(t, z)|_0
    double smooth = 0.0;  // |E| with the interpolated smooth test pair
};

/// Smooth probe fields: xi = (tau, w) and zeta = (tau', w').
struct ProbeFields
{
    MatField tau;
    VecField w;
    MatField tau_test;
    VecField w_test;
};

ProbeFields default_probe_fields();

QuadratureProbe quadrature_error_probe(const SimplicialMesh& mesh, const ComplianceField& compliance,
                                       const ProbeFields& fields, int exact_degree = 6);

/// Least-squares slope of log e against log h over the given points.
double fitted_slope(const std::vector<double>& h, const std::vector<double>& e);
/// Slope between the last two points.
double finest_slope(const std::vector<double>& h, const std::vector<double>& e);

struct InfSupReport
{
    int n = 0;
    QuadratureMode mode = QuadratureMode::exact;
    double beta_full = 0.0;
    double beta_c_kerb = 0.0;
    double alpha = 0.0;
    std::size_t dimension = 0;
    /// Corner mode: extreme condition numbers of the vertex-local saddle blocks.
    std::size_t local_blocks = 0;
    double local_condition_min = 0.0;
    double local_condition_max = 0.0;
};

inline constexpr std::size_t infsup_dimension_cap = 2500;

/// Dense generalized eigenvalue estimates. Throws std::invalid_argument when the
/// total number of unknowns exceeds infsup_dimension_cap.
InfSupReport estimate_infsup(const Spaces& spaces, const ComplianceField& compliance, QuadratureMode mode,
                             int threads = 1);

} // namespace elastica
