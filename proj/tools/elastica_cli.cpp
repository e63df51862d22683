#include "elastica/report.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

namespace fs = std::filesystem;
using namespace elastica;

namespace {

struct RunConfig
{
    std::string case_name = "trig";
    QuadratureMode mode = QuadratureMode::exact;
    SolvePath path = SolvePath::full;
    DofVariant variant = DofVariant::nodal;
    int n = 2;
    std::vector<int> n_list;
    std::string mesh_file;
    std::string mesh_out;
    double lambda = 1.0;
    double mu = 1.0;
    std::string out = ".";
    int threads = 1;
    double rtol = 1e-10;
    bool write_fields = false;
    bool compare_paths = false;
};

/// Accumulates named checks; the final line is the machine-readable status.
class Checks
{
public:
    void add(const std::string& name, bool ok, const std::string& detail = {})
    {
        std::printf("check %-34s %s%s%s\n", name.c_str(), ok ? "pass" : "FAIL", detail.empty() ? "" : "  ",
                    detail.c_str());
        ok_ = ok_ && ok;
    }
    bool ok() const { return ok_; }

private:
    bool ok_ = true;
};

std::string num(double x)
{
    return format_number(x);
}

void validate(const RunConfig& cfg)
{
    if (cfg.path == SolvePath::reduced && cfg.mode != QuadratureMode::corner)
        throw std::invalid_argument("--path reduced requires --mode corner");
    if (!(cfg.rtol > 0))
        throw std::invalid_argument("--rtol must be positive");
    if (cfg.threads < 1)
        throw std::invalid_argument("--threads must be at least 1");
    if (cfg.n < 1)
        throw std::invalid_argument("--n must be at least 1");
}

StudyOptions study_options(const RunConfig& cfg)
{
    StudyOptions o;
    o.path = cfg.path;
    o.variant = cfg.variant;
    o.threads = cfg.threads;
    o.rtol = cfg.rtol;
    o.compare_paths = cfg.compare_paths;
    return o;
}

fs::path output_dir(const RunConfig& cfg)
{
    fs::path dir(cfg.out);
    fs::create_directories(dir);
    return dir;
}

std::ofstream open_output(const fs::path& p)
{
    std::ofstream f(p, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot write " + p.string());
    return f;
}

bool is_exact_case(const std::string& name)
{
    return name == "zero" || name == "linear_patch";
}

int cmd_mesh_gen(const RunConfig& cfg, Checks& checks)
{
    const SimplicialMesh mesh = generate_cube_mesh(cfg.n);
    const fs::path target = cfg.mesh_out.empty() ? output_dir(cfg) / ("cube_" + std::to_string(cfg.n) + ".tetmesh")
                                                 : fs::path(cfg.mesh_out);
    if (target.has_parent_path())
        fs::create_directories(target.parent_path());
    write_mesh_file(target.string(), mesh);
    std::printf("mesh: n=%d vertices=%zu edges=%zu facets=%zu cells=%zu\n", cfg.n, mesh.num_vertices(),
                mesh.num_edges(), mesh.num_facets(), mesh.num_cells());
    std::printf("written: %s\n", target.string().c_str());
    const long euler = static_cast<long>(mesh.num_vertices()) - static_cast<long>(mesh.num_edges()) +
                       static_cast<long>(mesh.num_facets()) - static_cast<long>(mesh.num_cells());
    checks.add("euler_characteristic", euler == 1, "V-E+F-T=" + std::to_string(euler));
    return 0;
}

int cmd_solve(const RunConfig& cfg, Checks& checks)
{
    const ManufacturedCase mc = manufactured_case(cfg.case_name, cfg.lambda, cfg.mu);
    const SimplicialMesh mesh = cfg.mesh_file.empty() ? generate_cube_mesh(cfg.n) : read_mesh_file(cfg.mesh_file);
    const auto t0 = std::chrono::steady_clock::now();
    Solution sol;
    StudyEntry e = solve_case(mesh, mc, cfg.mode, study_options(cfg), &sol);
    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    e.errors.n = cfg.mesh_file.empty() ? cfg.n : 0;

    std::printf("case: %s  mode: %s  path: %s  variant: %s\n", mc.name.c_str(), to_string(cfg.mode),
                to_string(cfg.path), to_string(cfg.variant));
    std::printf("mesh: vertices=%zu cells=%zu h=%s\n", mesh.num_vertices(), mesh.num_cells(), num(e.errors.h).c_str());
    std::printf("unknowns: sigma=%zu u=%zu p=%zu\n", e.n_sigma, e.n_u, e.n_p);
    const SolveDiagnostics& d = e.diagnostics;
    std::printf("solver: %s dimension=%zu nonzeros=%zu relative_residual=%s iterations=%d\n", d.method.c_str(),
                d.dimension, d.nonzeros, num(d.relative_residual()).c_str(), d.iterations);
    if (cfg.path == SolvePath::reduced)
        std::printf("local_blocks: %zu condition_min=%s condition_max=%s\n", d.local_blocks,
                    num(d.local_condition_min).c_str(), num(d.local_condition_max).c_str());
    std::printf("residuals: total=%s momentum=%s symmetry=%s\n", num(e.residuals.total).c_str(),
                num(e.residuals.momentum).c_str(), num(e.residuals.symmetry).c_str());
    const ErrorReport& r = e.errors;
    std::printf("errors: sigma=%s u=%s p=%s superconv=%s\n", num(r.e_sigma).c_str(), num(r.e_u).c_str(),
                num(r.e_p).c_str(), num(r.e_superconv).c_str());
    std::printf("conservation: |div sigma_h - P_h g|=%s relative=%s\n", num(r.e_div).c_str(),
                num(r.conservation()).c_str());
    std::printf("diagnostic: |skw sigma_h|=%s\n", num(r.skw_sigma).c_str());
    std::printf("timings: assembly=%.3fs factor=%.3fs solve=%.3fs total=%.3fs\n", e.assembly_seconds,
                d.factor_seconds, d.solve_seconds, total);

    checks.add("solver_residual", d.method == "trivial" || d.relative_residual() <= cfg.rtol,
               num(d.relative_residual()));
    checks.add("conservation", r.conservation_ok(), num(r.conservation()));
    checks.add("weak_symmetry", e.residuals.symmetry <= 1e-10, num(e.residuals.symmetry));
    if (e.path_difference) {
        const auto& pd = *e.path_difference;
        const double worst = std::max({pd[0], pd[1], pd[2]});
        checks.add("reduced_matches_full", worst <= 1e-8, num(worst));
    }
    if (is_exact_case(mc.name)) {
        const double worst = std::max({r.e_sigma, r.e_p, r.e_superconv});
        checks.add("patch_exactness", worst <= 1e-9, num(worst));
    }

    if (cfg.write_fields) {
        const fs::path dir = output_dir(cfg);
        const Spaces spaces = build_spaces(mesh, cfg.variant);
        const std::string stem = mc.name + "_" + to_string(cfg.mode) + "_" + to_string(cfg.path);
        auto f1 = open_output(dir / (stem + "_u.csv"));
        write_displacement_csv(f1, spaces, sol);
        auto f2 = open_output(dir / (stem + "_traction.csv"));
        write_traction_csv(f2, spaces, sol);
        auto f3 = open_output(dir / (stem + "_multiplier.csv"));
        write_multiplier_csv(f3, spaces, sol);
        auto f4 = open_output(dir / (stem + ".vtk"));
        write_vtk(f4, mesh, sol.u);
        std::printf("fields written to %s/%s_*\n", dir.string().c_str(), stem.c_str());
    }
    return 0;
}

int cmd_convergence(const RunConfig& cfg, Checks& checks)
{
    const ManufacturedCase mc = manufactured_case(cfg.case_name, cfg.lambda, cfg.mu);
    const std::vector<int> n_list = cfg.n_list.empty() ? std::vector<int>{2, 4, 8} : cfg.n_list;
    const ConvergenceStudy study = convergence_study(mc, cfg.mode, n_list, study_options(cfg));

    const fs::path csv = output_dir(cfg) / ("rates_" + mc.name + "_" + to_string(cfg.mode) + "_" +
                                            to_string(cfg.path) + ".csv");
    {
        auto f = open_output(csv);
        write_rate_csv(f, study);
    }
    write_rate_csv(std::cout, study);
    std::printf("written: %s\n", csv.string().c_str());

    for (const StudyEntry& e : study.entries) {
        const std::string tag = "n=" + std::to_string(e.errors.n);
        checks.add("conservation " + tag, e.errors.conservation_ok(), num(e.errors.conservation()));
        checks.add("weak_symmetry " + tag, e.residuals.symmetry <= 1e-10, num(e.residuals.symmetry));
        if (e.path_difference) {
            const auto& pd = *e.path_difference;
            const double worst = std::max({pd[0], pd[1], pd[2]});
            checks.add("reduced_matches_full " + tag, worst <= 1e-8, num(worst));
        }
        if (is_exact_case(mc.name)) {
            const double worst = std::max({e.errors.e_sigma, e.errors.e_p, e.errors.e_superconv});
            checks.add("patch_exactness " + tag, worst <= 1e-9, num(worst));
        }
    }
    if (!is_exact_case(mc.name)) {
        const bool exact = cfg.mode == QuadratureMode::exact;
        for (const RateCheck& rc : check_rates(study, exact ? 1.7 : 0.9, 0.9, exact ? 1.7 : -1.0, 1.7))
            checks.add("rate " + rc.quantity + " >= " + num(rc.target), rc.pass(),
                       "finest=" + num(rc.finest_rate) + (rc.monotone ? "" : " (not monotone)"));
    }
    return 0;
}

int cmd_infsup(const RunConfig& cfg, Checks& checks)
{
    const std::vector<int> n_list = cfg.n_list.empty() ? std::vector<int>{1, 2} : cfg.n_list;
    const IsotropicCompliance material{cfg.lambda, cfg.mu};
    material.validate();
    std::vector<InfSupReport> reports;
    for (int n : n_list) {
        const SimplicialMesh mesh = generate_cube_mesh(n);
        const Spaces spaces = build_spaces(mesh, DofVariant::nodal);
        InfSupReport r = estimate_infsup(spaces, constant_compliance(material), cfg.mode, cfg.threads);
        r.n = n;
        reports.push_back(r);
        const std::string tag = "n=" + std::to_string(n);
        checks.add("beta_full > 0 " + tag, r.beta_full > 0, num(r.beta_full));
        checks.add("beta_c_kerb > 0 " + tag, r.beta_c_kerb > 0, num(r.beta_c_kerb));
        checks.add("alpha > 0 " + tag, r.alpha > 0, num(r.alpha));
        if (cfg.mode == QuadratureMode::corner)
            std::printf("local blocks %s: %zu condition in [%s, %s]\n", tag.c_str(), r.local_blocks,
                        num(r.local_condition_min).c_str(), num(r.local_condition_max).c_str());
    }
    for (std::size_t k = 1; k < reports.size(); ++k)
        checks.add("beta_c_kerb stable n=" + std::to_string(reports[k].n),
                   reports[k].beta_c_kerb >= 0.5 * reports[k - 1].beta_c_kerb,
                   num(reports[k].beta_c_kerb / reports[k - 1].beta_c_kerb));

    const fs::path csv = output_dir(cfg) / ("infsup_" + std::string(to_string(cfg.mode)) + ".csv");
    {
        auto f = open_output(csv);
        write_infsup_csv(f, reports);
    }
    write_infsup_csv(std::cout, reports);
    std::printf("written: %s\n", csv.string().c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Mixed finite elements for weakly symmetric linear elasticity on tetrahedra"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value configuration file (command-line flags take precedence)");

    RunConfig cfg;
    const std::map<std::string, QuadratureMode> modes{{"exact", QuadratureMode::exact},
                                                      {"corner", QuadratureMode::corner}};
    const std::map<std::string, SolvePath> paths{{"full", SolvePath::full}, {"reduced", SolvePath::reduced}};
    const std::map<std::string, DofVariant> variants{{"nodal", DofVariant::nodal}, {"moment", DofVariant::moment}};

    app.add_option("--case", cfg.case_name, "Manufactured case")
        ->check(CLI::IsMember(manufactured_case_names()));
    app.add_option("--mode", cfg.mode, "Quadrature mode")->transform(CLI::CheckedTransformer(modes));
    app.add_option("--path", cfg.path, "Solve path")->transform(CLI::CheckedTransformer(paths));
    app.add_option("--variant", cfg.variant, "Degree-of-freedom variant")
        ->transform(CLI::CheckedTransformer(variants));
    app.add_option("--n", cfg.n, "Cube subdivisions")->check(CLI::PositiveNumber);
    app.add_option("--n-list", cfg.n_list, "Subdivisions for studies")->delimiter(',');
    app.add_option("--mesh", cfg.mesh_file, "Mesh file to solve on instead of the generated cube");
    app.add_option("--lambda", cfg.lambda, "Lame lambda");
    app.add_option("--mu", cfg.mu, "Lame mu");
    app.add_option("--out", cfg.out, "Output directory")->envname("ELASTICA_OUT");
    app.add_option("--threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--rtol", cfg.rtol, "Solver relative tolerance");

    auto* mesh_gen = app.add_subcommand("mesh-gen", "Write the Kuhn cube mesh");
    mesh_gen->add_option("--file", cfg.mesh_out, "Target file (default <out>/cube_<n>.tetmesh)");
    auto* solve = app.add_subcommand("solve", "Solve one manufactured case");
    solve->add_flag("--write-fields", cfg.write_fields, "Export field CSVs and VTK");
    solve->add_flag("--compare", cfg.compare_paths, "Reduced path: also solve monolithically and compare");
    auto* conv = app.add_subcommand("convergence", "Convergence study with rate table");
    conv->add_flag("--compare", cfg.compare_paths, "Reduced path: also solve monolithically and compare");
    auto* infsup = app.add_subcommand("infsup", "Dense inf-sup estimates (n <= 2)");
    for (auto* sub : {mesh_gen, solve, conv, infsup})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        if (e.get_exit_code() != 0)
            std::printf("STATUS: fail\n");
        return code;
    }

    Checks checks;
    try {
        validate(cfg);
        if (mesh_gen->parsed())
            cmd_mesh_gen(cfg, checks);
        else if (solve->parsed())
            cmd_solve(cfg, checks);
        else if (conv->parsed())
            cmd_convergence(cfg, checks);
        else if (infsup->parsed())
            cmd_infsup(cfg, checks);
    } catch (const std::exception& e) {
        std::fflush(stdout);
        std::fprintf(stderr, "error: %s\n", e.what());
        std::printf("STATUS: fail\n");
        return 2;
    }
    std::printf("STATUS: %s\n", checks.ok() ? "pass" : "fail");
    return checks.ok() ? 0 : 1;
}
