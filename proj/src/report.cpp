#include "elastica/report.hpp"

#include <cstdio>

namespace elastica {

std::string format_number(double x)
{
    char buf[32];
    if (x == 0.0)
        x = 0.0;  // no "-0"
    std::snprintf(buf, sizeof buf, "%.11e", x);
    return buf;
}

namespace {

std::string row(std::initializer_list<std::string> cells)
{
    std::string s;
    for (const auto& c : cells) {
        if (!s.empty())
            s += ',';
        s += c;
    }
    return s;
}

std::string fmt(double x)
{
    return format_number(x);
}

} // namespace

void write_rate_csv(std::ostream& out, const ConvergenceStudy& study)
{
    out << "n,h,e_sigma,e_u,e_p,e_superconv,rate_sigma,rate_u,rate_p,rate_superconv\n";
    for (std::size_t k = 0; k < study.entries.size(); ++k) {
        const ErrorReport& e = study.entries[k].errors;
        std::string rates = ",,,";
        if (k > 0) {
            const RateRow& r = study.rates[k - 1];
            rates = row({fmt(r.sigma), fmt(r.u), fmt(r.p), fmt(r.superconv)});
        }
        out << row({std::to_string(e.n), fmt(e.h), fmt(e.e_sigma), fmt(e.e_u), fmt(e.e_p), fmt(e.e_superconv),
                    rates})
            << '\n';
    }
}

void write_infsup_csv(std::ostream& out, const std::vector<InfSupReport>& reports)
{
    out << "n,beta_full,beta_c_kerb,alpha,mode\n";
    for (const InfSupReport& r : reports)
        out << row({std::to_string(r.n), fmt(r.beta_full), fmt(r.beta_c_kerb), fmt(r.alpha), to_string(r.mode)})
            << '\n';
}

void write_displacement_csv(std::ostream& out, const Spaces& spaces, const Solution& solution)
{
    const SimplicialMesh& mesh = spaces.mesh();
    out << "cell,x,y,z,u1,u2,u3\n";
    for (Index c = 0; c < mesh.num_cells(); ++c) {
        const Vec3 x = mesh.centroid(c);
        const auto i = static_cast<Eigen::Index>(3 * c);
        out << row({std::to_string(c), fmt(x(0)), fmt(x(1)), fmt(x(2)), fmt(solution.u(i)), fmt(solution.u(i + 1)),
                    fmt(solution.u(i + 2))})
            << '\n';
    }
}

void write_traction_csv(std::ostream& out, const Spaces& spaces, const Solution& solution)
{
    const SimplicialMesh& mesh = spaces.mesh();
    const std::span<const double> s(solution.sigma.data(), static_cast<std::size_t>(solution.sigma.size()));
    out << "facet,x,y,z,t1,t2,t3\n";
    for (Index f = 0; f < mesh.num_facets(); ++f) {
        const Index c = mesh.facet_cells(f)[0];
        std::array<double, 4> bary{};
        for (int k = 0; k < 4; ++k)
            bary[k] = mesh.cell_facets(c)[k] == f ? 0.0 : 1.0 / 3.0;
        // sigma n is linear on the facet, so its average is the centroid value.
        const Vec3 t = spaces.stress.evaluate(s, c, bary) * mesh.facet_normal(f);
        const Vec3 x = mesh.point(c, bary);
        out << row({std::to_string(f), fmt(x(0)), fmt(x(1)), fmt(x(2)), fmt(t(0)), fmt(t(1)), fmt(t(2))}) << '\n';
    }
}

void write_multiplier_csv(std::ostream& out, const Spaces& spaces, const Solution& solution)
{
    const SimplicialMesh& mesh = spaces.mesh();
    const std::span<const double> q(solution.p.data(), static_cast<std::size_t>(solution.p.size()));
    out << "edge,x,y,z,w1,w2,w3,w_t\n";
    for (Index e = 0; e < mesh.num_edges(); ++e) {
        const Index c = mesh.edge_cells(e).front();
        std::array<double, 4> bary{};
        for (int k = 0; k < 4; ++k) {
            const Index v = mesh.cell(c)[k];
            bary[k] = (v == mesh.edge(e)[0] || v == mesh.edge(e)[1]) ? 0.5 : 0.0;
        }
        const Vec3 w = spaces.multiplier.evaluate(q, c, bary);
        const Vec3 x = mesh.point(c, bary);
        out << row({std::to_string(e), fmt(x(0)), fmt(x(1)), fmt(x(2)), fmt(w(0)), fmt(w(1)), fmt(w(2)),
                    fmt(w.dot(mesh.edge_tangent(e)))})
            << '\n';
    }
}

void write_vtk(std::ostream& out, const SimplicialMesh& mesh, const Vector& u)
{
    out << "# vtk DataFile Version 3.0\nelastica displacement\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.num_vertices() << " double\n";
    for (const Vec3& v : mesh.vertices())
        out << fmt(v(0)) << ' ' << fmt(v(1)) << ' ' << fmt(v(2)) << '\n';
    out << "CELLS " << mesh.num_cells() << ' ' << 5 * mesh.num_cells() << '\n';
    for (Index c = 0; c < mesh.num_cells(); ++c) {
        auto t = mesh.cell(c);
        if (mesh.cell_orientation(c) < 0)
            std::swap(t[2], t[3]);
        out << "4 " << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
    }
    out << "CELL_TYPES " << mesh.num_cells() << '\n';
    for (Index c = 0; c < mesh.num_cells(); ++c)
        out << "10\n";
    out << "CELL_DATA " << mesh.num_cells() << "\nVECTORS u double\n";
    for (Index c = 0; c < mesh.num_cells(); ++c)
        out << fmt(u(static_cast<Eigen::Index>(3 * c))) << ' ' << fmt(u(static_cast<Eigen::Index>(3 * c + 1)))
            << ' ' << fmt(u(static_cast<Eigen::Index>(3 * c + 2))) << '\n';
}

} // namespace elastica
