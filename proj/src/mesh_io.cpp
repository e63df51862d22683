#include "elastica/mesh.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace elastica {

namespace {

std::string format_coord(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

MeshError parse_error(const std::string& what)
{
    return MeshError(MeshError::Kind::parse, {}, "mesh file: " + what);
}

} // namespace

void write_mesh(std::ostream& out, const SimplicialMesh& mesh)
{
    out << "tetmesh 1\n" << mesh.num_vertices() << ' ' << mesh.num_cells() << '\n';
    for (const Vec3& x : mesh.vertices())
        out << format_coord(x(0)) << ' ' << format_coord(x(1)) << ' ' << format_coord(x(2)) << '\n';
    for (const auto& c : mesh.cells())
        out << c[0] << ' ' << c[1] << ' ' << c[2] << ' ' << c[3] << '\n';
}

SimplicialMesh read_mesh(std::istream& in)
{
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != "tetmesh")
        throw parse_error("missing 'tetmesh' header");
    if (version != 1)
        throw parse_error("unsupported version " + std::to_string(version));
    std::size_t nv = 0, nt = 0;
    if (!(in >> nv >> nt))
        throw parse_error("missing vertex/cell counts");
    std::vector<Vec3> verts(nv);
    for (std::size_t i = 0; i < nv; ++i)
        if (!(in >> verts[i](0) >> verts[i](1) >> verts[i](2)))
            throw parse_error("truncated vertex block at vertex " + std::to_string(i));
    std::vector<std::array<Index, 4>> cells(nt);
    for (std::size_t i = 0; i < nt; ++i)
        if (!(in >> cells[i][0] >> cells[i][1] >> cells[i][2] >> cells[i][3]))
            throw parse_error("truncated cell block at cell " + std::to_string(i));
    return SimplicialMesh::build(std::move(verts), std::move(cells));
}

void write_mesh_file(const std::string& path, const SimplicialMesh& mesh)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    write_mesh(out, mesh);
    if (!out)
        throw std::runtime_error("failed writing '" + path + "'");
}

SimplicialMesh read_mesh_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    return read_mesh(in);
}

} // namespace elastica
