#pragma once

#include "elastica/mesh.hpp"

#include <array>
#include <functional>
#include <vector>

namespace elastica {

/// Quadrature on a simplex in barycentric coordinates; weights sum to 1 and
/// are scaled by the simplex measure when applied.
template <int N>
struct SimplexRule
{
    std::vector<std::array<double, N>> points;
    std::vector<double> weights;
    int degree = 0;

    std::size_t size() const { return weights.size(); }
};

using QuadratureRule = SimplexRule<4>;
using TriangleRule = SimplexRule<3>;
using LineRule = SimplexRule<2>;

/// Tetrahedron rule exact for total degree <= degree, degree in 1..6.
/// Throws std::invalid_argument otherwise.
QuadratureRule simplex_rule(int degree);
TriangleRule triangle_rule(int degree);
LineRule line_rule(int degree);

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// |vol T| / 4 * sum of f over the cell's vertices. Exact on P1.
double corner_quadrature(const SimplicialMesh& mesh, Index cell, const std::function<double(const Vec3&)>& f);

double integrate(const SimplicialMesh& mesh, Index cell, const QuadratureRule& rule,
                 const std::function<double(const Vec3&)>& f);

} // namespace elastica
