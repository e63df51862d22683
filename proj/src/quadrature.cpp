#include "elastica/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace elastica {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights)
{
    // Legendre P_n and its derivative by the three-term recurrence.
    auto legendre = [n](double x) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        return std::pair{p1, n * (x * p1 - p0) / (x * x - 1.0)};
    };
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre(x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        const double dp = legendre(x).second;
        nodes[i] = 0.5 * (1.0 - x);
        weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
}

namespace {

// Collapsed (Duffy) product of Gauss-Legendre rules. The map
//   x = a, y = b (1 - a), z = c (1 - a)(1 - b)
// has Jacobian (1-a)^2 (1-b), so a degree-d monomial needs exactness d+2, d+1, d in a, b, c.
QuadratureRule collapsed_tet_rule(int degree)
{
    std::vector<double> xa, wa, xb, wb, xc, wc;
    gauss_legendre((degree + 4) / 2, xa, wa);
    gauss_legendre((degree + 3) / 2, xb, wb);
    gauss_legendre((degree + 2) / 2, xc, wc);
    QuadratureRule r;
    r.degree = degree;
    for (std::size_t i = 0; i < xa.size(); ++i)
        for (std::size_t j = 0; j < xb.size(); ++j)
            for (std::size_t k = 0; k < xc.size(); ++k) {
                const double a = xa[i], b = xb[j], c = xc[k];
                const double x = a, y = b * (1 - a), z = c * (1 - a) * (1 - b);
                r.points.push_back({1.0 - x - y - z, x, y, z});
                // Reference volume 1/6 is divided out so weights sum to 1.
                r.weights.push_back(6.0 * wa[i] * wb[j] * wc[k] * (1 - a) * (1 - a) * (1 - b));
            }
    return r;
}

} // namespace

QuadratureRule simplex_rule(int degree)
{
    if (degree < 1 || degree > 6)
        throw std::invalid_argument("simplex_rule: unsupported degree " + std::to_string(degree));
    if (degree == 1)
        return {{{0.25, 0.25, 0.25, 0.25}}, {1.0}, 1};
    if (degree == 2) {
        const double a = 0.5854101966249685, b = 0.1381966011250105;
        return {{{a, b, b, b}, {b, a, b, b}, {b, b, a, b}, {b, b, b, a}}, {0.25, 0.25, 0.25, 0.25}, 2};
    }
    return collapsed_tet_rule(degree);
}

TriangleRule triangle_rule(int degree)
{
    if (degree < 1)
        throw std::invalid_argument("triangle_rule: unsupported degree " + std::to_string(degree));
    std::vector<double> xa, wa, xb, wb;
    gauss_legendre((degree + 3) / 2, xa, wa);
    gauss_legendre((degree + 2) / 2, xb, wb);
    TriangleRule r;
    r.degree = degree;
    for (std::size_t i = 0; i < xa.size(); ++i)
        for (std::size_t j = 0; j < xb.size(); ++j) {
            const double a = xa[i], b = xb[j];
            const double x = a, y = b * (1 - a);
            r.points.push_back({1.0 - x - y, x, y});
            r.weights.push_back(2.0 * wa[i] * wb[j] * (1 - a));
        }
    return r;
}

LineRule line_rule(int degree)
{
    if (degree < 0)
        throw std::invalid_argument("line_rule: unsupported degree " + std::to_string(degree));
    std::vector<double> x, w;
    gauss_legendre(degree / 2 + 1, x, w);
    LineRule r;
    r.degree = degree;
    for (std::size_t i = 0; i < x.size(); ++i) {
        r.points.push_back({1.0 - x[i], x[i]});
        r.weights.push_back(w[i]);
    }
    return r;
}

double corner_quadrature(const SimplicialMesh& mesh, Index cell, const std::function<double(const Vec3&)>& f)
{
    double s = 0.0;
    for (Index v : mesh.cell(cell))
        s += f(mesh.vertex(v));
    return 0.25 * mesh.cell_volume(cell) * s;
}

double integrate(const SimplicialMesh& mesh, Index cell, const QuadratureRule& rule,
                 const std::function<double(const Vec3&)>& f)
{
    double s = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q)
        s += rule.weights[q] * f(mesh.point(cell, rule.points[q]));
    return s * mesh.cell_volume(cell);
}

} // namespace elastica
