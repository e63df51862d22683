#include "elastica/tensor.hpp"

#include <stdexcept>
#include <string>

namespace elastica {

Mat3 sym(const Mat3& m) { return 0.5 * (m + m.transpose()); }

Mat3 skw(const Mat3& m) { return 0.5 * (m - m.transpose()); }

Vec3 vec_of(const Mat3& k, double rel_tol)
{
    const double asym = sym(k).norm();
    if (asym > rel_tol * k.norm())
        throw std::invalid_argument("vec_of: matrix is not skew (|sym K| = " + std::to_string(asym) + ")");
    // Average the two copies of each entry so roundoff in the input does not bias the result.
    return Vec3(0.5 * (k(2, 1) - k(1, 2)), 0.5 * (k(0, 2) - k(2, 0)), 0.5 * (k(1, 0) - k(0, 1)));
}

Mat3 skew_of(const Vec3& w)
{
    Mat3 k;
    k << 0.0, -w(2), w(1),
         w(2), 0.0, -w(0),
        -w(1), w(0), 0.0;
    return k;
}

Mat3 xi(const Mat3& m) { return m.transpose() - m.trace() * Mat3::Identity(); }

Mat3 xi_inv(const Mat3& m) { return m.transpose() - 0.5 * m.trace() * Mat3::Identity(); }

void IsotropicCompliance::validate() const
{
    if (!(mu > 0.0))
        throw std::invalid_argument("compliance: shear modulus must be positive");
    if (!(3.0 * lambda + 2.0 * mu > 0.0))
        throw std::invalid_argument("compliance: 3 lambda + 2 mu must be positive");
}

Mat3 IsotropicCompliance::apply(const Mat3& m) const
{
    const double k = lambda / (3.0 * lambda + 2.0 * mu);
    return (m - k * m.trace() * Mat3::Identity()) / (2.0 * mu);
}

Mat3 IsotropicCompliance::stiffness(const Mat3& m) const
{
    return 2.0 * mu * m + lambda * m.trace() * Mat3::Identity();
}

Mat9 IsotropicCompliance::matrix() const
{
    const double k = lambda / (3.0 * lambda + 2.0 * mu);
    Mat9 a = Mat9::Identity() / (2.0 * mu);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            a(4 * i, 4 * j) -= k / (2.0 * mu);
    return a;
}

ComplianceField constant_compliance(IsotropicCompliance c)
{
    c.validate();
    return [c](const Vec3&, std::size_t) { return c; };
}

Mat3 apply_compliance(const ComplianceField& field, const Mat3& m, const Vec3& x, std::size_t cell)
{
    return field(x, cell).apply(m);
}

namespace {

// d/dx_k of the field, central differences of order 2 or 4.
Mat3 partial(const MatField& f, const Vec3& x, int k, double h, bool fourth)
{
    const Vec3 e = Vec3::Unit(k) * h;
    if (!fourth)
        return (f(x + e) - f(x - e)) / (2.0 * h);
    return (-f(x + 2.0 * e) + 8.0 * f(x + e) - 8.0 * f(x - e) + f(x - 2.0 * e)) / (12.0 * h);
}

Vec3 div_impl(const MatField& f, const Vec3& x, double h, bool fourth)
{
    Vec3 d = Vec3::Zero();
    for (int k = 0; k < 3; ++k)
        d += partial(f, x, k, h, fourth).col(k);
    return d;
}

Mat3 curl_impl(const MatField& f, const Vec3& x, double h, bool fourth)
{
    Mat3 d[3];
    for (int k = 0; k < 3; ++k)
        d[k] = partial(f, x, k, h, fourth);
    // (curl M)_ij = eps_jkl d_k M_il
    Mat3 c;
    for (int i = 0; i < 3; ++i) {
        c(i, 0) = d[1](i, 2) - d[2](i, 1);
        c(i, 1) = d[2](i, 0) - d[0](i, 2);
        c(i, 2) = d[0](i, 1) - d[1](i, 0);
    }
    return c;
}

} // namespace

Vec3 fd_div(const MatField& field, const Vec3& x, double step) { return div_impl(field, x, step, false); }
Mat3 fd_curl(const MatField& field, const Vec3& x, double step) { return curl_impl(field, x, step, false); }
Vec3 fd_div4(const MatField& field, const Vec3& x, double step) { return div_impl(field, x, step, true); }
Mat3 fd_curl4(const MatField& field, const Vec3& x, double step) { return curl_impl(field, x, step, true); }

IdentityResiduals check_differential_identities(const MatField& field, std::span<const Vec3> probes, double step)
{
    const MatField skw_field = [&](const Vec3& x) { return skw(field(x)); };
    const MatField xi_field = [&](const Vec3& x) { return xi(field(x)); };
    // vec skw M stored in the first row so the matrix curl can act on it.
    const MatField axial_field = [&](const Vec3& x) {
        Mat3 m = Mat3::Zero();
        m.row(0) = vec_of(skw(field(x))).transpose();
        return m;
    };

    IdentityResiduals r{0.0, 0.0};
    for (const Vec3& x : probes) {
        const Vec3 lhs3 = fd_div(skw_field, x, step);
        const Vec3 rhs3 = -fd_curl4(axial_field, x, step).row(0).transpose();
        r.div_skw = std::max(r.div_skw, (lhs3 - rhs3).norm());

        const Vec3 lhs4 = fd_div(xi_field, x, step);
        const Vec3 rhs4 = 2.0 * vec_of(skw(fd_curl4(field, x, step)));
        r.div_xi = std::max(r.div_xi, (lhs4 - rhs4).norm());
    }
    return r;
}

} // namespace elastica
