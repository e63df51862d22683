#pragma once

#include <Eigen/Dense>

#include <functional>
#include <span>

namespace elastica {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;
using Mat9 = Eigen::Matrix<double, 9, 9>;

Mat3 sym(const Mat3& m);
Mat3 skw(const Mat3& m);

/// Axial vector of a skew matrix: skew_of(w) * b == w.cross(b).
/// Throws std::invalid_argument when ||sym(k)|| > rel_tol * ||k||.
Vec3 vec_of(const Mat3& k, double rel_tol = 1e-12);
Mat3 skew_of(const Vec3& w);

/// Transpose minus trace, and its inverse Aᵀ - tr(A)/2 I.
Mat3 xi(const Mat3& m);
Mat3 xi_inv(const Mat3& m);

/// Frobenius inner product.
inline double ddot(const Mat3& a, const Mat3& b) { return (a.array() * b.array()).sum(); }

/// Isotropic compliance extended verbatim to all of M:
///   A M = (M - lambda / (3 lambda + 2 mu) tr(M) I) / (2 mu).
struct IsotropicCompliance
{
    double lambda = 0.0;
    double mu = 0.5;

    /// Throws std::invalid_argument unless mu > 0 and 3 lambda + 2 mu > 0.
    void validate() const;

    Mat3 apply(const Mat3& m) const;
    /// Inverse map 2 mu M + lambda tr(M) I.
    Mat3 stiffness(const Mat3& m) const;
    /// Action on row-major vec(M) as a 9x9 matrix.
    Mat9 matrix() const;
};

/// Compliance sampled cell-side: the cell index lets coefficients jump across facets.
using ComplianceField = std::function<IsotropicCompliance(const Vec3& x, std::size_t cell)>;

ComplianceField constant_compliance(IsotropicCompliance c);

Mat3 apply_compliance(const ComplianceField& field, const Mat3& m, const Vec3& x, std::size_t cell = 0);

using MatField = std::function<Mat3(const Vec3&)>;

/// Row-wise divergence (div M)_i = sum_j d_j M_ij and row-wise curl, by central differences.
Vec3 fd_div(const MatField& field, const Vec3& x, double step);
Mat3 fd_curl(const MatField& field, const Vec3& x, double step);
/// Fourth-order five-point variants of the above.
Vec3 fd_div4(const MatField& field, const Vec3& x, double step);
Mat3 fd_curl4(const MatField& field, const Vec3& x, double step);

struct IdentityResiduals
{
    double div_skw;  // |div skw M + curl vec skw M|
    double div_xi;   // |div xi M - 2 vec skw curl M|
    double max() const { return std::max(div_skw, div_xi); }
};

/// Maximum residual over the probe points of
///   div skw M = -curl vec skw M   and   div xi M = 2 vec skw curl M.
/// Left sides use second-order central differences, right sides the fourth-order
/// stencil, so the residual measures the O(step^2) truncation of the left side.
IdentityResiduals check_differential_identities(const MatField& field, std::span<const Vec3> probes,
                                                double step = 1e-4);

} // namespace elastica
