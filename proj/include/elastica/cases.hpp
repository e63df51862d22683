#pragma once

#include "elastica/assembly.hpp"

#include <string>
#include <vector>

namespace elastica {

/// Closed-form solution of div sigma = g, A sigma = sym grad u, p = skw grad u
/// on the unit cube with u = u_D on the boundary.
struct ManufacturedCase
{
    std::string name;
    double lambda = 1.0;
    double mu = 1.0;

    VecField u;
    MatField grad_u;
    MatField sigma;
    MatField p;
    VecField g;
    VecField u_D;  // empty when the boundary datum vanishes

    ComplianceField compliance;
    bool variable_compliance = false;

    /// Axial vector of p.
    Vec3 w(const Vec3& x) const;
    ProblemSpec problem() const;
};

/// One of zero, linear_patch, trig, trig_varcoef; throws std::invalid_argument otherwise.
/// lambda and mu scale the material (trig_varcoef: mu(x) = mu (1 + sin(pi x1) / 2)).
ManufacturedCase manufactured_case(const std::string& name, double lambda = 1.0, double mu = 1.0);

const std::vector<std::string>& manufactured_case_names();

} // namespace elastica
