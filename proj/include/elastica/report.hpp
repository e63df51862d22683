#pragma once

#include "elastica/verification.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace elastica {

/// Scientific notation, 12 significant digits.
std::string format_number(double x);

void write_rate_csv(std::ostream& out, const ConvergenceStudy& study);
void write_infsup_csv(std::ostream& out, const std::vector<InfSupReport>& reports);

/// Cell values of u_h: cell, centroid, u.
void write_displacement_csv(std::ostream& out, const Spaces& spaces, const Solution& solution);
/// Facet averages of sigma_h n (n = facet_normal): facet, centroid, traction.
void write_traction_csv(std::ostream& out, const Spaces& spaces, const Solution& solution);
/// vec p_h at edge midpoints: edge, midpoint, w (from the first adjacent cell), w . t.
void write_multiplier_csv(std::ostream& out, const Spaces& spaces, const Solution& solution);
/// Legacy ASCII VTK unstructured grid with u_h as cell data.
void write_vtk(std::ostream& out, const SimplicialMesh& mesh, const Vector& u);

} // namespace elastica
