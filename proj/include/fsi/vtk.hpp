#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "fsi/fem.hpp"

namespace fsi {

/// VTK legacy ASCII snapshot of finite-element fields as point data. With
/// refined = false, values are written at the mesh vertices only; with
/// refined = true, each triangle is split into four through the edge
/// midpoints so P2 fields keep their edge dofs (P1 fields are exact there
/// too, being linear).
void write_vtk_snapshot(std::ostream& out, const Mesh& mesh,
                        const std::vector<std::pair<std::string, const FEFunction*>>& fields,
                        bool refined = false);

}  // namespace fsi
