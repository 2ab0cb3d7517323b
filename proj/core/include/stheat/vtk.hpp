#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "stheat/mesh.hpp"

namespace stheat {

struct VtkScalarField {
  std::string name;
  std::vector<double> values;  // per slab node
};

struct VtkVectorField {
  std::string name;
  std::vector<SpatialPoint> values;  // per slab node
};

/// Legacy ASCII unstructured grid of one slab. Physical time is the last
/// coordinate: (x, t, 0) for a 1D rod, (x, y, t) for a 2D domain. Cells are
/// VTK quads (9) or hexahedra (12).
void write_vtk(std::ostream& out, const SpaceTimeSlab& slab, const SlabInterval& interval,
               const std::vector<VtkScalarField>& scalars = {}, const std::vector<VtkVectorField>& vectors = {},
               const std::string& title = "stheat slab");

void write_vtk_file(const std::string& path, const SpaceTimeSlab& slab, const SlabInterval& interval,
                    const std::vector<VtkScalarField>& scalars = {}, const std::vector<VtkVectorField>& vectors = {});

}  // namespace stheat
