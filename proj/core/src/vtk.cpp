#include "stheat/vtk.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <fstream>
#include <stdexcept>

namespace stheat {

namespace {

// Our quad is (x, t) bilinear with nodes 0,1 at the lower layer; VTK wants
// the four corners in cyclic order.
constexpr std::size_t kQuadOrder[4] = {0, 1, 3, 2};

}  // namespace

void write_vtk(std::ostream& out, const SpaceTimeSlab& slab, const SlabInterval& interval,
               const std::vector<VtkScalarField>& scalars, const std::vector<VtkVectorField>& vectors,
               const std::string& title) {
  const std::size_t n = slab.node_count();
  for (const auto& f : scalars) {
    if (f.values.size() != n) throw std::invalid_argument("write_vtk: field '" + f.name + "' has wrong length");
  }
  for (const auto& f : vectors) {
    if (f.values.size() != n) throw std::invalid_argument("write_vtk: field '" + f.name + "' has wrong length");
  }
  fmt::print(out, "# vtk DataFile Version 3.0\n{}\nASCII\nDATASET UNSTRUCTURED_GRID\n", title);
  fmt::print(out, "POINTS {} double\n", n);
  for (const auto& node : slab.nodes) {
    const double t = interval.physical_time(node.t, slab.t_min, slab.t_max);
    if (slab.spatial_dim == 1) {
      fmt::print(out, "{:.17g} {:.17g} 0\n", node.x[0], t);
    } else {
      fmt::print(out, "{:.17g} {:.17g} {:.17g}\n", node.x[0], node.x[1], t);
    }
  }
  const std::size_t ne = slab.element_count();
  const std::size_t npe = slab.nodes_per_element();
  fmt::print(out, "CELLS {} {}\n", ne, ne * (npe + 1));
  for (std::size_t e = 0; e < ne; ++e) {
    const auto conn = slab.element(e);
    fmt::print(out, "{}", npe);
    for (std::size_t a = 0; a < npe; ++a) fmt::print(out, " {}", conn[slab.spatial_dim == 1 ? kQuadOrder[a] : a]);
    out << '\n';
  }
  fmt::print(out, "CELL_TYPES {}\n", ne);
  const int type = slab.spatial_dim == 1 ? 9 : 12;
  for (std::size_t e = 0; e < ne; ++e) fmt::print(out, "{}\n", type);
  if (scalars.empty() && vectors.empty()) return;
  fmt::print(out, "POINT_DATA {}\n", n);
  for (const auto& f : scalars) {
    fmt::print(out, "SCALARS {} double 1\nLOOKUP_TABLE default\n", f.name);
    for (double v : f.values) fmt::print(out, "{:.17g}\n", v);
  }
  for (const auto& f : vectors) {
    fmt::print(out, "VECTORS {} double\n", f.name);
    for (const auto& v : f.values) {
      fmt::print(out, "{:.17g} {:.17g} 0\n", v[0], slab.spatial_dim == 1 ? 0.0 : v[1]);
    }
  }
}

void write_vtk_file(const std::string& path, const SpaceTimeSlab& slab, const SlabInterval& interval,
                    const std::vector<VtkScalarField>& scalars, const std::vector<VtkVectorField>& vectors) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_vtk_file: cannot open " + path);
  write_vtk(out, slab, interval, scalars, vectors);
  if (!out) throw std::runtime_error("write_vtk_file: write failed for " + path);
}

}  // namespace stheat
