#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace stheat {

using SpatialPoint = std::array<double, 2>;

/// Axis-aligned boundary tags. Spatial tags come from the bounding box of the
/// spatial mesh; slab tags mark the t = t_min / t = t_max faces.
enum class BoundaryTag : std::uint8_t { Left, Right, SpaceBottom, SpaceTop, SlabBottom, SlabTop };

std::string_view to_string(BoundaryTag tag);
std::optional<BoundaryTag> parse_boundary_tag(std::string_view name);

struct BoundaryFacet {
  std::size_t element = 0;
  std::size_t local_face = 0;
  BoundaryTag tag = BoundaryTag::Left;

  friend bool operator==(const BoundaryFacet&, const BoundaryFacet&) = default;
};

/// Structured line (dim 1) or quad (dim 2) mesh of the spatial domain.
struct SpatialMesh {
  int dim = 1;
  std::vector<SpatialPoint> nodes;
  std::vector<std::size_t> connectivity;

  std::size_t nodes_per_element() const { return dim == 1 ? 2 : 4; }
  std::size_t element_count() const { return connectivity.size() / nodes_per_element(); }
  std::span<const std::size_t> element(std::size_t e) const {
    return {connectivity.data() + e * nodes_per_element(), nodes_per_element()};
  }
};

SpatialMesh make_interval_mesh(double length, std::size_t nx);
SpatialMesh make_rectangle_mesh(double length, double width, std::size_t nx, std::size_t ny);

/// Boundary faces of a spatial mesh, tagged against its bounding box.
/// Throws if a boundary face is not aligned with one of the box sides.
std::vector<BoundaryFacet> tag_spatial_boundary(const SpatialMesh& mesh);

struct StNode {
  SpatialPoint x{};
  double t = 0.0;

  friend bool operator==(const StNode&, const StNode&) = default;
};

/// One space-time slab: a spatial mesh extruded over normalized time.
///
/// Nodes are stored layer by layer, ascending in t at extrusion, with the
/// same spatial ordering in every layer. `spatial_index[n]` names the column
/// (spatial node) of slab node n; this stays fixed under flipping.
struct SpaceTimeSlab {
  int spatial_dim = 1;
  std::vector<StNode> nodes;
  std::vector<std::size_t> connectivity;
  int time_layers = 1;
  double t_min = 0.0;
  double t_max = 1.0;
  std::vector<std::size_t> bottom_nodes;
  std::vector<std::size_t> top_nodes;
  std::vector<std::size_t> spatial_index;
  std::vector<BoundaryFacet> boundary_facets;

  std::size_t nodes_per_element() const { return std::size_t{1} << (spatial_dim + 1); }
  std::size_t element_count() const { return connectivity.size() / nodes_per_element(); }
  std::size_t node_count() const { return nodes.size(); }
  std::size_t spatial_node_count() const { return bottom_nodes.size(); }
  std::span<const std::size_t> element(std::size_t e) const {
    return {connectivity.data() + e * nodes_per_element(), nodes_per_element()};
  }

  friend bool operator==(const SpaceTimeSlab&, const SpaceTimeSlab&) = default;
};

/// Checks the structural invariants (index ranges, column sizes, t range).
/// Element orientation is checked separately by `check_element_validity`.
void validate(const SpaceTimeSlab& slab);

/// Extrudes a spatial mesh over t in [0, 1] with `time_layers` element layers.
///
/// Layer levels are generated mirror-exact: the level of layer k is
/// `1 - level(L - k)` computed without rounding, so `flip_time` maps the level
/// set onto itself bit for bit.
SpaceTimeSlab extrude(const SpatialMesh& mesh, int time_layers);

/// t* = t_max - t + t_min for every node; bottom/top lists and slab facet
/// tags swap. Connectivity and node indices are untouched.
SpaceTimeSlab flip_time(SpaceTimeSlab slab);

/// Shifts spatial coordinates node by node; t is unchanged.
SpaceTimeSlab displace_nodes(SpaceTimeSlab slab, std::span<const SpatialPoint> displacement);

/// Physical time interval [t_n, t_n1] of one slab.
class SlabInterval {
 public:
  SlabInterval(double t_n, double t_n1);
  /// Keeps `dt` exact instead of recovering it from t_n1 - t_n.
  static SlabInterval from_step(double t_n, double dt);

  double t_n() const { return t_n_; }
  double t_n1() const { return t_n_ + dt_; }
  double dt() const { return dt_; }

  /// Physical time of a normalized slab coordinate t in [t_min, t_max].
  double physical_time(double t, double t_min = 0.0, double t_max = 1.0) const {
    return t_n_ + (t - t_min) / (t_max - t_min) * dt_;
  }

 private:
  SlabInterval() = default;
  double t_n_ = 0.0;
  double dt_ = 0.0;
};

}  // namespace stheat
