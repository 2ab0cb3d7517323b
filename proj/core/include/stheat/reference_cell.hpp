#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace stheat {

/// Tensor-product reference cell on [-1, 1]^axes.
///
/// Spatial axes come first and the optional time axis is last. Spatial local
/// nodes follow the usual counter-clockwise convention for quads; a
/// space-time cell stacks two copies of the spatial cell, local index
/// `s + n_spatial * layer` with layer 0 at zeta = -1.
class ReferenceCell {
 public:
  static constexpr int kMaxAxes = 3;

  ReferenceCell(int spatial_dim, bool with_time);

  int spatial_dim() const { return spatial_dim_; }
  bool with_time() const { return with_time_; }
  int axes() const { return spatial_dim_ + (with_time_ ? 1 : 0); }
  std::size_t node_count() const { return coords_.size(); }
  std::size_t face_count() const { return 2 * static_cast<std::size_t>(axes()); }

  /// Reference coordinate (+-1) of local node `a` along `axis`.
  double node_coord(std::size_t a, int axis) const { return coords_[a][axis]; }

  /// Local nodes on face `2 * axis + side` (side 0 is the -1 face), ascending.
  const std::vector<std::size_t>& face_nodes(std::size_t face) const { return faces_[face]; }

  static int face_axis(std::size_t face) { return static_cast<int>(face / 2); }
  static double face_side(std::size_t face) { return face % 2 == 0 ? -1.0 : 1.0; }

 private:
  int spatial_dim_;
  bool with_time_;
  std::vector<std::array<double, kMaxAxes>> coords_;
  std::vector<std::vector<std::size_t>> faces_;
};

}  // namespace stheat
