#include "stheat/reference_cell.hpp"

#include <stdexcept>

namespace stheat {

ReferenceCell::ReferenceCell(int spatial_dim, bool with_time)
    : spatial_dim_(spatial_dim), with_time_(with_time) {
  if (spatial_dim < 1 || spatial_dim > 2) {
    throw std::invalid_argument("ReferenceCell: spatial_dim must be 1 or 2");
  }
  std::vector<std::array<double, kMaxAxes>> spatial;
  if (spatial_dim == 1) {
    spatial = {{-1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
  } else {
    spatial = {{-1.0, -1.0, 0.0}, {1.0, -1.0, 0.0}, {1.0, 1.0, 0.0}, {-1.0, 1.0, 0.0}};
  }
  const int layers = with_time ? 2 : 1;
  for (int layer = 0; layer < layers; ++layer) {
    for (auto c : spatial) {
      if (with_time) c[spatial_dim] = layer == 0 ? -1.0 : 1.0;
      coords_.push_back(c);
    }
  }
  faces_.resize(face_count());
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    for (std::size_t a = 0; a < coords_.size(); ++a) {
      if (coords_[a][face_axis(f)] == face_side(f)) faces_[f].push_back(a);
    }
  }
}

}  // namespace stheat
