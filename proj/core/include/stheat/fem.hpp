#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "stheat/mesh.hpp"
#include "stheat/reference_cell.hpp"

namespace stheat {

/// Gauss-Legendre points and weights on [-1, 1], 1 <= order <= 4.
struct GaussRule1d {
  std::vector<double> points;
  std::vector<double> weights;
};
GaussRule1d gauss_legendre(int order);

/// Shape values and reference gradients tabulated at a point set.
struct ShapeTable {
  std::size_t node_count = 0;
  std::size_t point_count = 0;
  int axes = 0;
  std::vector<std::array<double, ReferenceCell::kMaxAxes>> points;
  std::vector<double> weights;
  std::vector<double> values;     // [q * node_count + a]
  std::vector<double> gradients;  // [(q * node_count + a) * kMaxAxes + axis]

  double value(std::size_t q, std::size_t a) const { return values[q * node_count + a]; }
  double gradient(std::size_t q, std::size_t a, int axis) const {
    return gradients[(q * node_count + a) * ReferenceCell::kMaxAxes + static_cast<std::size_t>(axis)];
  }
};

/// Multilinear shape function of local node `a` at reference point `xi`.
double shape_value(const ReferenceCell& cell, std::size_t a, std::span<const double> xi);

/// Multilinear Lagrange element with tensor-product Gauss quadrature on the
/// cell and on each face.
class ReferenceElement {
 public:
  static constexpr int kDefaultOrder = 2;
  static constexpr int kMaxOrder = 4;

  ReferenceElement(int spatial_dim, bool with_time, int order = kDefaultOrder);

  const ReferenceCell& cell() const { return cell_; }
  int order() const { return order_; }
  const ShapeTable& volume() const { return volume_; }
  const ShapeTable& face(std::size_t f) const { return faces_[f]; }

 private:
  ReferenceCell cell_;
  int order_;
  ShapeTable volume_;
  std::vector<ShapeTable> faces_;
};

/// Physical basis data of one element at the volume quadrature points.
///
/// Node coordinates map to (x, t_phys) with t_phys = t_n + t * dt. Spatial
/// derivatives are the spatial rows of J^-T grad_ref, the time derivative is
/// the last row. Weights carry |det J| so mirrored (flipped) elements
/// integrate with the same sign as unflipped ones.
struct MappedBasis {
  std::size_t node_count = 0;
  std::size_t point_count = 0;
  int spatial_dim = 0;
  std::vector<double> values;    // [q * n + a]
  std::vector<double> grad_x;    // [(q * n + a) * spatial_dim + i]
  std::vector<double> dN_dt;     // [q * n + a]
  std::vector<double> weights;   // w_q * |det J|
  std::vector<double> det;       // signed det J

  double value(std::size_t q, std::size_t a) const { return values[q * node_count + a]; }
  double dx(std::size_t q, std::size_t a, int i) const {
    return grad_x[(q * node_count + a) * static_cast<std::size_t>(spatial_dim) + static_cast<std::size_t>(i)];
  }
  double dt(std::size_t q, std::size_t a) const { return dN_dt[q * node_count + a]; }
};

MappedBasis map_element(const SpaceTimeSlab& slab, std::size_t element, const SlabInterval& interval,
                        const ReferenceElement& ref);
void map_element(const SpaceTimeSlab& slab, std::size_t element, const SlabInterval& interval,
                 const ReferenceElement& ref, MappedBasis& out);

/// Shape values and integration weights on one element face.
///
/// Slab faces (constant t) are weighted with the spatial area of the face.
/// Lateral faces are weighted with spatial length (1 in 1D) times the
/// physical duration, i.e. the flux integral over the space-time facet.
struct MappedFace {
  std::size_t node_count = 0;
  std::size_t point_count = 0;
  std::vector<double> values;
  std::vector<double> weights;

  double value(std::size_t q, std::size_t a) const { return values[q * node_count + a]; }
};

MappedFace map_face(const SpaceTimeSlab& slab, std::size_t element, std::size_t local_face,
                    const SlabInterval& interval, const ReferenceElement& ref);

/// Spatial-only counterparts used by the semi-discrete baselines; `dN_dt`
/// stays empty and `ref` must be built with `with_time == false`.
void map_spatial_element(const SpatialMesh& mesh, std::size_t element, const ReferenceElement& ref, MappedBasis& out);
MappedFace map_spatial_face(const SpatialMesh& mesh, std::size_t element, std::size_t local_face,
                            const ReferenceElement& ref);

/// Throws if any element has a vanishing or sign-changing Jacobian.
void check_element_validity(const SpaceTimeSlab& slab, const SlabInterval& interval, const ReferenceElement& ref);

/// Isoparametric interpolation of a node-indexed field at a reference point.
double interpolate(const SpaceTimeSlab& slab, std::span<const double> nodal_values, std::size_t element,
                   std::span<const double> local_point);

}  // namespace stheat
