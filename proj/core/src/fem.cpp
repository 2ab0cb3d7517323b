#include "stheat/fem.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace stheat {

namespace {

constexpr int kAxes = ReferenceCell::kMaxAxes;

ShapeTable tabulate(const ReferenceCell& cell, std::vector<std::array<double, kAxes>> points,
                    std::vector<double> weights) {
  ShapeTable table;
  table.node_count = cell.node_count();
  table.point_count = points.size();
  table.axes = cell.axes();
  table.values.resize(table.point_count * table.node_count);
  table.gradients.assign(table.point_count * table.node_count * kAxes, 0.0);
  for (std::size_t q = 0; q < table.point_count; ++q) {
    const auto& xi = points[q];
    for (std::size_t a = 0; a < table.node_count; ++a) {
      std::array<double, kAxes> factor{};
      std::array<double, kAxes> slope{};
      for (int i = 0; i < cell.axes(); ++i) {
        const double s = cell.node_coord(a, i);
        factor[i] = 0.5 * (1.0 + s * xi[i]);
        slope[i] = 0.5 * s;
      }
      double value = 1.0;
      for (int i = 0; i < cell.axes(); ++i) value *= factor[i];
      table.values[q * table.node_count + a] = value;
      for (int i = 0; i < cell.axes(); ++i) {
        double g = slope[i];
        for (int j = 0; j < cell.axes(); ++j) {
          if (j != i) g *= factor[j];
        }
        table.gradients[(q * table.node_count + a) * kAxes + i] = g;
      }
    }
  }
  table.points = std::move(points);
  table.weights = std::move(weights);
  return table;
}

// Tensor rule over the axes listed in `free_axes`; remaining axes fixed.
void tensor_rule(const GaussRule1d& rule, std::span<const int> free_axes, std::array<double, kAxes> fixed,
                 std::vector<std::array<double, kAxes>>& points, std::vector<double>& weights) {
  const std::size_t n = rule.points.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < free_axes.size(); ++i) total *= n;
  for (std::size_t idx = 0; idx < total; ++idx) {
    auto p = fixed;
    double w = 1.0;
    std::size_t rest = idx;
    for (int axis : free_axes) {
      const std::size_t k = rest % n;
      rest /= n;
      p[axis] = rule.points[k];
      w *= rule.weights[k];
    }
    points.push_back(p);
    weights.push_back(w);
  }
}

// (x, t_phys) Jacobian padded to 3x3 with identity rows for unused axes.
Eigen::Matrix3d jacobian(const SpaceTimeSlab& slab, std::span<const std::size_t> conn, const ShapeTable& table,
                         std::size_t q, const SlabInterval& interval, int axes) {
  Eigen::Matrix3d jac = Eigen::Matrix3d::Identity();
  const int d = slab.spatial_dim;
  const double time_scale = interval.dt() / (slab.t_max - slab.t_min);
  for (int r = 0; r < axes; ++r) {
    for (int c = 0; c < axes; ++c) jac(r, c) = 0.0;
  }
  for (std::size_t a = 0; a < conn.size(); ++a) {
    const StNode& node = slab.nodes[conn[a]];
    for (int c = 0; c < axes; ++c) {
      const double g = table.gradient(q, a, c);
      for (int r = 0; r < d; ++r) jac(r, c) += node.x[r] * g;
      jac(d, c) += node.t * time_scale * g;
    }
  }
  return jac;
}

}  // namespace

GaussRule1d gauss_legendre(int order) {
  switch (order) {
    case 1:
      return {{0.0}, {2.0}};
    case 2: {
      const double p = 1.0 / std::sqrt(3.0);
      return {{-p, p}, {1.0, 1.0}};
    }
    case 3: {
      const double p = std::sqrt(0.6);
      return {{-p, 0.0, p}, {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0}};
    }
    case 4: {
      const double inner = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(1.2));
      const double outer = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(1.2));
      const double w_inner = (18.0 + std::sqrt(30.0)) / 36.0;
      const double w_outer = (18.0 - std::sqrt(30.0)) / 36.0;
      return {{-outer, -inner, inner, outer}, {w_outer, w_inner, w_inner, w_outer}};
    }
    default:
      throw std::invalid_argument("gauss_legendre: order must be in [1, 4]");
  }
}

double shape_value(const ReferenceCell& cell, std::size_t a, std::span<const double> xi) {
  double value = 1.0;
  for (int i = 0; i < cell.axes(); ++i) value *= 0.5 * (1.0 + cell.node_coord(a, i) * xi[i]);
  return value;
}

ReferenceElement::ReferenceElement(int spatial_dim, bool with_time, int order)
    : cell_(spatial_dim, with_time), order_(order) {
  if (order < 1 || order > kMaxOrder) throw std::invalid_argument("ReferenceElement: quadrature order must be in [1, 4]");
  const GaussRule1d rule = gauss_legendre(order);
  const int axes = cell_.axes();

  std::vector<int> all_axes;
  for (int i = 0; i < axes; ++i) all_axes.push_back(i);
  std::vector<std::array<double, kAxes>> points;
  std::vector<double> weights;
  tensor_rule(rule, all_axes, {}, points, weights);
  volume_ = tabulate(cell_, std::move(points), std::move(weights));

  for (std::size_t f = 0; f < cell_.face_count(); ++f) {
    std::vector<int> free_axes;
    for (int i = 0; i < axes; ++i) {
      if (i != ReferenceCell::face_axis(f)) free_axes.push_back(i);
    }
    std::array<double, kAxes> fixed{};
    fixed[ReferenceCell::face_axis(f)] = ReferenceCell::face_side(f);
    std::vector<std::array<double, kAxes>> face_points;
    std::vector<double> face_weights;
    if (free_axes.empty()) {
      face_points.push_back(fixed);
      face_weights.push_back(1.0);
    } else {
      tensor_rule(rule, free_axes, fixed, face_points, face_weights);
    }
    faces_.push_back(tabulate(cell_, std::move(face_points), std::move(face_weights)));
  }
}

void map_element(const SpaceTimeSlab& slab, std::size_t element, const SlabInterval& interval,
                 const ReferenceElement& ref, MappedBasis& out) {
  if (element >= slab.element_count()) throw std::out_of_range("map_element: element index out of range");
  const ShapeTable& table = ref.volume();
  const auto conn = slab.element(element);
  const int d = slab.spatial_dim;
  const int axes = d + 1;
  const std::size_t n = table.node_count;
  if (conn.size() != n || ref.cell().spatial_dim() != d || !ref.cell().with_time()) {
    throw std::invalid_argument("map_element: reference element does not match the slab");
  }

  out.node_count = n;
  out.point_count = table.point_count;
  out.spatial_dim = d;
  out.values.assign(table.values.begin(), table.values.end());
  out.grad_x.resize(table.point_count * n * static_cast<std::size_t>(d));
  out.dN_dt.resize(table.point_count * n);
  out.weights.resize(table.point_count);
  out.det.resize(table.point_count);

  for (std::size_t q = 0; q < table.point_count; ++q) {
    const Eigen::Matrix3d jac = jacobian(slab, conn, table, q, interval, axes);
    const double det = jac.determinant();
    if (!(std::abs(det) > 0.0) || !std::isfinite(det)) {
      std::ostringstream msg;
      msg << "map_element: singular Jacobian in element " << element << " at quadrature point " << q << " (";
      for (int i = 0; i < axes; ++i) msg << (i ? ", " : "") << table.points[q][i];
      msg << ")";
      throw std::runtime_error(msg.str());
    }
    const Eigen::Matrix3d inv_t = jac.inverse().transpose();
    out.det[q] = det;
    out.weights[q] = table.weights[q] * std::abs(det);
    for (std::size_t a = 0; a < n; ++a) {
      const Eigen::Vector3d g_ref(table.gradient(q, a, 0), axes > 1 ? table.gradient(q, a, 1) : 0.0,
                                  axes > 2 ? table.gradient(q, a, 2) : 0.0);
      const Eigen::Vector3d g = inv_t * g_ref;
      for (int i = 0; i < d; ++i) out.grad_x[(q * n + a) * static_cast<std::size_t>(d) + static_cast<std::size_t>(i)] = g[i];
      out.dN_dt[q * n + a] = g[d];
    }
  }
}

MappedBasis map_element(const SpaceTimeSlab& slab, std::size_t element, const SlabInterval& interval,
                        const ReferenceElement& ref) {
  MappedBasis basis;
  map_element(slab, element, interval, ref, basis);
  return basis;
}

MappedFace map_face(const SpaceTimeSlab& slab, std::size_t element, std::size_t local_face,
                    const SlabInterval& interval, const ReferenceElement& ref) {
  if (element >= slab.element_count()) throw std::out_of_range("map_face: element index out of range");
  if (local_face >= ref.cell().face_count()) throw std::out_of_range("map_face: face index out of range");
  const ShapeTable& table = ref.face(local_face);
  const auto conn = slab.element(element);
  const int d = slab.spatial_dim;
  const int axes = d + 1;
  const int normal_axis = ReferenceCell::face_axis(local_face);

  MappedFace face;
  face.node_count = table.node_count;
  face.point_count = table.point_count;
  face.values = table.values;
  face.weights.resize(table.point_count);
  for (std::size_t q = 0; q < table.point_count; ++q) {
    const Eigen::Matrix3d jac = jacobian(slab, conn, table, q, interval, axes);
    double measure = 1.0;
    if (normal_axis == d) {
      // Constant-t face: spatial area element of the remaining spatial axes.
      measure = std::abs(jac.topLeftCorner(d, d).determinant());
    } else {
      for (int c = 0; c < d; ++c) {
        if (c == normal_axis) continue;
        measure *= jac.col(c).head(d).norm();
      }
      measure *= std::abs(jac(d, d));
    }
    face.weights[q] = table.weights[q] * measure;
  }
  return face;
}

void map_spatial_element(const SpatialMesh& mesh, std::size_t element, const ReferenceElement& ref, MappedBasis& out) {
  if (element >= mesh.element_count()) throw std::out_of_range("map_spatial_element: element index out of range");
  if (ref.cell().with_time() || ref.cell().spatial_dim() != mesh.dim) {
    throw std::invalid_argument("map_spatial_element: reference element does not match the mesh");
  }
  const ShapeTable& table = ref.volume();
  const auto conn = mesh.element(element);
  const int d = mesh.dim;
  const std::size_t n = table.node_count;
  out.node_count = n;
  out.point_count = table.point_count;
  out.spatial_dim = d;
  out.values.assign(table.values.begin(), table.values.end());
  out.grad_x.resize(table.point_count * n * static_cast<std::size_t>(d));
  out.dN_dt.clear();
  out.weights.resize(table.point_count);
  out.det.resize(table.point_count);
  for (std::size_t q = 0; q < table.point_count; ++q) {
    Eigen::Matrix2d jac = Eigen::Matrix2d::Identity();
    jac.topLeftCorner(d, d).setZero();
    for (std::size_t a = 0; a < n; ++a) {
      for (int c = 0; c < d; ++c) {
        for (int r = 0; r < d; ++r) jac(r, c) += mesh.nodes[conn[a]][r] * table.gradient(q, a, c);
      }
    }
    const double det = jac.determinant();
    if (!(std::abs(det) > 0.0)) {
      throw std::runtime_error("map_spatial_element: singular Jacobian in element " + std::to_string(element));
    }
    const Eigen::Matrix2d inv_t = jac.inverse().transpose();
    out.det[q] = det;
    out.weights[q] = table.weights[q] * std::abs(det);
    for (std::size_t a = 0; a < n; ++a) {
      const Eigen::Vector2d g = inv_t * Eigen::Vector2d(table.gradient(q, a, 0), d > 1 ? table.gradient(q, a, 1) : 0.0);
      for (int i = 0; i < d; ++i) out.grad_x[(q * n + a) * static_cast<std::size_t>(d) + static_cast<std::size_t>(i)] = g[i];
    }
  }
}

MappedFace map_spatial_face(const SpatialMesh& mesh, std::size_t element, std::size_t local_face,
                            const ReferenceElement& ref) {
  if (element >= mesh.element_count()) throw std::out_of_range("map_spatial_face: element index out of range");
  if (local_face >= ref.cell().face_count()) throw std::out_of_range("map_spatial_face: face index out of range");
  const ShapeTable& table = ref.face(local_face);
  const auto conn = mesh.element(element);
  const int d = mesh.dim;
  MappedFace face;
  face.node_count = table.node_count;
  face.point_count = table.point_count;
  face.values = table.values;
  face.weights.resize(table.point_count);
  for (std::size_t q = 0; q < table.point_count; ++q) {
    double measure = 1.0;
    if (d == 2) {
      // Tangent along the reference axis lying in the face.
      const int axis = ReferenceCell::face_axis(local_face) == 0 ? 1 : 0;
      Eigen::Vector2d tangent = Eigen::Vector2d::Zero();
      for (std::size_t a = 0; a < table.node_count; ++a) {
        tangent += table.gradient(q, a, axis) * Eigen::Vector2d(mesh.nodes[conn[a]][0], mesh.nodes[conn[a]][1]);
      }
      measure = tangent.norm();
    }
    face.weights[q] = table.weights[q] * measure;
  }
  return face;
}

void check_element_validity(const SpaceTimeSlab& slab, const SlabInterval& interval, const ReferenceElement& ref) {
  MappedBasis basis;
  for (std::size_t e = 0; e < slab.element_count(); ++e) {
    map_element(slab, e, interval, ref, basis);
    const bool positive = basis.det.front() > 0.0;
    for (std::size_t q = 0; q < basis.point_count; ++q) {
      if ((basis.det[q] > 0.0) != positive) {
        throw std::runtime_error("check_element_validity: element " + std::to_string(e) +
                                 " is inverted (Jacobian changes sign at point " + std::to_string(q) + ")");
      }
    }
  }
}

double interpolate(const SpaceTimeSlab& slab, std::span<const double> nodal_values, std::size_t element,
                   std::span<const double> local_point) {
  if (element >= slab.element_count()) throw std::out_of_range("interpolate: element index out of range");
  const ReferenceCell cell(slab.spatial_dim, true);
  if (local_point.size() < static_cast<std::size_t>(cell.axes())) {
    throw std::invalid_argument("interpolate: local point has too few coordinates");
  }
  const auto conn = slab.element(element);
  double value = 0.0;
  for (std::size_t a = 0; a < conn.size(); ++a) value += nodal_values[conn[a]] * shape_value(cell, a, local_point);
  return value;
}

}  // namespace stheat
