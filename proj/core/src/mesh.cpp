#include "stheat/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>

#include "stheat/reference_cell.hpp"

namespace stheat {

namespace {

constexpr std::array<std::string_view, 6> kTagNames = {"left",      "right",       "space_bottom",
                                                       "space_top", "slab_bottom", "slab_top"};

double mirror_level(int k, int layers) {
  // Upper-half levels are rounded quotients; lower-half levels are 1 - upper,
  // which is exact (Sterbenz), and so is 1 - lower.
  if (2 * k >= layers) return static_cast<double>(k) / layers;
  return 1.0 - static_cast<double>(layers - k) / layers;
}

}  // namespace

std::string_view to_string(BoundaryTag tag) { return kTagNames[static_cast<std::size_t>(tag)]; }

std::optional<BoundaryTag> parse_boundary_tag(std::string_view name) {
  for (std::size_t i = 0; i < kTagNames.size(); ++i) {
    if (kTagNames[i] == name) return static_cast<BoundaryTag>(i);
  }
  return std::nullopt;
}

SpatialMesh make_interval_mesh(double length, std::size_t nx) {
  if (nx == 0 || !(length > 0.0)) throw std::invalid_argument("make_interval_mesh: empty mesh");
  SpatialMesh mesh;
  mesh.dim = 1;
  mesh.nodes.reserve(nx + 1);
  for (std::size_t i = 0; i <= nx; ++i) {
    mesh.nodes.push_back({length * static_cast<double>(i) / static_cast<double>(nx), 0.0});
  }
  mesh.connectivity.reserve(2 * nx);
  for (std::size_t i = 0; i < nx; ++i) {
    mesh.connectivity.push_back(i);
    mesh.connectivity.push_back(i + 1);
  }
  return mesh;
}

SpatialMesh make_rectangle_mesh(double length, double width, std::size_t nx, std::size_t ny) {
  if (nx == 0 || ny == 0 || !(length > 0.0) || !(width > 0.0)) {
    throw std::invalid_argument("make_rectangle_mesh: empty mesh");
  }
  SpatialMesh mesh;
  mesh.dim = 2;
  const std::size_t row = nx + 1;
  mesh.nodes.reserve(row * (ny + 1));
  for (std::size_t j = 0; j <= ny; ++j) {
    const double y = width * static_cast<double>(j) / static_cast<double>(ny);
    for (std::size_t i = 0; i <= nx; ++i) {
      mesh.nodes.push_back({length * static_cast<double>(i) / static_cast<double>(nx), y});
    }
  }
  mesh.connectivity.reserve(4 * nx * ny);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t n0 = j * row + i;
      for (std::size_t n : {n0, n0 + 1, n0 + row + 1, n0 + row}) mesh.connectivity.push_back(n);
    }
  }
  return mesh;
}

std::vector<BoundaryFacet> tag_spatial_boundary(const SpatialMesh& mesh) {
  if (mesh.nodes.empty() || mesh.connectivity.empty()) {
    throw std::invalid_argument("tag_spatial_boundary: empty mesh");
  }
  const ReferenceCell cell(mesh.dim, false);

  std::array<double, 2> lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
  std::array<double, 2> hi{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
  for (const auto& p : mesh.nodes) {
    for (int d = 0; d < mesh.dim; ++d) {
      lo[d] = std::min(lo[d], p[d]);
      hi[d] = std::max(hi[d], p[d]);
    }
  }

  // A face is on the boundary iff exactly one element owns it.
  std::map<std::vector<std::size_t>, std::vector<BoundaryFacet>> owners;
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const auto conn = mesh.element(e);
    for (std::size_t f = 0; f < cell.face_count(); ++f) {
      std::vector<std::size_t> key;
      for (std::size_t a : cell.face_nodes(f)) key.push_back(conn[a]);
      std::sort(key.begin(), key.end());
      owners[key].push_back({e, f, BoundaryTag::Left});
    }
  }

  const auto on_plane = [&](const std::vector<std::size_t>& key, int d, double value) {
    const double tol = 1e-12 * std::max(1.0, hi[d] - lo[d]);
    return std::all_of(key.begin(), key.end(),
                       [&](std::size_t n) { return std::abs(mesh.nodes[n][d] - value) <= tol; });
  };

  std::vector<BoundaryFacet> facets;
  for (const auto& [key, list] : owners) {
    if (list.size() != 1) continue;
    BoundaryFacet facet = list.front();
    if (on_plane(key, 0, lo[0])) {
      facet.tag = BoundaryTag::Left;
    } else if (on_plane(key, 0, hi[0])) {
      facet.tag = BoundaryTag::Right;
    } else if (mesh.dim == 2 && on_plane(key, 1, lo[1])) {
      facet.tag = BoundaryTag::SpaceBottom;
    } else if (mesh.dim == 2 && on_plane(key, 1, hi[1])) {
      facet.tag = BoundaryTag::SpaceTop;
    } else {
      throw std::invalid_argument("tag_spatial_boundary: boundary face of element " +
                                  std::to_string(facet.element) + " is not axis aligned");
    }
    facets.push_back(facet);
  }
  std::sort(facets.begin(), facets.end(), [](const BoundaryFacet& a, const BoundaryFacet& b) {
    return std::tie(a.element, a.local_face) < std::tie(b.element, b.local_face);
  });
  return facets;
}

void validate(const SpaceTimeSlab& slab) {
  if (slab.spatial_dim < 1 || slab.spatial_dim > 2) throw std::invalid_argument("slab: spatial_dim must be 1 or 2");
  if (slab.time_layers < 1) throw std::invalid_argument("slab: time_layers must be >= 1");
  if (slab.nodes.empty() || slab.connectivity.empty()) throw std::invalid_argument("slab: empty mesh");
  if (slab.connectivity.size() % slab.nodes_per_element() != 0) {
    throw std::invalid_argument("slab: connectivity length is not a multiple of the element size");
  }
  const std::size_t n = slab.node_count();
  for (std::size_t idx : slab.connectivity) {
    if (idx >= n) throw std::invalid_argument("slab: connectivity index out of range");
  }
  if (slab.bottom_nodes.size() != slab.top_nodes.size() || slab.bottom_nodes.empty()) {
    throw std::invalid_argument("slab: bottom/top node lists must be non-empty and of equal size");
  }
  if (slab.spatial_index.size() != n) throw std::invalid_argument("slab: spatial_index size mismatch");
  const std::size_t ns = slab.spatial_node_count();
  std::vector<int> column_size(ns, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = slab.nodes[i].t;
    if (!(t >= slab.t_min && t <= slab.t_max)) throw std::invalid_argument("slab: node t outside [t_min, t_max]");
    if (slab.spatial_index[i] >= ns) throw std::invalid_argument("slab: spatial_index out of range");
    ++column_size[slab.spatial_index[i]];
  }
  for (int c : column_size) {
    if (c != slab.time_layers + 1) throw std::invalid_argument("slab: column does not hold time_layers + 1 nodes");
  }
  for (std::size_t i = 0; i < ns; ++i) {
    if (slab.bottom_nodes[i] >= n || slab.top_nodes[i] >= n) throw std::invalid_argument("slab: trace index out of range");
    if (slab.nodes[slab.bottom_nodes[i]].t != slab.t_min || slab.nodes[slab.top_nodes[i]].t != slab.t_max) {
      throw std::invalid_argument("slab: bottom/top nodes not at t_min/t_max");
    }
  }
}

SpaceTimeSlab extrude(const SpatialMesh& mesh, int time_layers) {
  if (time_layers < 1) throw std::invalid_argument("extrude: time_layers must be >= 1");
  if (mesh.nodes.empty() || mesh.connectivity.empty()) throw std::invalid_argument("extrude: empty mesh");
  const auto spatial_facets = tag_spatial_boundary(mesh);

  SpaceTimeSlab slab;
  slab.spatial_dim = mesh.dim;
  slab.time_layers = time_layers;
  const std::size_t ns = mesh.nodes.size();
  const std::size_t layers = static_cast<std::size_t>(time_layers);

  slab.nodes.reserve(ns * (layers + 1));
  slab.spatial_index.reserve(ns * (layers + 1));
  for (std::size_t k = 0; k <= layers; ++k) {
    const double t = mirror_level(static_cast<int>(k), time_layers);
    for (std::size_t s = 0; s < ns; ++s) {
      slab.nodes.push_back({mesh.nodes[s], t});
      slab.spatial_index.push_back(s);
    }
  }
  for (std::size_t s = 0; s < ns; ++s) {
    slab.bottom_nodes.push_back(s);
    slab.top_nodes.push_back(layers * ns + s);
  }

  const std::size_t nse = mesh.element_count();
  slab.connectivity.reserve(nse * layers * 2 * mesh.nodes_per_element());
  for (std::size_t k = 0; k < layers; ++k) {
    for (std::size_t e = 0; e < nse; ++e) {
      const auto conn = mesh.element(e);
      for (std::size_t a : conn) slab.connectivity.push_back(k * ns + a);
      for (std::size_t a : conn) slab.connectivity.push_back((k + 1) * ns + a);
    }
  }

  const std::size_t time_axis = static_cast<std::size_t>(mesh.dim);
  for (std::size_t k = 0; k < layers; ++k) {
    for (const auto& f : spatial_facets) slab.boundary_facets.push_back({k * nse + f.element, f.local_face, f.tag});
  }
  for (std::size_t e = 0; e < nse; ++e) {
    slab.boundary_facets.push_back({e, 2 * time_axis, BoundaryTag::SlabBottom});
  }
  for (std::size_t e = 0; e < nse; ++e) {
    slab.boundary_facets.push_back({(layers - 1) * nse + e, 2 * time_axis + 1, BoundaryTag::SlabTop});
  }
  return slab;
}

SpaceTimeSlab flip_time(SpaceTimeSlab slab) {
  for (auto& node : slab.nodes) node.t = slab.t_max - node.t + slab.t_min;
  std::swap(slab.bottom_nodes, slab.top_nodes);
  for (auto& facet : slab.boundary_facets) {
    if (facet.tag == BoundaryTag::SlabBottom) {
      facet.tag = BoundaryTag::SlabTop;
    } else if (facet.tag == BoundaryTag::SlabTop) {
      facet.tag = BoundaryTag::SlabBottom;
    }
  }
  return slab;
}

SpaceTimeSlab displace_nodes(SpaceTimeSlab slab, std::span<const SpatialPoint> displacement) {
  if (displacement.size() != slab.nodes.size()) {
    throw std::invalid_argument("displace_nodes: expected " + std::to_string(slab.nodes.size()) +
                                " displacement vectors, got " + std::to_string(displacement.size()));
  }
  for (std::size_t i = 0; i < slab.nodes.size(); ++i) {
    for (int d = 0; d < slab.spatial_dim; ++d) slab.nodes[i].x[d] += displacement[i][d];
  }
  return slab;
}

SlabInterval::SlabInterval(double t_n, double t_n1) : t_n_(t_n), dt_(t_n1 - t_n) {
  if (!(dt_ > 0.0)) throw std::invalid_argument("SlabInterval: dt must be positive");
}

SlabInterval SlabInterval::from_step(double t_n, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("SlabInterval: dt must be positive");
  SlabInterval interval;
  interval.t_n_ = t_n;
  interval.dt_ = dt;
  return interval;
}

}  // namespace stheat
