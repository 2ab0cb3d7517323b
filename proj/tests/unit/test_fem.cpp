#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "stheat/fem.hpp"
#include "test_support.hpp"

using namespace stheat;

namespace {

double shoelace(const SpatialMesh& mesh, std::size_t e) {
  const auto conn = mesh.element(e);
  if (mesh.dim == 1) return std::abs(mesh.nodes[conn[1]][0] - mesh.nodes[conn[0]][0]);
  double a = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& p = mesh.nodes[conn[i]];
    const auto& q = mesh.nodes[conn[(i + 1) % 4]];
    a += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * a;
}

}  // namespace

TEST(Gauss, IntegratesPolynomialsExactly) {
  for (int order = 1; order <= 4; ++order) {
    const auto rule = gauss_legendre(order);
    for (int p = 0; p < 2 * order; ++p) {
      double sum = 0.0;
      for (std::size_t i = 0; i < rule.points.size(); ++i) sum += rule.weights[i] * std::pow(rule.points[i], p);
      const double exact = p % 2 == 1 ? 0.0 : 2.0 / (p + 1);
      EXPECT_NEAR(sum, exact, 1e-15) << "order " << order << " power " << p;
    }
  }
  EXPECT_THROW(gauss_legendre(0), std::invalid_argument);
  EXPECT_THROW(gauss_legendre(5), std::invalid_argument);
}

TEST(ReferenceElementTest, PartitionOfUnity) {
  for (int dim = 1; dim <= 2; ++dim) {
    for (bool with_time : {false, true}) {
      for (int order = 1; order <= 4; ++order) {
        const ReferenceElement ref(dim, with_time, order);
        std::vector<const ShapeTable*> tables{&ref.volume()};
        for (std::size_t f = 0; f < ref.cell().face_count(); ++f) tables.push_back(&ref.face(f));
        for (const ShapeTable* table : tables) {
          for (std::size_t q = 0; q < table->point_count; ++q) {
            double sum = 0.0;
            double grad[3] = {0.0, 0.0, 0.0};
            for (std::size_t a = 0; a < table->node_count; ++a) {
              sum += table->value(q, a);
              for (int axis = 0; axis < table->axes; ++axis) grad[axis] += table->gradient(q, a, axis);
            }
            EXPECT_NEAR(sum, 1.0, 1e-15);
            for (double g : grad) EXPECT_NEAR(g, 0.0, 1e-15);
          }
        }
      }
    }
  }
}

TEST(ReferenceElementTest, ReferenceVolume) {
  const ReferenceElement hex(2, true, 2);
  const auto& w = hex.volume().weights;
  EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 8.0, 1e-14);
  EXPECT_EQ(hex.volume().point_count, 8u);
}

TEST(MapElement, UnitQuad) {
  const SpaceTimeSlab slab = extrude(make_interval_mesh(1.0, 1), 1);
  const ReferenceElement ref(1, true);
  for (double dt : {1.0, 0.1}) {
    const MappedBasis b = map_element(slab, 0, SlabInterval::from_step(0.0, dt), ref);
    for (std::size_t q = 0; q < b.point_count; ++q) {
      const double xi = ref.volume().points[q][0];
      EXPECT_NEAR(std::abs(b.det[q]), 0.25 * dt, 1e-15);
      EXPECT_NEAR(b.weights[q], 0.25 * dt * ref.volume().weights[q], 1e-15);
      // node 0 sits at (x, t) = (0, 0)
      EXPECT_NEAR(b.dt(q, 0), -(1.0 - xi) / 2.0 / dt, 1e-13);
    }
  }
}

TEST(MapElement, FlippedQuadMirrorsTimeDerivative) {
  const SpaceTimeSlab slab = extrude(make_interval_mesh(1.0, 1), 1);
  const SpaceTimeSlab flipped = flip_time(slab);
  const ReferenceElement ref(1, true);
  const auto interval = SlabInterval::from_step(2.0, 0.1);
  const MappedBasis a = map_element(slab, 0, interval, ref);
  const MappedBasis b = map_element(flipped, 0, interval, ref);
  for (std::size_t q = 0; q < a.point_count; ++q) {
    EXPECT_DOUBLE_EQ(std::abs(a.det[q]), std::abs(b.det[q]));
    EXPECT_LT(a.det[q] * b.det[q], 0.0);
    EXPECT_EQ(a.weights[q], b.weights[q]);
    for (std::size_t n = 0; n < 4; ++n) {
      EXPECT_NEAR(b.dt(q, n), -a.dt(q, n), 1e-12);
      EXPECT_NEAR(b.dx(q, n, 0), a.dx(q, n, 0), 1e-12);
    }
  }
}

TEST(MapElement, AxisAlignedDeterminant) {
  const SpaceTimeSlab slab = extrude(make_rectangle_mesh(2.0, 3.0, 4, 2), 5);
  const ReferenceElement ref(2, true);
  const double dt = 0.3;
  const MappedBasis b = map_element(slab, 7, SlabInterval::from_step(0.0, dt), ref);
  const double expected = (0.5 / 2.0) * (1.5 / 2.0) * (0.2 * dt / 2.0);
  for (double d : b.det) EXPECT_NEAR(std::abs(d), expected, 1e-15);
}

TEST(MapElement, SingularJacobianReported) {
  SpaceTimeSlab slab = extrude(make_interval_mesh(1.0, 1), 1);
  for (auto& n : slab.nodes) n.x[0] = 0.5;
  try {
    map_element(slab, 0, SlabInterval::from_step(0.0, 1.0), ReferenceElement(1, true));
    FAIL() << "expected a singular Jacobian error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("element 0"), std::string::npos) << e.what();
  }
}

TEST(MapElement, InvertedElementDetected) {
  SpaceTimeSlab slab = extrude(make_interval_mesh(2.0, 2), 1);
  // Push the middle top node past the right end: element 1 folds over.
  slab.nodes[slab.top_nodes[1]].x[0] = 2.5;
  EXPECT_THROW(check_element_validity(slab, SlabInterval::from_step(0.0, 1.0), ReferenceElement(1, true)),
               std::runtime_error);
}

TEST(MapElement, PatchConsistencyProperty) {
  for (int trial = 0; trial < 40; ++trial) {
    SpaceTimeSlab slab = extrude(gen::random_mesh(), gen::uniform_int(1, 4));
    if (trial % 2 == 1) slab = flip_time(slab);
    const double dt = gen::uniform(1e-3, 2.0);
    const auto interval = SlabInterval::from_step(gen::uniform(0.0, 5.0), dt);
    const double a = gen::uniform(-3, 3), b = gen::uniform(-3, 3), c = gen::uniform(-3, 3);
    const double r = gen::uniform(-3, 3);
    std::vector<double> linear(slab.node_count()), temporal(slab.node_count());
    for (std::size_t n = 0; n < slab.node_count(); ++n) {
      const auto& node = slab.nodes[n];
      linear[n] = a * node.x[0] + (slab.spatial_dim == 2 ? b * node.x[1] : 0.0) + c;
      temporal[n] = r * interval.physical_time(node.t, slab.t_min, slab.t_max);
    }
    const ReferenceElement ref(slab.spatial_dim, true);
    MappedBasis basis;
    for (std::size_t e = 0; e < slab.element_count(); ++e) {
      map_element(slab, e, interval, ref, basis);
      const auto conn = slab.element(e);
      for (std::size_t q = 0; q < basis.point_count; ++q) {
        double gx = 0.0, gy = 0.0, gt_lin = 0.0, gt = 0.0;
        for (std::size_t k = 0; k < conn.size(); ++k) {
          gx += basis.dx(q, k, 0) * linear[conn[k]];
          if (slab.spatial_dim == 2) gy += basis.dx(q, k, 1) * linear[conn[k]];
          gt_lin += basis.dt(q, k) * linear[conn[k]];
          gt += basis.dt(q, k) * temporal[conn[k]];
        }
        EXPECT_NEAR(gx, a, 1e-9 * (1 + std::abs(a)));
        if (slab.spatial_dim == 2) EXPECT_NEAR(gy, b, 1e-9 * (1 + std::abs(b)));
        EXPECT_NEAR(gt_lin, 0.0, 1e-9);
        EXPECT_NEAR(gt, r, 1e-9 * (1 + std::abs(r)));
      }
    }
  }
}

TEST(MapElement, QuadratureVolumeExactness) {
  for (int trial = 0; trial < 40; ++trial) {
    const SpatialMesh mesh = gen::random_mesh();
    const int layers = gen::uniform_int(1, 5);
    SpaceTimeSlab slab = extrude(mesh, layers);
    if (trial % 2 == 1) slab = flip_time(slab);
    const double dt = gen::uniform(1e-3, 3.0);
    const auto interval = SlabInterval::from_step(0.0, dt);
    const ReferenceElement ref(mesh.dim, true, gen::uniform_int(2, 4));
    MappedBasis basis;
    for (std::size_t e = 0; e < slab.element_count(); ++e) {
      map_element(slab, e, interval, ref, basis);
      const double measured = std::accumulate(basis.weights.begin(), basis.weights.end(), 0.0);
      const double exact = shoelace(mesh, e % mesh.element_count()) * dt / layers;
      EXPECT_NEAR(measured, exact, 1e-12 * exact);
    }
  }
}

TEST(MapFace, SlabAndLateralWeights) {
  const SpaceTimeSlab slab = extrude(make_rectangle_mesh(2.0, 1.0, 2, 1), 1);
  const ReferenceElement ref(2, true);
  const auto interval = SlabInterval::from_step(0.0, 0.4);
  auto total = [](const MappedFace& f) { return std::accumulate(f.weights.begin(), f.weights.end(), 0.0); };
  EXPECT_NEAR(total(map_face(slab, 0, 4, interval, ref)), 1.0, 1e-14);  // area of a 1x1 cell
  EXPECT_NEAR(total(map_face(slab, 0, 0, interval, ref)), 1.0 * 0.4, 1e-14);
  const SpaceTimeSlab line = extrude(make_interval_mesh(3.0, 3), 1);
  const ReferenceElement ref1(1, true);
  EXPECT_NEAR(total(map_face(line, 0, 0, interval, ref1)), 0.4, 1e-14);
  EXPECT_NEAR(total(map_face(line, 0, 2, interval, ref1)), 1.0, 1e-14);
}

TEST(Interpolate, ConstantLinearAndCenter) {
  SpaceTimeSlab slab = extrude(gen::jittered_rectangle(1.0, 1.0, 3, 3, 0.3), 1);
  std::vector<double> constant(slab.node_count(), 4.25), xs(slab.node_count()), random(slab.node_count());
  for (std::size_t n = 0; n < slab.node_count(); ++n) {
    xs[n] = slab.nodes[n].x[0];
    random[n] = gen::uniform(-1, 1);
  }
  const double center[3] = {0.0, 0.0, 0.0};
  for (std::size_t e = 0; e < slab.element_count(); ++e) {
    const double p[3] = {gen::uniform(-1, 1), gen::uniform(-1, 1), gen::uniform(-1, 1)};
    EXPECT_NEAR(interpolate(slab, constant, e, p), 4.25, 1e-14);
    // physical x of p: bilinear map of the corners
    double x = 0.0;
    const ReferenceCell cell(2, true);
    for (std::size_t a = 0; a < 8; ++a) x += shape_value(cell, a, p) * slab.nodes[slab.element(e)[a]].x[0];
    EXPECT_NEAR(interpolate(slab, xs, e, p), x, 1e-14);
    double mean = 0.0;
    for (std::size_t n : slab.element(e)) mean += random[n] / 8.0;
    EXPECT_NEAR(interpolate(slab, random, e, center), mean, 1e-14);
  }
}
