#include <gtest/gtest.h>

#include <cmath>

#include "stheat/fem.hpp"
#include "stheat/moving_domain.hpp"

using namespace stheat;

namespace {

PrescribedMotion paper_motion() { return {{0.1, 0.1}, 10.0}; }

}  // namespace

TEST(Displacement, ZeroVelocityKeepsTrace) {
  const SpaceTimeSlab slab = extrude(make_rectangle_mesh(1.0, 1.0, 2, 2), 2);
  DisplacementTrace trace = zero_displacement_trace(slab);
  for (std::size_t i = 0; i < trace.values.size(); ++i) trace.values[i] = {0.1 * i, -0.2 * i};
  const auto field = solve_displacement_slab(slab, SlabInterval::from_step(0, 1.0), {{0.0, 0.0}, 1.0}, trace,
                                             JumpMode::Flipped);
  for (std::size_t n = 0; n < slab.node_count(); ++n) {
    const auto& expected = trace.values[slab.spatial_index[n]];
    EXPECT_NEAR(field[n][0], expected[0], 1e-14);
    EXPECT_NEAR(field[n][1], expected[1], 1e-14);
  }
}

TEST(Displacement, OneSlabMovesOneOne) {
  const SpaceTimeSlab slab = extrude(make_rectangle_mesh(1.0, 1.0, 1, 1), 1);
  const auto field = solve_displacement_slab(slab, SlabInterval::from_step(0, 10.0), paper_motion(),
                                             zero_displacement_trace(slab), JumpMode::Flipped);
  for (std::size_t n : slab.top_nodes) {
    EXPECT_NEAR(field[n][0], 1.0, 1e-12);
    EXPECT_NEAR(field[n][1], 1.0, 1e-12);
    EXPECT_NEAR(std::hypot(field[n][0], field[n][1]), std::sqrt(2.0), 1e-12);
  }
  for (std::size_t n : slab.bottom_nodes) EXPECT_NEAR(std::hypot(field[n][0], field[n][1]), 0.0, 1e-12);
}

TEST(RigidMotion, StepCountIndependence) {
  const SpatialMesh mesh = make_rectangle_mesh(1.0, 1.0, 3, 3);
  const auto one = run_rigid_motion(mesh, paper_motion(), 1, 1, JumpMode::Flipped);
  const auto ten = run_rigid_motion(mesh, paper_motion(), 10, 1, JumpMode::Flipped);
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
    EXPECT_NEAR(one.final_displacement[i][0], ten.final_displacement[i][0], 1e-10);
    EXPECT_NEAR(one.final_displacement[i][1], ten.final_displacement[i][1], 1e-10);
    EXPECT_NEAR(std::hypot(ten.final_displacement[i][0], ten.final_displacement[i][1]), std::sqrt(2.0), 1e-10);
  }
}

TEST(RigidMotion, ExactForAnyPartition) {
  const SpatialMesh mesh = make_rectangle_mesh(1.0, 1.0, 2, 2);
  for (std::size_t slabs : {1u, 2u, 3u, 7u}) {
    for (int layers : {1, 2, 3}) {
      const PrescribedMotion motion{{0.3, -0.05}, 4.0};
      const auto r = run_rigid_motion(mesh, motion, slabs, layers, JumpMode::Flipped);
      for (const auto& d : r.final_displacement) {
        EXPECT_NEAR(d[0], 1.2, 1e-10);
        EXPECT_NEAR(d[1], -0.2, 1e-10);
      }
      EXPECT_EQ(r.max_conformity_gap, 0.0);
    }
  }
}

TEST(RigidMotion, DeformedSlabFollowsMotion) {
  const SpatialMesh mesh = make_rectangle_mesh(1.0, 1.0, 2, 2);
  const auto r = run_rigid_motion(mesh, paper_motion(), 10, 2, JumpMode::Flipped);
  const SpaceTimeSlab& last = r.last_deformed;
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
    const auto& top = last.nodes[last.top_nodes[i]].x;
    const auto& bottom = last.nodes[last.bottom_nodes[i]].x;
    EXPECT_NEAR(top[0], mesh.nodes[i][0] + 1.0, 1e-10);
    EXPECT_NEAR(bottom[0], mesh.nodes[i][0] + 0.9, 1e-10);
  }
  EXPECT_NO_THROW(check_element_validity(last, SlabInterval::from_step(9.0, 1.0), ReferenceElement(2, true)));
}

TEST(DeformAndAdvance, NewBottomEqualsOldTop) {
  const SpatialMesh mesh = make_rectangle_mesh(1.0, 1.0, 3, 2);
  const SpaceTimeSlab slab = extrude(mesh, 2);
  const auto field = solve_displacement_slab(slab, SlabInterval::from_step(0, 1.0), paper_motion(),
                                             zero_displacement_trace(slab), JumpMode::Flipped);
  const auto step = deform_and_advance(slab, mesh.nodes, field, paper_motion(), JumpMode::Flipped);
  for (std::size_t i = 0; i < slab.spatial_node_count(); ++i) {
    EXPECT_EQ(step.next.bottom_nodes[i], step.deformed.top_nodes[i]);
    EXPECT_EQ(step.next.nodes[step.next.bottom_nodes[i]].x, step.deformed.nodes[step.deformed.top_nodes[i]].x);
  }
  EXPECT_EQ(step.next_trace.node_order, step.next.bottom_nodes);
}

TEST(DeformAndAdvance, ZeroMotionKeepsGeometry) {
  const SpatialMesh mesh = make_rectangle_mesh(1.0, 1.0, 2, 2);
  const SpaceTimeSlab slab = extrude(mesh, 1);
  const PrescribedMotion still{{0.0, 0.0}, 1.0};
  const auto field = solve_displacement_slab(slab, SlabInterval::from_step(0, 1.0), still,
                                             zero_displacement_trace(slab), JumpMode::Flipped);
  for (auto mode : {JumpMode::Flipped, JumpMode::Classical}) {
    const auto step = deform_and_advance(slab, mesh.nodes, field, still, mode);
    for (std::size_t n = 0; n < slab.node_count(); ++n) EXPECT_EQ(step.next.nodes[n].x, slab.nodes[n].x);
  }
}

TEST(DeformAndAdvance, ClassicalModeRejectsMotion) {
  const SpatialMesh mesh = make_rectangle_mesh(1.0, 1.0, 1, 1);
  const SpaceTimeSlab slab = extrude(mesh, 1);
  const DisplacementField field(slab.node_count(), SpatialPoint{0.0, 0.0});
  EXPECT_THROW(deform_and_advance(slab, mesh.nodes, field, paper_motion(), JumpMode::Classical), std::invalid_argument);
  EXPECT_THROW(run_rigid_motion(mesh, paper_motion(), 2, 1, JumpMode::Classical), std::invalid_argument);
}

TEST(DeformSlab, SizeMismatch) {
  const SpatialMesh mesh = make_rectangle_mesh(1.0, 1.0, 1, 1);
  const SpaceTimeSlab slab = extrude(mesh, 1);
  EXPECT_THROW(deform_slab(slab, mesh.nodes, DisplacementField(3)), std::invalid_argument);
}
