#include "stheat/moving_domain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stheat/fem.hpp"

namespace stheat {

DisplacementTrace zero_displacement_trace(const SpaceTimeSlab& slab) {
  return {std::vector<SpatialPoint>(slab.spatial_node_count(), SpatialPoint{0.0, 0.0}), slab.bottom_nodes};
}

DisplacementField solve_displacement_slab(const SpaceTimeSlab& slab, const SlabInterval& interval,
                                          const PrescribedMotion& motion, const DisplacementTrace& trace,
                                          JumpMode mode, const SolverOptions& options) {
  for (double v : motion.velocity) {
    if (!std::isfinite(v)) throw std::invalid_argument("solve_displacement_slab: non-finite velocity");
  }
  DisplacementField field(slab.node_count(), SpatialPoint{0.0, 0.0});
  HeatProblem problem;
  problem.material.alpha = 0.0;
  for (int c = 0; c < slab.spatial_dim; ++c) {
    problem.source = motion.velocity[c];
    SlabTrace component{{}, trace.node_order};
    component.values.reserve(trace.values.size());
    for (const auto& d : trace.values) component.values.push_back(d[c]);
    const SparseSystem system = assemble_slab(slab, interval, problem, component, mode);
    const SolveResult solved = solve_system(system, options);
    for (std::size_t n = 0; n < field.size(); ++n) field[n][c] = solved.x[static_cast<Eigen::Index>(n)];
  }
  return field;
}

SpaceTimeSlab deform_slab(const SpaceTimeSlab& slab, std::span<const SpatialPoint> reference,
                          const DisplacementField& displacement) {
  if (reference.size() != slab.spatial_node_count() || displacement.size() != slab.node_count()) {
    throw std::invalid_argument("deform_slab: size mismatch");
  }
  SpaceTimeSlab out = slab;
  const std::size_t ns = slab.spatial_node_count();
  std::vector<SpatialPoint> top_position(ns);
  for (std::size_t i = 0; i < ns; ++i) {
    const std::size_t node = slab.top_nodes[i];
    for (int d = 0; d < slab.spatial_dim; ++d) top_position[i][d] = reference[i][d] + displacement[node][d];
  }
  std::vector<SpatialPoint> bottom_position(ns);
  for (std::size_t i = 0; i < ns; ++i) bottom_position[slab.spatial_index[slab.bottom_nodes[i]]] = slab.nodes[slab.bottom_nodes[i]].x;

  const double span = slab.t_max - slab.t_min;
  std::vector<char> is_bottom(slab.node_count(), 0);
  for (std::size_t node : slab.bottom_nodes) is_bottom[node] = 1;
  for (std::size_t node = 0; node < slab.node_count(); ++node) {
    if (is_bottom[node]) continue;
    const std::size_t column = slab.spatial_index[node];
    // Fraction of the way from bottom to top, whichever way t points.
    const double bottom_t = slab.nodes[slab.bottom_nodes[column]].t;
    const double s = std::abs(slab.nodes[node].t - bottom_t) / span;
    for (int d = 0; d < slab.spatial_dim; ++d) {
      out.nodes[node].x[d] = s == 1.0 ? top_position[column][d]
                                      : (1.0 - s) * bottom_position[column][d] + s * top_position[column][d];
    }
  }
  return out;
}

MovingStep deform_and_advance(const SpaceTimeSlab& slab, std::span<const SpatialPoint> reference,
                              const DisplacementField& displacement, const PrescribedMotion& motion, JumpMode mode) {
  MovingStep step;
  if (mode == JumpMode::Classical) {
    const bool moving = std::any_of(motion.velocity.begin(), motion.velocity.begin() + slab.spatial_dim,
                                    [](double v) { return v != 0.0; });
    if (moving) {
      throw std::invalid_argument(
          "deform_and_advance: classical jump treatment needs coinciding slab interfaces; "
          "use the flipped mode for moving domains");
    }
    step.deformed = slab;
    step.next = slab;
  } else {
    step.deformed = deform_slab(slab, reference, displacement);
    step.next = flip_time(step.deformed);
    // Collapse each column onto its new bottom node.
    std::vector<SpatialPoint> bottom(step.next.spatial_node_count());
    for (std::size_t node : step.next.bottom_nodes) bottom[step.next.spatial_index[node]] = step.next.nodes[node].x;
    std::vector<char> is_bottom(step.next.node_count(), 0);
    for (std::size_t node : step.next.bottom_nodes) is_bottom[node] = 1;
    for (std::size_t node = 0; node < step.next.node_count(); ++node) {
      if (!is_bottom[node]) step.next.nodes[node].x = bottom[step.next.spatial_index[node]];
    }
  }
  const SpaceTimeSlab& source = mode == JumpMode::Classical ? slab : step.deformed;
  step.next_trace.node_order = source.top_nodes;
  for (std::size_t node : source.top_nodes) step.next_trace.values.push_back(displacement[node]);
  return step;
}

MovingResult run_rigid_motion(const SpatialMesh& mesh, const PrescribedMotion& motion, std::size_t n_slabs,
                              int time_layers, JumpMode mode, const SolverOptions& options,
                              const MovingObserver& observer) {
  if (n_slabs < 1) throw std::invalid_argument("run_rigid_motion: n_slabs must be >= 1");
  if (!(motion.total_time > 0.0)) throw std::invalid_argument("run_rigid_motion: total_time must be positive");
  const double dt = motion.total_time / static_cast<double>(n_slabs);
  const ReferenceElement ref(mesh.dim, true);

  SpaceTimeSlab slab = extrude(mesh, time_layers);
  DisplacementTrace trace = zero_displacement_trace(slab);
  const std::vector<SpatialPoint> reference = mesh.nodes;

  MovingResult result;
  result.times.push_back(0.0);
  for (std::size_t k = 0; k < n_slabs; ++k) {
    const auto interval = SlabInterval::from_step(static_cast<double>(k) * dt, dt);
    const DisplacementField field = solve_displacement_slab(slab, interval, motion, trace, mode, options);
    MovingStep step = deform_and_advance(slab, reference, field, motion, mode);
    check_element_validity(step.deformed, interval, ref);
    for (std::size_t i = 0; i < step.next.spatial_node_count(); ++i) {
      const auto& now = step.next.nodes[step.next.bottom_nodes[i]].x;
      const auto& before = step.deformed.nodes[step.deformed.top_nodes[i]].x;
      for (int d = 0; d < mesh.dim; ++d) {
        result.max_conformity_gap = std::max(result.max_conformity_gap, std::abs(now[d] - before[d]));
      }
    }
    if (observer) observer(k, interval, step.deformed, field);
    result.times.push_back(static_cast<double>(k + 1) * dt);
    if (k + 1 == n_slabs) {
      result.last_deformed = step.deformed;
      result.last_displacement = field;
    }
    slab = std::move(step.next);
    trace = std::move(step.next_trace);
  }
  result.final_displacement.assign(mesh.nodes.size(), SpatialPoint{0.0, 0.0});
  for (std::size_t i = 0; i < trace.values.size(); ++i) {
    result.final_displacement[slab.spatial_index[trace.node_order[i]]] = trace.values[i];
  }
  return result;
}

}  // namespace stheat
