#pragma once

#include <functional>
#include <vector>

#include "stheat/heat_solver.hpp"
#include "stheat/mesh.hpp"

namespace stheat {

/// Constant translation velocity of the whole body.
struct PrescribedMotion {
  SpatialPoint velocity{0.1, 0.1};
  double total_time = 10.0;
};

/// Accumulated displacement on one slab interface; `values[i]` belongs to
/// slab node `node_order[i]` (spatial column i), as for SlabTrace.
struct DisplacementTrace {
  std::vector<SpatialPoint> values;
  std::vector<std::size_t> node_order;
};

/// Displacement per slab node.
using DisplacementField = std::vector<SpatialPoint>;

DisplacementTrace zero_displacement_trace(const SpaceTimeSlab& slab);

/// Solves dd/dt = v componentwise with the slab assembly (alpha = 0, source
/// v_c), the jump term carrying the accumulated displacement.
DisplacementField solve_displacement_slab(const SpaceTimeSlab& slab, const SlabInterval& interval,
                                          const PrescribedMotion& motion, const DisplacementTrace& trace,
                                          JumpMode mode, const SolverOptions& options = {});

/// Moves the slab top to `reference + displacement` and places interior
/// layers linearly in t between bottom and top. The bottom is left untouched.
SpaceTimeSlab deform_slab(const SpaceTimeSlab& slab, std::span<const SpatialPoint> reference,
                          const DisplacementField& displacement);

struct MovingStep {
  SpaceTimeSlab deformed;  // current slab after deformation
  SpaceTimeSlab next;      // slab for the next interval
  DisplacementTrace next_trace;
};

/// Flipped mode: deforms, flips, then collapses every column onto its new
/// bottom position, so the new bottom coincides with the deformed top node
/// for node. Classical mode keeps the geometry and throws unless the motion
/// is zero.
MovingStep deform_and_advance(const SpaceTimeSlab& slab, std::span<const SpatialPoint> reference,
                              const DisplacementField& displacement, const PrescribedMotion& motion, JumpMode mode);

struct MovingResult {
  std::vector<SpatialPoint> final_displacement;  // per spatial node
  std::vector<double> times;
  double max_conformity_gap = 0.0;  // max |new bottom - old deformed top| over all interfaces
  SpaceTimeSlab last_deformed;
  DisplacementField last_displacement;
};

using MovingObserver =
    std::function<void(std::size_t step, const SlabInterval&, const SpaceTimeSlab& deformed, const DisplacementField&)>;

/// Marches the rigid-body case over `n_slabs` equal slabs of the total time.
/// Every deformed slab is checked for inverted elements.
MovingResult run_rigid_motion(const SpatialMesh& mesh, const PrescribedMotion& motion, std::size_t n_slabs,
                              int time_layers, JumpMode mode, const SolverOptions& options = {},
                              const MovingObserver& observer = {});

}  // namespace stheat
