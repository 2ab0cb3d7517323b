#pragma once

#include <Eigen/Sparse>
#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "stheat/fem.hpp"
#include "stheat/mesh.hpp"

namespace stheat {

struct MaterialParams {
  double alpha = 1.0;  // thermal diffusivity, m^2/s; 0 reduces to pure transport in t
};

enum class BcKind { Dirichlet, NeumannFlux, Adiabatic };

/// One condition per spatial boundary tag. Untagged sides are adiabatic.
/// Flux is the inflow density q: the load is +q * w on the facet.
struct BoundaryCondition {
  BoundaryTag tag = BoundaryTag::Left;
  BcKind kind = BcKind::Adiabatic;
  double value = 0.0;

  static BoundaryCondition dirichlet(BoundaryTag tag, double value) { return {tag, BcKind::Dirichlet, value}; }
  static BoundaryCondition neumann_flux(BoundaryTag tag, double q) { return {tag, BcKind::NeumannFlux, q}; }
  static BoundaryCondition adiabatic(BoundaryTag tag) { return {tag, BcKind::Adiabatic, 0.0}; }
};

using BoundaryConditions = std::vector<BoundaryCondition>;

/// Throws on duplicate tags or conditions placed on slab_bottom/slab_top.
void validate(const BoundaryConditions& bcs);

enum class JumpMode { Classical, Flipped };

std::string_view to_string(JumpMode mode);

/// Interface values carried from one slab to the next (T^- at t_n).
/// `values[i]` belongs to slab node `node_order[i]`, which lies in spatial
/// column i.
struct SlabTrace {
  std::vector<double> values;
  std::vector<std::size_t> node_order;
};

/// Initial trace on the slab bottom from a function of the spatial position.
SlabTrace make_initial_trace(const SpaceTimeSlab& slab, const std::function<double(const SpatialPoint&)>& field);

/// Reads a trace off the slab top.
SlabTrace top_trace(const SpaceTimeSlab& slab, const Eigen::VectorXd& solution);

struct SparseSystem {
  Eigen::SparseMatrix<double, Eigen::RowMajor> matrix;
  Eigen::VectorXd rhs;
  std::vector<std::size_t> dof_map;  // slab node -> equation index
};

struct HeatProblem {
  MaterialParams material;
  BoundaryConditions bcs;
  double source = 0.0;  // uniform volumetric source
  int quadrature_order = ReferenceElement::kDefaultOrder;
};

/// Assembles the DG-in-time weak form on one slab:
///
///   int_Q w dT/dt + int_Q alpha grad_x w . grad_x T + int_Omega_n w+ (T+ - T-)
///     = int_Q w f + int_{lateral} q w
///
/// The jump integral adds the spatial mass matrix of the slab-bottom face to
/// the matrix and (mass * T-) to the right-hand side.
///
/// Classical mode pairs `trace.values[i]` with `slab.bottom_nodes[i]` by
/// spatial column. Flipped mode requires `trace.node_order` to equal
/// `slab.bottom_nodes`: the previous top nodes are the current bottom nodes.
SparseSystem assemble_slab(const SpaceTimeSlab& slab, const SlabInterval& interval, const HeatProblem& problem,
                           const SlabTrace& trace, JumpMode mode);

/// Spatial mass matrix on the slab-bottom face, indexed by slab node.
Eigen::SparseMatrix<double> assemble_jump_block(const SpaceTimeSlab& slab, const SlabInterval& interval,
                                                int quadrature_order = ReferenceElement::kDefaultOrder);

enum class SolverKind { Auto, Direct, Iterative };

struct SolverOptions {
  double tol = 1e-12;  // relative residual
  int max_iter = 10000;
  SolverKind kind = SolverKind::Auto;
  std::size_t direct_limit = 200000;  // Auto switches to iterative above this many unknowns
};

struct SolveResult {
  Eigen::VectorXd x;
  double relative_residual = 0.0;
  int iterations = 0;
};

/// Sparse LU, or BiCGSTAB with an incomplete LU preconditioner from a zero initial
/// guess. Throws std::runtime_error on singular matrices or non-convergence.
SolveResult solve_system(const SparseSystem& system, const SolverOptions& options = {});

struct MarchState {
  SpaceTimeSlab slab;
  SlabTrace trace;
  JumpMode mode = JumpMode::Flipped;
  std::size_t steps_taken = 0;
};

struct StepResult {
  Eigen::VectorXd solution;
  SlabTrace next_trace;
  double relative_residual = 0.0;
};

/// Solves one slab and moves the state to the next interface.
///
/// In flipped mode the slab is flipped before every step after the first, so
/// the nodes that held the previous top values sit at the new bottom with
/// unchanged indices. In classical mode the geometry never changes.
StepResult advance(MarchState& state, const SlabInterval& interval, const HeatProblem& problem,
                   const SolverOptions& options = {});

struct HeatCase {
  SpaceTimeSlab slab;  // unflipped, as produced by extrude
  HeatProblem problem;
  SlabTrace initial;
  JumpMode mode = JumpMode::Flipped;
  double dt = 0.1;  // slab duration
  double t0 = 0.0;
  SolverOptions solver;
};

struct MarchResult {
  std::vector<double> times;        // k * dt, k = 0..n_steps
  std::vector<SlabTrace> history;   // trace at each time
  Eigen::VectorXd final_solution;
  SpaceTimeSlab final_slab;
  double layer_dt = 0.0;            // dt / time_layers, the reported step size
  double max_relative_residual = 0.0;
};

MarchResult march(const HeatCase& heat_case, std::size_t n_steps);

/// Trace values indexed by spatial node.
std::vector<double> trace_by_spatial_node(const SpaceTimeSlab& slab, const SlabTrace& trace);

}  // namespace stheat
