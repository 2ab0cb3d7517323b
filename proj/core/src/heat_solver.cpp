#include "stheat/heat_solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace stheat {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

const BoundaryCondition* find_condition(const BoundaryConditions& bcs, BoundaryTag tag) {
  for (const auto& bc : bcs) {
    if (bc.tag == tag) return &bc;
  }
  return nullptr;
}

// T^- per slab node (zero away from the slab bottom).
Eigen::VectorXd pair_trace(const SpaceTimeSlab& slab, const SlabTrace& trace, JumpMode mode) {
  const std::size_t ns = slab.spatial_node_count();
  if (trace.values.empty()) throw std::invalid_argument("assemble_slab: missing trace");
  if (trace.values.size() != ns || trace.node_order.size() != ns) {
    throw std::invalid_argument("assemble_slab: trace has " + std::to_string(trace.values.size()) +
                                " values, slab has " + std::to_string(ns) + " interface nodes");
  }
  Eigen::VectorXd minus = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(slab.node_count()));
  for (std::size_t i = 0; i < ns; ++i) {
    const std::size_t bottom = slab.bottom_nodes[i];
    if (mode == JumpMode::Flipped) {
      if (trace.node_order[i] != bottom) {
        throw std::invalid_argument("assemble_slab: flipped trace does not sit on the slab bottom (position " +
                                    std::to_string(i) + ")");
      }
    } else if (trace.node_order[i] >= slab.node_count() ||
               slab.spatial_index[trace.node_order[i]] != slab.spatial_index[bottom]) {
      throw std::invalid_argument("assemble_slab: classical trace column mismatch at position " + std::to_string(i));
    }
    if (!std::isfinite(trace.values[i])) throw std::invalid_argument("assemble_slab: non-finite trace value");
    minus[static_cast<Eigen::Index>(bottom)] = trace.values[i];
  }
  return minus;
}

void add_jump_triplets(const SpaceTimeSlab& slab, const SlabInterval& interval, const ReferenceElement& ref,
                       Triplets& triplets) {
  for (const auto& facet : slab.boundary_facets) {
    if (facet.tag != BoundaryTag::SlabBottom) continue;
    const MappedFace face = map_face(slab, facet.element, facet.local_face, interval, ref);
    const auto conn = slab.element(facet.element);
    const auto& local = ref.cell().face_nodes(facet.local_face);
    for (std::size_t a : local) {
      for (std::size_t b : local) {
        double m = 0.0;
        for (std::size_t q = 0; q < face.point_count; ++q) m += face.weights[q] * face.value(q, a) * face.value(q, b);
        triplets.emplace_back(static_cast<int>(conn[a]), static_cast<int>(conn[b]), m);
      }
    }
  }
}

}  // namespace

void validate(const BoundaryConditions& bcs) {
  for (std::size_t i = 0; i < bcs.size(); ++i) {
    if (bcs[i].tag == BoundaryTag::SlabBottom || bcs[i].tag == BoundaryTag::SlabTop) {
      throw std::invalid_argument("boundary condition on slab face '" + std::string(to_string(bcs[i].tag)) +
                                  "' is not allowed");
    }
    for (std::size_t j = i + 1; j < bcs.size(); ++j) {
      if (bcs[i].tag == bcs[j].tag) {
        throw std::invalid_argument("duplicate boundary condition for tag '" + std::string(to_string(bcs[i].tag)) + "'");
      }
    }
  }
}

std::string_view to_string(JumpMode mode) { return mode == JumpMode::Classical ? "classical" : "flipped"; }

SlabTrace make_initial_trace(const SpaceTimeSlab& slab, const std::function<double(const SpatialPoint&)>& field) {
  SlabTrace trace;
  trace.node_order = slab.bottom_nodes;
  trace.values.reserve(slab.bottom_nodes.size());
  for (std::size_t node : slab.bottom_nodes) trace.values.push_back(field(slab.nodes[node].x));
  return trace;
}

SlabTrace top_trace(const SpaceTimeSlab& slab, const Eigen::VectorXd& solution) {
  SlabTrace trace;
  trace.node_order = slab.top_nodes;
  trace.values.reserve(slab.top_nodes.size());
  for (std::size_t node : slab.top_nodes) trace.values.push_back(solution[static_cast<Eigen::Index>(node)]);
  return trace;
}

Eigen::SparseMatrix<double> assemble_jump_block(const SpaceTimeSlab& slab, const SlabInterval& interval,
                                                int quadrature_order) {
  const ReferenceElement ref(slab.spatial_dim, true, quadrature_order);
  Triplets triplets;
  add_jump_triplets(slab, interval, ref, triplets);
  const auto n = static_cast<Eigen::Index>(slab.node_count());
  Eigen::SparseMatrix<double> block(n, n);
  block.setFromTriplets(triplets.begin(), triplets.end());
  return block;
}

SparseSystem assemble_slab(const SpaceTimeSlab& slab, const SlabInterval& interval, const HeatProblem& problem,
                           const SlabTrace& trace, JumpMode mode) {
  validate(problem.bcs);
  if (problem.material.alpha < 0.0) throw std::invalid_argument("assemble_slab: alpha must be non-negative");
  const ReferenceElement ref(slab.spatial_dim, true, problem.quadrature_order);
  const std::size_t n_nodes = slab.node_count();
  const auto n = static_cast<Eigen::Index>(n_nodes);
  const Eigen::VectorXd minus = pair_trace(slab, trace, mode);
  const int d = slab.spatial_dim;
  const double alpha = problem.material.alpha;

  Triplets triplets;
  triplets.reserve(slab.element_count() * slab.nodes_per_element() * slab.nodes_per_element() + 4 * n_nodes);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);

  MappedBasis basis;
  const std::size_t npe = slab.nodes_per_element();
  std::vector<double> local(npe * npe);
  for (std::size_t e = 0; e < slab.element_count(); ++e) {
    map_element(slab, e, interval, ref, basis);
    const auto conn = slab.element(e);
    std::fill(local.begin(), local.end(), 0.0);
    for (std::size_t q = 0; q < basis.point_count; ++q) {
      const double w = basis.weights[q];
      for (std::size_t a = 0; a < npe; ++a) {
        const double wa = basis.value(q, a);
        for (std::size_t b = 0; b < npe; ++b) {
          double grad = 0.0;
          for (int i = 0; i < d; ++i) grad += basis.dx(q, a, i) * basis.dx(q, b, i);
          local[a * npe + b] += w * (wa * basis.dt(q, b) + alpha * grad);
        }
        if (problem.source != 0.0) rhs[static_cast<Eigen::Index>(conn[a])] += w * wa * problem.source;
      }
    }
    for (std::size_t a = 0; a < npe; ++a) {
      for (std::size_t b = 0; b < npe; ++b) {
        triplets.emplace_back(static_cast<int>(conn[a]), static_cast<int>(conn[b]), local[a * npe + b]);
      }
    }
  }

  // Jump term: matrix block on T+, mass * T- into the load.
  const auto jump_begin = triplets.size();
  add_jump_triplets(slab, interval, ref, triplets);
  for (auto it = triplets.begin() + static_cast<std::ptrdiff_t>(jump_begin); it != triplets.end(); ++it) {
    rhs[it->row()] += it->value() * minus[it->col()];
  }

  std::vector<char> constrained(n_nodes, 0);
  std::vector<double> constrained_value(n_nodes, 0.0);
  for (const auto& facet : slab.boundary_facets) {
    if (facet.tag == BoundaryTag::SlabBottom || facet.tag == BoundaryTag::SlabTop) continue;
    const BoundaryCondition* bc = find_condition(problem.bcs, facet.tag);
    if (bc == nullptr || bc->kind == BcKind::Adiabatic) continue;
    const auto conn = slab.element(facet.element);
    if (bc->kind == BcKind::Dirichlet) {
      for (std::size_t a : ref.cell().face_nodes(facet.local_face)) {
        constrained[conn[a]] = 1;
        constrained_value[conn[a]] = bc->value;
      }
      continue;
    }
    const MappedFace face = map_face(slab, facet.element, facet.local_face, interval, ref);
    for (std::size_t a : ref.cell().face_nodes(facet.local_face)) {
      double load = 0.0;
      for (std::size_t q = 0; q < face.point_count; ++q) load += face.weights[q] * face.value(q, a);
      rhs[static_cast<Eigen::Index>(conn[a])] += bc->value * load;
    }
  }
  for (const auto& bc : problem.bcs) {
    const bool present = std::any_of(slab.boundary_facets.begin(), slab.boundary_facets.end(),
                                     [&](const BoundaryFacet& f) { return f.tag == bc.tag; });
    if (!present) {
      throw std::invalid_argument("assemble_slab: unknown boundary tag '" + std::string(to_string(bc.tag)) + "'");
    }
  }

  SparseSystem system;
  system.matrix.resize(n, n);
  system.matrix.setFromTriplets(triplets.begin(), triplets.end());
  for (Eigen::Index row = 0; row < n; ++row) {
    if (!constrained[static_cast<std::size_t>(row)]) continue;
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(system.matrix, row); it; ++it) {
      it.valueRef() = it.col() == row ? 1.0 : 0.0;
    }
    rhs[row] = constrained_value[static_cast<std::size_t>(row)];
  }
  system.rhs = std::move(rhs);
  system.dof_map.resize(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) system.dof_map[i] = i;
  return system;
}

SolveResult solve_system(const SparseSystem& system, const SolverOptions& options) {
  const auto& a = system.matrix;
  const Eigen::VectorXd& b = system.rhs;
  if (a.rows() != a.cols() || a.rows() != b.size()) throw std::invalid_argument("solve_system: dimension mismatch");
  SolveResult result;
  const double b_norm = b.norm();
  if (b_norm == 0.0) {
    result.x = Eigen::VectorXd::Zero(b.size());
    return result;
  }

  const bool direct = options.kind == SolverKind::Direct ||
                      (options.kind == SolverKind::Auto && static_cast<std::size_t>(a.rows()) <= options.direct_limit);
  if (direct) {
    const Eigen::SparseMatrix<double> col_major = a;
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(col_major);
    if (lu.info() != Eigen::Success) throw std::runtime_error("solve_system: sparse LU failed (singular matrix?)");
    result.x = lu.solve(b);
    result.relative_residual = (b - a * result.x).norm() / b_norm;
    // Iterative refinement for the rare ill-conditioned slab.
    for (int refine = 0; refine < 3 && result.relative_residual > options.tol; ++refine) {
      result.x += lu.solve(b - a * result.x);
      result.relative_residual = (b - a * result.x).norm() / b_norm;
      ++result.iterations;
    }
  } else {
    // Jacobi stalls on long multi-layer slabs; ILUT keeps BiCGSTAB robust.
    const Eigen::SparseMatrix<double> col_major = a;
    Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> solver;
    solver.preconditioner().setDroptol(1e-10);
    solver.preconditioner().setFillfactor(10);
    solver.setTolerance(options.tol);
    solver.setMaxIterations(options.max_iter);
    solver.compute(col_major);
    if (solver.info() != Eigen::Success) throw std::runtime_error("solve_system: preconditioner setup failed");
    result.x = solver.solveWithGuess(b, Eigen::VectorXd::Zero(b.size()));
    result.iterations = static_cast<int>(solver.iterations());
    result.relative_residual = (b - a * result.x).norm() / b_norm;
  }
  if (!result.x.allFinite() || !(result.relative_residual <= options.tol)) {
    std::ostringstream msg;
    msg << "solve_system: relative residual " << result.relative_residual << " above tolerance " << options.tol;
    throw std::runtime_error(msg.str());
  }
  return result;
}

StepResult advance(MarchState& state, const SlabInterval& interval, const HeatProblem& problem,
                   const SolverOptions& options) {
  if (state.mode == JumpMode::Flipped && state.steps_taken > 0) state.slab = flip_time(std::move(state.slab));
  const SparseSystem system = assemble_slab(state.slab, interval, problem, state.trace, state.mode);
  SolveResult solved = solve_system(system, options);

  StepResult step;
  step.solution = std::move(solved.x);
  step.relative_residual = solved.relative_residual;
  step.next_trace = top_trace(state.slab, step.solution);
  state.trace = step.next_trace;
  ++state.steps_taken;
  return step;
}

MarchResult march(const HeatCase& heat_case, std::size_t n_steps) {
  if (n_steps < 1) throw std::invalid_argument("march: n_steps must be >= 1");
  if (!(heat_case.dt > 0.0)) throw std::invalid_argument("march: dt must be positive");
  MarchState state{heat_case.slab, heat_case.initial, heat_case.mode, 0};

  MarchResult result;
  result.layer_dt = heat_case.dt / heat_case.slab.time_layers;
  result.times.push_back(heat_case.t0);
  result.history.push_back(heat_case.initial);
  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t_n = heat_case.t0 + static_cast<double>(k) * heat_case.dt;
    const auto interval = SlabInterval::from_step(t_n, heat_case.dt);
    StepResult step = advance(state, interval, heat_case.problem, heat_case.solver);
    result.max_relative_residual = std::max(result.max_relative_residual, step.relative_residual);
    result.times.push_back(heat_case.t0 + static_cast<double>(k + 1) * heat_case.dt);
    result.history.push_back(std::move(step.next_trace));
    if (k + 1 == n_steps) result.final_solution = std::move(step.solution);
  }
  result.final_slab = std::move(state.slab);
  return result;
}

std::vector<double> trace_by_spatial_node(const SpaceTimeSlab& slab, const SlabTrace& trace) {
  std::vector<double> values(slab.spatial_node_count(), 0.0);
  for (std::size_t i = 0; i < trace.values.size(); ++i) values[slab.spatial_index[trace.node_order[i]]] = trace.values[i];
  return values;
}

}  // namespace stheat
