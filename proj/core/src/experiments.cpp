#include "stheat/experiments.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "stheat/baselines.hpp"
#include "stheat/vtk.hpp"

namespace stheat {

namespace {

std::string base_name(const CaseConfig& c) {
  std::string name = fmt::format("{}_{}", to_string(c.kind), to_string(c.scheme));
  if (c.scheme == Scheme::SpaceTime) name += fmt::format("_{}", to_string(c.jump_mode));
  return name;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  return out;
}

BoundaryConditions boundary_conditions(const CaseConfig& c) {
  if (c.kind == CaseKind::Rod) return {BoundaryCondition::neumann_flux(BoundaryTag::Left, c.flux)};
  return {};
}

double initial_value(const CaseConfig& c, const SpatialPoint& x) {
  if (c.kind == CaseKind::Manufactured) return std::cos(std::numbers::pi * x[0] / c.length);
  return 0.0;
}

HeatProblem heat_problem(const CaseConfig& c) {
  HeatProblem p;
  p.material.alpha = c.alpha;
  p.bcs = boundary_conditions(c);
  p.quadrature_order = c.quadrature_order;
  return p;
}

SolverOptions solver_options(const CaseConfig& c) {
  SolverOptions o;
  o.tol = c.solver_tol;
  o.max_iter = c.max_iter;
  return o;
}

struct NodalField {
  std::vector<double> values;  // per spatial node
  double layer_dt = 0.0;
  double max_relative_residual = 0.0;
  std::optional<MarchResult> march;
};

NodalField solve_space_time(const CaseConfig& c, const SpatialMesh& mesh, std::size_t steps) {
  HeatCase hc;
  hc.slab = extrude(mesh, c.time_layers);
  hc.problem = heat_problem(c);
  hc.initial = make_initial_trace(hc.slab, [&](const SpatialPoint& x) { return initial_value(c, x); });
  hc.mode = c.jump_mode;
  hc.dt = c.dt;
  hc.solver = solver_options(c);
  MarchResult m = march(hc, steps);
  NodalField f;
  f.values = trace_by_spatial_node(m.final_slab, m.history.back());
  f.layer_dt = m.layer_dt;
  f.max_relative_residual = m.max_relative_residual;
  f.march = std::move(m);
  return f;
}

NodalField solve_semi_discrete(const CaseConfig& c, const SpatialMesh& mesh, std::size_t steps) {
  MaterialParams material;
  material.alpha = c.alpha;
  const SemiDiscreteOperator op = assemble_spatial(mesh, material, boundary_conditions(c), c.quadrature_order);
  Eigen::VectorXd initial(static_cast<Eigen::Index>(mesh.nodes.size()));
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i) initial[static_cast<Eigen::Index>(i)] = initial_value(c, mesh.nodes[i]);
  const double theta = c.scheme == Scheme::ImplicitEuler ? 1.0 : 0.5;
  const Eigen::VectorXd final = run_theta(op, std::move(initial), c.dt, theta, steps);
  NodalField f;
  f.values.assign(final.data(), final.data() + final.size());
  f.layer_dt = c.dt;
  return f;
}

MovingSummary solve_moving(const CaseConfig& c, std::size_t steps, std::vector<std::string>* files) {
  const SpatialMesh mesh = build_mesh(c);
  MovingObserver observer;
  if (files != nullptr && c.write_vtk) {
    observer = [&](std::size_t k, const SlabInterval& interval, const SpaceTimeSlab& deformed,
                   const DisplacementField& field) {
      const std::string path = (std::filesystem::path(c.output_dir) / fmt::format("moving_slab_{:04d}.vtk", k)).string();
      write_vtk_file(path, deformed, interval, {}, {{"displacement", field}});
      files->push_back(path);
    };
  }
  const MovingResult r =
      run_rigid_motion(mesh, c.motion, steps, c.time_layers, c.jump_mode, solver_options(c), observer);
  MovingSummary s;
  s.reference = mesh.nodes;
  s.displacement = r.final_displacement;
  s.max_conformity_gap = r.max_conformity_gap;
  for (const auto& d : s.displacement) {
    for (int i = 0; i < 2; ++i) {
      s.max_displacement_error =
          std::max(s.max_displacement_error, std::abs(d[i] - c.motion.velocity[i] * c.motion.total_time));
    }
  }
  return s;
}

CaseResult solve_case_impl(const CaseConfig& c, std::vector<std::string>* files) {
  CaseResult result;
  result.warnings = validate(c);
  const std::size_t steps = effective_steps(c);
  result.report.scheme = std::string(to_string(c.scheme));
  if (c.kind == CaseKind::Moving) {
    result.moving = solve_moving(c, steps, files);
    result.report.dt = c.dt / c.time_layers;
    result.report.error = result.moving->max_displacement_error;
    result.report.n_points = result.moving->reference.size();
    result.report.window = c.window;
    return result;
  }
  if (c.kind == CaseKind::Rod && !(c.alpha > 0.0)) {
    throw ConfigError("material.alpha", "the rod case needs a positive diffusivity");
  }
  const SpatialMesh mesh = build_mesh(c);
  NodalField field;
  try {
    field = c.scheme == Scheme::SpaceTime ? solve_space_time(c, mesh, steps) : solve_semi_discrete(c, mesh, steps);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(fmt::format("{} case, scheme {}, nx {}, dt {}: {}", to_string(c.kind),
                                         to_string(c.scheme), c.nx, c.dt, e.what()));
  }
  const double t_end = static_cast<double>(steps) * c.dt;
  Profile& p = result.profile;
  p.points = mesh.nodes;
  p.numeric = field.values;
  p.exact.reserve(mesh.nodes.size());
  for (const auto& x : mesh.nodes) p.exact.push_back(exact_solution(c, x, t_end));
  result.report = error_norm(p.points, p.numeric, std::span<const double>(p.exact), c.window, c.norm);
  result.report.dt = field.layer_dt;
  result.report.scheme = std::string(to_string(c.scheme));
  result.max_relative_residual = field.max_relative_residual;

  if (files != nullptr && c.write_vtk && field.march) {
    const MarchResult& m = *field.march;
    const std::string path = (std::filesystem::path(c.output_dir) / (base_name(c) + "_slab.vtk")).string();
    const std::vector<double> values(m.final_solution.data(), m.final_solution.data() + m.final_solution.size());
    write_vtk_file(path, m.final_slab, SlabInterval::from_step(t_end - c.dt, c.dt), {{"temperature", values}});
    files->push_back(path);
  }
  return result;
}

}  // namespace

double exact_solution(const CaseConfig& c, const SpatialPoint& x, double t) {
  switch (c.kind) {
    case CaseKind::Rod: {
      const double s = std::sqrt(c.alpha);
      return c.flux / s * rod_exact(x[0] / s, t);
    }
    case CaseKind::Manufactured:
      return cosine_mode_exact(x[0], t, c.length, c.alpha);
    case CaseKind::Moving:
      break;
  }
  throw std::invalid_argument("exact_solution: no temperature solution for the moving case");
}

SpatialMesh build_mesh(const CaseConfig& c) {
  return c.spatial_dim == 1 ? make_interval_mesh(c.length, c.nx) : make_rectangle_mesh(c.length, c.width, c.nx, c.ny);
}

CaseResult solve_case(const CaseConfig& config) { return solve_case_impl(config, nullptr); }

CaseResult run_case(const CaseConfig& config) {
  validate(config);
  std::filesystem::create_directories(config.output_dir);
  std::vector<std::string> files;
  CaseResult result = solve_case_impl(config, &files);
  const std::filesystem::path dir(config.output_dir);
  if (result.moving) {
    const std::string path = (dir / "moving_displacement.csv").string();
    auto out = open_output(path);
    write_displacement_csv(out, *result.moving);
    files.push_back(path);
  } else {
    const std::string profile = (dir / (base_name(config) + "_profile.csv")).string();
    auto out = open_output(profile);
    write_profile_csv(out, result.profile);
    files.push_back(profile);
  }
  const std::string error = (dir / (base_name(config) + "_error.csv")).string();
  auto out = open_output(error);
  write_error_csv(out, result.report);
  files.push_back(error);
  result.files = std::move(files);
  return result;
}

std::vector<ConvergenceRow> run_convergence(const CaseConfig& base, const std::vector<double>& dt_list,
                                            const std::vector<Scheme>& schemes, std::ostream* csv) {
  if (dt_list.size() < 2) throw std::invalid_argument("run_convergence: need at least two dt values");
  if (schemes.empty()) throw std::invalid_argument("run_convergence: need at least one scheme");
  if (csv != nullptr) write_convergence_header(*csv);
  std::vector<ConvergenceRow> rows;
  for (Scheme scheme : schemes) {
    double previous = std::numeric_limits<double>::quiet_NaN();
    for (double dt : dt_list) {
      CaseConfig c = base;
      c.scheme = scheme;
      c.n_steps = 0;
      if (scheme != Scheme::SpaceTime) c.time_layers = 1;
      c.dt = dt * c.time_layers;
      if (scheme != Scheme::SpaceTime) c.jump_mode_explicit = false;
      ConvergenceRow row;
      row.scheme = scheme;
      row.dt = dt;
      row.n_steps = effective_steps(c) * static_cast<std::size_t>(c.time_layers);
      row.error = solve_case(c).report.error;
      row.observed_order = std::log2(previous / row.error);
      previous = row.error;
      rows.push_back(row);
      if (csv != nullptr) {
        write_convergence_row(*csv, row);
        csv->flush();
      }
    }
  }
  return rows;
}

std::vector<ModeDiffRow> run_mode_diff(const CaseConfig& base, const std::vector<ModeDiffEntry>& entries,
                                       std::ostream* csv) {
  if (base.kind == CaseKind::Moving) throw std::invalid_argument("run_mode_diff: needs a fixed-domain case");
  if (csv != nullptr) write_mode_diff_header(*csv);
  std::vector<ModeDiffRow> rows;
  for (const auto& entry : entries) {
    CaseConfig c = base;
    c.scheme = Scheme::SpaceTime;
    c.nx = entry.nx;
    c.dt = entry.dt;
    c.n_steps = 0;
    c.jump_mode = JumpMode::Classical;
    const CaseResult classical = solve_case(c);
    c.jump_mode = JumpMode::Flipped;
    const CaseResult flipped = solve_case(c);

    ModeDiffRow row;
    row.nx = entry.nx;
    row.dt = flipped.report.dt;
    row.error_classical = classical.report.error;
    row.error_flipped = flipped.report.error;
    const auto& pts = flipped.profile.points;
    row.difference = error_norm(pts, classical.profile.numeric, std::span<const double>(flipped.profile.numeric),
                                c.window, c.norm)
                         .error;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (!c.window.contains(pts[i][0])) continue;
      const double a = classical.profile.numeric[i];
      const double b = flipped.profile.numeric[i];
      const double scale = std::max(std::abs(a), std::abs(b));
      if (scale > 0.0) row.max_relative_node_diff = std::max(row.max_relative_node_diff, std::abs(a - b) / scale);
    }
    rows.push_back(row);
    if (csv != nullptr) {
      write_mode_diff_row(*csv, row);
      csv->flush();
    }
  }
  return rows;
}

std::vector<ModeDiffRow> run_mode_diff(const CaseConfig& base, const std::vector<double>& dt_list, std::ostream* csv) {
  std::vector<ModeDiffEntry> entries;
  for (double dt : dt_list) entries.push_back({base.nx, dt});
  return run_mode_diff(base, entries, csv);
}

std::vector<ModeDiffEntry> table2_entries(bool desk) { return {{1000, 0.1}, {desk ? kDeskMaxNx : 10000, 0.05}}; }

void write_profile_csv(std::ostream& out, const Profile& p) {
  fmt::print(out, "x,y,T_numeric,T_exact\n");
  for (std::size_t i = 0; i < p.points.size(); ++i) {
    fmt::print(out, "{:.17g},{:.17g},{:.17g},{:.17g}\n", p.points[i][0], p.points[i][1], p.numeric[i], p.exact[i]);
  }
}

void write_error_csv(std::ostream& out, const ErrorReport& r) {
  fmt::print(out, "scheme,dt,error,n_points,window_start,window_end\n");
  fmt::print(out, "{},{:.17g},{:.17g},{},{:.17g},{:.17g}\n", r.scheme, r.dt, r.error, r.n_points, r.window.lo,
             r.window.hi);
}

void write_convergence_header(std::ostream& out) { fmt::print(out, "scheme,dt,n_steps,error,observed_order\n"); }

void write_convergence_row(std::ostream& out, const ConvergenceRow& r) {
  fmt::print(out, "{},{:.17g},{},{:.17g},{}\n", to_string(r.scheme), r.dt, r.n_steps, r.error,
             std::isnan(r.observed_order) ? std::string() : fmt::format("{:.6f}", r.observed_order));
}

void write_mode_diff_header(std::ostream& out) {
  fmt::print(out, "nx,dt,error_classical,error_flipped,difference,max_relative_node_diff\n");
}

void write_mode_diff_row(std::ostream& out, const ModeDiffRow& r) {
  fmt::print(out, "{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.nx, r.dt, r.error_classical, r.error_flipped,
             r.difference, r.max_relative_node_diff);
}

void write_displacement_csv(std::ostream& out, const MovingSummary& s) {
  fmt::print(out, "node,x,y,dx,dy,magnitude\n");
  for (std::size_t i = 0; i < s.reference.size(); ++i) {
    const auto& d = s.displacement[i];
    fmt::print(out, "{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", i, s.reference[i][0], s.reference[i][1], d[0],
               d[1], std::hypot(d[0], d[1]));
  }
}

}  // namespace stheat
