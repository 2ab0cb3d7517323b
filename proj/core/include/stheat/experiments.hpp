#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stheat/analytic.hpp"
#include "stheat/config.hpp"
#include "stheat/heat_solver.hpp"
#include "stheat/moving_domain.hpp"

namespace stheat {

/// Field at the reference time on the spatial nodes.
struct Profile {
  std::vector<SpatialPoint> points;
  std::vector<double> numeric;
  std::vector<double> exact;
};

struct MovingSummary {
  std::vector<SpatialPoint> reference;     // undeformed spatial nodes
  std::vector<SpatialPoint> displacement;  // final, per spatial node
  double max_conformity_gap = 0.0;
  double max_displacement_error = 0.0;  // against v * total_time
};

struct CaseResult {
  ErrorReport report;
  Profile profile;
  std::vector<std::string> warnings;
  std::vector<std::string> files;
  double max_relative_residual = 0.0;
  std::optional<MovingSummary> moving;
};

/// Exact field of the configured case at (x, t); throws for the moving case.
double exact_solution(const CaseConfig& config, const SpatialPoint& x, double t);

SpatialMesh build_mesh(const CaseConfig& config);

/// Runs the case without writing files.
CaseResult solve_case(const CaseConfig& config);

/// Runs the case and writes the profile and error CSVs (plus VTK when
/// enabled) into `config.output_dir`.
CaseResult run_case(const CaseConfig& config);

struct ConvergenceRow {
  Scheme scheme = Scheme::SpaceTime;
  double dt = 0.0;  // step size; layer thickness for multi-layer slabs
  std::size_t n_steps = 0;
  double error = 0.0;
  double observed_order = 0.0;  // NaN on the first row of a scheme
};

/// One row per (scheme, dt). Each dt is the reported step size: a space-time
/// slab spans dt * time_layers. Rows go to `csv` as they finish, so partial
/// results survive a failure.
std::vector<ConvergenceRow> run_convergence(const CaseConfig& base, const std::vector<double>& dt_list,
                                            const std::vector<Scheme>& schemes, std::ostream* csv = nullptr);

struct ModeDiffEntry {
  std::size_t nx = 1000;
  double dt = 0.1;
};

struct ModeDiffRow {
  std::size_t nx = 0;
  double dt = 0.0;
  double error_classical = 0.0;
  double error_flipped = 0.0;
  double difference = 0.0;             // norm of classical - flipped
  double max_relative_node_diff = 0.0;  // over window nodes
};

/// Classical vs flipped space-time runs of a fixed-domain case.
std::vector<ModeDiffRow> run_mode_diff(const CaseConfig& base, const std::vector<ModeDiffEntry>& entries,
                                       std::ostream* csv = nullptr);
std::vector<ModeDiffRow> run_mode_diff(const CaseConfig& base, const std::vector<double>& dt_list,
                                       std::ostream* csv = nullptr);

/// Table-2 mesh and step pairs; the second mesh shrinks under desk scale.
std::vector<ModeDiffEntry> table2_entries(bool desk);

// CSV writers; fixed column order, C-locale numbers.
void write_profile_csv(std::ostream& out, const Profile& profile);
void write_error_csv(std::ostream& out, const ErrorReport& report);
void write_convergence_header(std::ostream& out);
void write_convergence_row(std::ostream& out, const ConvergenceRow& row);
void write_mode_diff_header(std::ostream& out);
void write_mode_diff_row(std::ostream& out, const ModeDiffRow& row);
void write_displacement_csv(std::ostream& out, const MovingSummary& summary);

}  // namespace stheat
