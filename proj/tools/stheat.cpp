// stheat: driver for the space-time heat conduction experiments.
//
//   stheat run [rod|manufactured] [--config FILE] [--dt X] [--nx N] ...
//   stheat converge --dt-list 0.2,0.1,0.05,0.025 --schemes spacetime,implicit_euler
//   stheat modediff [--desk]
//   stheat moving [--dt 1]

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "stheat/config.hpp"
#include "stheat/experiments.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<double> dt;
  std::optional<std::size_t> nx;
  std::optional<std::string> scheme;
  std::optional<std::string> jump_mode;
  std::optional<int> layers;
  std::optional<std::string> out;
  bool desk = false;
  bool vtk = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config_path, "INI case file")->check(CLI::ExistingFile);
  cmd->add_option("--dt", o.dt, "slab duration or time step");
  cmd->add_option("--nx", o.nx, "elements along the length");
  cmd->add_option("--scheme", o.scheme, "spacetime | implicit_euler | crank_nicolson");
  cmd->add_option("--jump-mode", o.jump_mode, "classical | flipped");
  cmd->add_option("--layers", o.layers, "time layers per slab");
  cmd->add_option("-o,--out", o.out, "output directory");
  cmd->add_flag("--desk", o.desk, "cap the mesh at 2000 elements in length");
  cmd->add_flag("--vtk", o.vtk, "write VTK slabs");
}

stheat::CaseConfig make_config(stheat::CaseKind kind, const Overrides& o) {
  stheat::CaseConfig c = o.config_path.empty() ? stheat::default_config(kind) : stheat::load_config(o.config_path);
  if (o.dt) {
    c.dt = *o.dt;
    c.n_steps = 0;
  }
  if (o.nx) c.nx = *o.nx;
  if (o.scheme) c.scheme = stheat::parse_scheme(*o.scheme);
  if (o.jump_mode) {
    c.jump_mode = stheat::parse_jump_mode(*o.jump_mode);
    c.jump_mode_explicit = true;
  }
  if (o.layers) c.time_layers = *o.layers;
  if (o.out) c.output_dir = *o.out;
  if (o.vtk) c.write_vtk = true;
  if (o.desk) stheat::apply_desk_scale(c);
  return c;
}

void print_warnings(const stheat::CaseConfig& c) {
  for (const auto& w : stheat::validate(c)) fmt::print(std::cerr, "warning: {}\n", w);
}

std::ofstream open_csv(const stheat::CaseConfig& c, const std::string& name) {
  std::filesystem::create_directories(c.output_dir);
  const auto path = std::filesystem::path(c.output_dir) / name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  fmt::print("writing {}\n", path.string());
  return out;
}

int cmd_run(const stheat::CaseConfig& c) {
  print_warnings(c);
  const auto result = stheat::run_case(c);
  if (result.moving) {
    const auto& d = result.moving->displacement.front();
    fmt::print("final displacement ({:.12g}, {:.12g}), magnitude {:.12g}\n", d[0], d[1], std::hypot(d[0], d[1]));
    fmt::print("max displacement error {:.3e}, max interface gap {:.3e}\n", result.moving->max_displacement_error,
               result.moving->max_conformity_gap);
  } else {
    fmt::print("{} {} dt={} error={:.6e} over {} points\n", stheat::to_string(c.kind), result.report.scheme,
               result.report.dt, result.report.error, result.report.n_points);
  }
  for (const auto& f : result.files) fmt::print("wrote {}\n", f);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Space-time finite element heat conduction with mesh flipping"};
  app.require_subcommand(1);

  Overrides run_o, conv_o, diff_o, move_o;
  std::string run_kind = "rod";
  auto* run = app.add_subcommand("run", "run one case and write profile and error CSVs");
  run->add_option("kind", run_kind, "rod | manufactured | moving");
  add_common(run, run_o);

  std::vector<double> conv_dts{0.2, 0.1, 0.05, 0.025};
  std::vector<std::string> conv_schemes{"spacetime", "implicit_euler"};
  auto* conv = app.add_subcommand("converge", "temporal refinement sweep");
  add_common(conv, conv_o);
  conv->add_option("--dt-list", conv_dts, "step sizes")->delimiter(',');
  conv->add_option("--schemes", conv_schemes, "schemes to sweep")->delimiter(',');

  std::vector<double> diff_dts;
  auto* diff = app.add_subcommand("modediff", "classical vs flipped jump treatment");
  add_common(diff, diff_o);
  diff->add_option("--dt-list", diff_dts, "step sizes at the configured nx (default: the two comparison meshes)")
      ->delimiter(',');

  auto* moving = app.add_subcommand("moving", "rigid-body motion of the unit square");
  add_common(moving, move_o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(make_config(stheat::parse_case_kind(run_kind), run_o));
    if (moving->parsed()) return cmd_run(make_config(stheat::CaseKind::Moving, move_o));
    if (conv->parsed()) {
      const auto c = make_config(stheat::CaseKind::Rod, conv_o);
      print_warnings(c);
      std::vector<stheat::Scheme> schemes;
      for (const auto& s : conv_schemes) schemes.push_back(stheat::parse_scheme(s));
      auto out = open_csv(c, "convergence.csv");
      for (const auto& row : stheat::run_convergence(c, conv_dts, schemes, &out)) {
        fmt::print("{:<15} dt={:<10g} error={:.6e} order={:.3f}\n", stheat::to_string(row.scheme), row.dt, row.error,
                   row.observed_order);
      }
      return 0;
    }
    if (diff->parsed()) {
      const auto c = make_config(stheat::CaseKind::Rod, diff_o);
      print_warnings(c);
      auto out = open_csv(c, "modediff.csv");
      const auto rows = diff_dts.empty() ? stheat::run_mode_diff(c, stheat::table2_entries(diff_o.desk), &out)
                                         : stheat::run_mode_diff(c, diff_dts, &out);
      for (const auto& r : rows) {
        fmt::print("nx={:<6} dt={:<6g} classical={:.6e} flipped={:.6e} difference={:.3e} max_rel={:.3e}\n", r.nx,
                   r.dt, r.error_classical, r.error_flipped, r.difference, r.max_relative_node_diff);
      }
      return 0;
    }
  } catch (const stheat::ConfigError& e) {
    fmt::print(std::cerr, "config error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
