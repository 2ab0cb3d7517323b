#include "stheat/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace stheat {

namespace pt = boost::property_tree;

std::string_view to_string(CaseKind kind) {
  switch (kind) {
    case CaseKind::Rod: return "rod";
    case CaseKind::Moving: return "moving";
    case CaseKind::Manufactured: return "manufactured";
  }
  return "rod";
}

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::SpaceTime: return "spacetime";
    case Scheme::ImplicitEuler: return "implicit_euler";
    case Scheme::CrankNicolson: return "crank_nicolson";
  }
  return "spacetime";
}

CaseKind parse_case_kind(std::string_view name) {
  if (name == "rod") return CaseKind::Rod;
  if (name == "moving") return CaseKind::Moving;
  if (name == "manufactured") return CaseKind::Manufactured;
  throw ConfigError("case.kind", fmt::format("unknown case '{}' (rod, moving, manufactured)", name));
}

Scheme parse_scheme(std::string_view name) {
  if (name == "spacetime") return Scheme::SpaceTime;
  if (name == "implicit_euler") return Scheme::ImplicitEuler;
  if (name == "crank_nicolson") return Scheme::CrankNicolson;
  throw ConfigError("discretization.scheme",
                    fmt::format("unknown scheme '{}' (spacetime, implicit_euler, crank_nicolson)", name));
}

JumpMode parse_jump_mode(std::string_view name) {
  if (name == "classical") return JumpMode::Classical;
  if (name == "flipped") return JumpMode::Flipped;
  throw ConfigError("discretization.jump_mode", fmt::format("unknown jump mode '{}' (classical, flipped)", name));
}

namespace {

std::string_view norm_name(NormVariant v) { return v == NormVariant::Rms ? "rms" : "root_sum_over_n"; }

NormVariant parse_norm(std::string_view name) {
  if (name == "rms") return NormVariant::Rms;
  if (name == "root_sum_over_n") return NormVariant::RootSumOverN;
  throw ConfigError("error.norm", fmt::format("unknown norm '{}' (rms, root_sum_over_n)", name));
}

double to_double(const std::string& field, const std::string& text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(field, fmt::format("expected a number, got '{}'", text));
  }
  return v;
}

long long to_integer(const std::string& field, const std::string& text) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(field, fmt::format("expected an integer, got '{}'", text));
  }
  return v;
}

std::size_t to_size(const std::string& field, const std::string& text) {
  const long long v = to_integer(field, text);
  if (v < 0) throw ConfigError(field, "must not be negative");
  return static_cast<std::size_t>(v);
}

bool to_bool(const std::string& field, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(field, fmt::format("expected true or false, got '{}'", text));
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"case", {"kind"}},
      {"geometry", {"length", "width", "spatial_dim", "nx", "ny"}},
      {"material", {"alpha", "flux"}},
      {"time", {"dt", "n_steps", "time_layers"}},
      {"discretization", {"scheme", "jump_mode", "quadrature_order"}},
      {"solver", {"tol", "max_iter"}},
      {"error", {"window_start", "window_end", "reference_time", "norm"}},
      {"motion", {"vx", "vy", "total_time"}},
      {"output", {"directory", "vtk"}},
  };
  return keys;
}

}  // namespace

bool operator==(const ErrorWindow& a, const ErrorWindow& b) { return a.lo == b.lo && a.hi == b.hi; }

bool operator==(const CaseConfig& a, const CaseConfig& b) {
  return a.kind == b.kind && a.length == b.length && a.width == b.width && a.spatial_dim == b.spatial_dim &&
         a.nx == b.nx && a.ny == b.ny && a.alpha == b.alpha && a.flux == b.flux && a.dt == b.dt &&
         a.n_steps == b.n_steps && a.time_layers == b.time_layers && a.scheme == b.scheme &&
         a.jump_mode == b.jump_mode && a.jump_mode_explicit == b.jump_mode_explicit &&
         a.quadrature_order == b.quadrature_order && a.solver_tol == b.solver_tol && a.max_iter == b.max_iter &&
         a.window == b.window && a.reference_time == b.reference_time && a.norm == b.norm &&
         a.motion.velocity == b.motion.velocity && a.motion.total_time == b.motion.total_time &&
         a.output_dir == b.output_dir && a.write_vtk == b.write_vtk;
}

CaseConfig default_config(CaseKind kind) {
  CaseConfig c;
  c.kind = kind;
  switch (kind) {
    case CaseKind::Rod:
      break;
    case CaseKind::Moving:
      c.length = 1.0;
      c.width = 1.0;
      c.nx = 4;
      c.ny = 4;
      c.flux = 0.0;
      c.dt = 10.0;
      c.reference_time = 10.0;
      c.window = {0.0, 1.0};
      break;
    case CaseKind::Manufactured:
      c.length = 1.0;
      c.spatial_dim = 1;
      c.nx = 100;
      c.flux = 0.0;
      c.dt = 0.01;
      c.reference_time = 0.1;
      c.window = {0.0, 1.0};
      break;
  }
  return c;
}

CaseConfig parse_config(std::string_view text) {
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("", fmt::format("config syntax error at line {}: {}", e.line(), e.message()));
  }
  for (const auto& [section, body] : tree) {
    const auto it = known_keys().find(section);
    if (it == known_keys().end()) {
      if (body.empty()) throw ConfigError(section, "keys must live inside a section");
      throw ConfigError(section, "unknown section");
    }
    for (const auto& [key, value] : body) {
      if (!it->second.contains(key)) throw ConfigError(section + "." + key, "unknown key");
    }
  }
  auto get = [&](const std::string& field) -> std::optional<std::string> {
    if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(field, '.'))) return *v;
    return std::nullopt;
  };

  CaseConfig c = default_config(get("case.kind") ? parse_case_kind(*get("case.kind")) : CaseKind::Rod);
  auto num = [&](const char* field, double& target) {
    if (auto v = get(field)) target = to_double(field, *v);
  };
  auto size = [&](const char* field, std::size_t& target) {
    if (auto v = get(field)) target = to_size(field, *v);
  };
  auto integer = [&](const char* field, int& target) {
    if (auto v = get(field)) target = static_cast<int>(to_integer(field, *v));
  };

  num("geometry.length", c.length);
  num("geometry.width", c.width);
  integer("geometry.spatial_dim", c.spatial_dim);
  size("geometry.nx", c.nx);
  size("geometry.ny", c.ny);
  num("material.alpha", c.alpha);
  num("material.flux", c.flux);
  num("time.dt", c.dt);
  size("time.n_steps", c.n_steps);
  integer("time.time_layers", c.time_layers);
  if (auto v = get("discretization.scheme")) c.scheme = parse_scheme(*v);
  if (auto v = get("discretization.jump_mode")) {
    c.jump_mode = parse_jump_mode(*v);
    c.jump_mode_explicit = true;
  }
  integer("discretization.quadrature_order", c.quadrature_order);
  num("solver.tol", c.solver_tol);
  integer("solver.max_iter", c.max_iter);
  num("error.window_start", c.window.lo);
  num("error.window_end", c.window.hi);
  num("error.reference_time", c.reference_time);
  if (auto v = get("error.norm")) c.norm = parse_norm(*v);
  num("motion.vx", c.motion.velocity[0]);
  num("motion.vy", c.motion.velocity[1]);
  num("motion.total_time", c.motion.total_time);
  if (auto v = get("output.directory")) c.output_dir = *v;
  if (auto v = get("output.vtk")) c.write_vtk = to_bool("output.vtk", *v);
  return c;
}

CaseConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string serialize(const CaseConfig& c) {
  std::string out;
  auto line = [&](std::string_view key, const auto& value) { out += fmt::format("{} = {}\n", key, value); };
  out += "[case]\n";
  line("kind", to_string(c.kind));
  out += "\n[geometry]\n";
  line("length", c.length);
  line("width", c.width);
  line("spatial_dim", c.spatial_dim);
  line("nx", c.nx);
  line("ny", c.ny);
  out += "\n[material]\n";
  line("alpha", c.alpha);
  line("flux", c.flux);
  out += "\n[time]\n";
  line("dt", c.dt);
  line("n_steps", c.n_steps);
  line("time_layers", c.time_layers);
  out += "\n[discretization]\n";
  line("scheme", to_string(c.scheme));
  if (c.jump_mode_explicit) line("jump_mode", to_string(c.jump_mode));
  line("quadrature_order", c.quadrature_order);
  out += "\n[solver]\n";
  line("tol", c.solver_tol);
  line("max_iter", c.max_iter);
  out += "\n[error]\n";
  line("window_start", c.window.lo);
  line("window_end", c.window.hi);
  line("reference_time", c.reference_time);
  line("norm", norm_name(c.norm));
  out += "\n[motion]\n";
  line("vx", c.motion.velocity[0]);
  line("vy", c.motion.velocity[1]);
  line("total_time", c.motion.total_time);
  out += "\n[output]\n";
  line("directory", c.output_dir);
  line("vtk", c.write_vtk ? "true" : "false");
  return out;
}

std::size_t effective_steps(const CaseConfig& c) {
  if (c.n_steps > 0) return c.n_steps;
  const double horizon = c.kind == CaseKind::Moving ? c.motion.total_time : c.reference_time;
  const double ratio = horizon / c.dt;
  const double steps = std::round(ratio);
  if (steps < 1.0 || std::abs(ratio - steps) > 1e-9 * std::max(1.0, steps)) {
    throw ConfigError("time.dt", fmt::format("{} is not a whole fraction of the end time {}; set time.n_steps",
                                             c.dt, horizon));
  }
  return static_cast<std::size_t>(steps);
}

std::vector<std::string> validate(const CaseConfig& c) {
  auto positive = [](const char* field, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(field, fmt::format("must be positive, got {}", v));
  };
  positive("geometry.length", c.length);
  positive("geometry.width", c.width);
  if (c.spatial_dim != 1 && c.spatial_dim != 2) throw ConfigError("geometry.spatial_dim", "must be 1 or 2");
  if (c.nx < 1) throw ConfigError("geometry.nx", "must be at least 1");
  if (c.ny < 1) throw ConfigError("geometry.ny", "must be at least 1");
  if (!(c.alpha >= 0.0) || !std::isfinite(c.alpha)) throw ConfigError("material.alpha", "must be non-negative");
  if (!std::isfinite(c.flux)) throw ConfigError("material.flux", "must be finite");
  positive("time.dt", c.dt);
  if (c.time_layers < 1) throw ConfigError("time.time_layers", "must be at least 1");
  if (c.quadrature_order < 1 || c.quadrature_order > ReferenceElement::kMaxOrder) {
    throw ConfigError("discretization.quadrature_order",
                      fmt::format("must be in [1, {}]", ReferenceElement::kMaxOrder));
  }
  positive("solver.tol", c.solver_tol);
  if (c.max_iter < 1) throw ConfigError("solver.max_iter", "must be at least 1");
  if (!(c.window.lo < c.window.hi)) throw ConfigError("error.window_end", "must exceed error.window_start");
  positive("error.reference_time", c.reference_time);
  for (double v : c.motion.velocity) {
    if (!std::isfinite(v)) throw ConfigError("motion.vx", "velocity must be finite");
  }
  positive("motion.total_time", c.motion.total_time);
  if (c.output_dir.empty()) throw ConfigError("output.directory", "must not be empty");
  if (c.kind == CaseKind::Moving && c.scheme != Scheme::SpaceTime) {
    throw ConfigError("discretization.scheme", "the moving case needs the space-time scheme");
  }
  if (c.kind == CaseKind::Moving && c.spatial_dim != 2) {
    throw ConfigError("geometry.spatial_dim", "the moving case is two-dimensional");
  }
  effective_steps(c);

  std::vector<std::string> warnings;
  if (c.scheme != Scheme::SpaceTime && c.jump_mode_explicit) {
    warnings.push_back(fmt::format("discretization.jump_mode is ignored for the {} scheme", to_string(c.scheme)));
  }
  if (c.scheme != Scheme::SpaceTime && c.time_layers != 1) {
    warnings.push_back(fmt::format("time.time_layers is ignored for the {} scheme", to_string(c.scheme)));
  }
  return warnings;
}

void apply_desk_scale(CaseConfig& c) { c.nx = std::min(c.nx, kDeskMaxNx); }

}  // namespace stheat
