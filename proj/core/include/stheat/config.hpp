#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stheat/analytic.hpp"
#include "stheat/heat_solver.hpp"
#include "stheat/moving_domain.hpp"

namespace stheat {

enum class CaseKind { Rod, Moving, Manufactured };
enum class Scheme { SpaceTime, ImplicitEuler, CrankNicolson };

std::string_view to_string(CaseKind kind);
std::string_view to_string(Scheme scheme);
CaseKind parse_case_kind(std::string_view name);
Scheme parse_scheme(std::string_view name);
JumpMode parse_jump_mode(std::string_view name);

/// Validation or parse failure; `field()` is "section.key" where known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// One experiment. Defaults are those of `default_config(kind)`.
struct CaseConfig {
  CaseKind kind = CaseKind::Rod;

  // [geometry]
  double length = 20.0;
  double width = 1.0;
  int spatial_dim = 2;
  std::size_t nx = 1000;
  std::size_t ny = 1;

  // [material]
  double alpha = 1.0;
  double flux = 1.0;  // inflow at the left end (rod)

  // [time]
  double dt = 0.1;           // slab duration, or step for semi-discrete schemes
  std::size_t n_steps = 0;   // 0: reference_time / dt
  int time_layers = 1;

  // [discretization]
  Scheme scheme = Scheme::SpaceTime;
  JumpMode jump_mode = JumpMode::Flipped;
  bool jump_mode_explicit = false;
  int quadrature_order = 2;

  // [solver]
  double solver_tol = 1e-12;
  int max_iter = 10000;

  // [error]
  ErrorWindow window{0.0, 2.0};
  double reference_time = 1.0;
  NormVariant norm = NormVariant::Rms;

  // [motion]
  PrescribedMotion motion;

  // [output]
  std::string output_dir = "out";
  bool write_vtk = false;

  friend bool operator==(const CaseConfig&, const CaseConfig&);
};

bool operator==(const ErrorWindow& a, const ErrorWindow& b);

CaseConfig default_config(CaseKind kind);

/// INI text with sections. Missing keys take the case defaults; unknown
/// sections or keys are errors.
CaseConfig parse_config(std::string_view text);
CaseConfig load_config(const std::string& path);
std::string serialize(const CaseConfig& config);

/// Throws ConfigError on the first invalid field. Returns warnings.
std::vector<std::string> validate(const CaseConfig& config);

/// Steps needed to reach the reference time (or the total motion time).
std::size_t effective_steps(const CaseConfig& config);

/// Caps the mesh at the desk-scale size of 2000 elements in length.
void apply_desk_scale(CaseConfig& config);
inline constexpr std::size_t kDeskMaxNx = 2000;

}  // namespace stheat
