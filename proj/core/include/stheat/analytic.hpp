#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>

#include "stheat/mesh.hpp"

namespace stheat {

// Rational Chebyshev approximations (W. J. Cody, Math. Comp. 1969) for the
// error function family; near full double precision over the whole real line.
double erf(double x);
double erfc(double x);
double erfcx(double x);  // exp(x^2) erfc(x)

/// Temperature of a semi-infinite rod, initially at zero, heated by unit flux
/// at x = 0 with unit diffusivity:
///   T = 2 sqrt(t/pi) [exp(-x^2/4t) - x/2 sqrt(pi/t) erfc(x / 2 sqrt t)]
/// The bracket is evaluated without cancellation for large x / sqrt(t).
/// Throws for t <= 0. The expression is analytic in x, so x < 0 is accepted.
double rod_exact(double x, double t);

/// Decaying cosine mode on [0, length] with adiabatic ends.
double cosine_mode_exact(double x, double t, double length, double alpha);

enum class NormVariant {
  Rms,          // sqrt(sum e^2 / N)
  RootSumOverN  // sqrt(sum e^2) / N
};

struct ErrorWindow {
  double lo = 0.0;
  double hi = 2.0;
  bool contains(double x) const { return x >= lo && x <= hi; }
};

struct ErrorReport {
  double dt = 0.0;  // layer thickness for space-time runs
  std::string scheme;
  double error = 0.0;
  std::size_t n_points = 0;
  ErrorWindow window;
};

/// Error over the nodes whose x lies in `window`. Throws if none do.
ErrorReport error_norm(std::span<const SpatialPoint> points, std::span<const double> numerical,
                       const std::function<double(const SpatialPoint&)>& reference, ErrorWindow window = {},
                       NormVariant variant = NormVariant::Rms);
ErrorReport error_norm(std::span<const SpatialPoint> points, std::span<const double> numerical,
                       std::span<const double> reference, ErrorWindow window = {},
                       NormVariant variant = NormVariant::Rms);

}  // namespace stheat
