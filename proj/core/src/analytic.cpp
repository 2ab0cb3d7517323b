#include "stheat/analytic.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace stheat {

namespace {

enum class ErfKind { Erf, Erfc, Erfcx };

constexpr std::array<double, 5> kA = {3.16112374387056560e00, 1.13864154151050156e02, 3.77485237685302021e02,
                                      3.20937758913846947e03, 1.85777706184603153e-1};
constexpr std::array<double, 4> kB = {2.36012909523441209e01, 2.44024637934444173e02, 1.28261652607737228e03,
                                      2.84423683343917062e03};
constexpr std::array<double, 9> kC = {5.64188496988670089e-1, 8.88314979438837594e00, 6.61191906371416295e01,
                                      2.98635138197400131e02, 8.81952221241769090e02, 1.71204761263407058e03,
                                      2.05107837782607147e03, 1.23033935479799725e03, 2.15311535474403846e-8};
constexpr std::array<double, 8> kD = {1.57449261107098347e01, 1.17693950891312499e02, 5.37181101862009858e02,
                                      1.62138957456669019e03, 3.29079923573345963e03, 4.36261909014324716e03,
                                      3.43936767414372164e03, 1.23033935480374942e03};
constexpr std::array<double, 6> kP = {3.05326634961232344e-1, 3.60344899949804439e-1, 1.25781726111229246e-1,
                                      1.60837851487422766e-2, 6.58749161529837803e-4, 1.63153871373020978e-2};
constexpr std::array<double, 5> kQ = {2.56852019228982242e00, 1.87295284992346047e00, 5.27905102951428412e-1,
                                      6.05183413124413191e-2, 2.33520497626869185e-3};

constexpr double kInvSqrtPi = 0.56418958354775628695;
constexpr double kThresh = 0.46875;
constexpr double kXsmall = 1.11e-16;
constexpr double kXbig = 26.543;
constexpr double kXhuge = 6.71e7;
constexpr double kXmax = 2.53e307;
constexpr double kXneg = -26.628;

// exp(-y^2) with y^2 split so the large part is exact.
double exp_neg_square(double y) {
  const double head = std::trunc(y * 16.0) / 16.0;
  const double del = (y - head) * (y + head);
  return std::exp(-head * head) * std::exp(-del);
}

double calerf(double x, ErfKind kind) {
  const double y = std::abs(x);
  double result = 0.0;
  if (y <= kThresh) {
    const double ysq = y > kXsmall ? y * y : 0.0;
    double num = kA[4] * ysq;
    double den = ysq;
    for (int i = 0; i < 3; ++i) {
      num = (num + kA[i]) * ysq;
      den = (den + kB[i]) * ysq;
    }
    result = x * (num + kA[3]) / (den + kB[3]);
    if (kind != ErfKind::Erf) result = 1.0 - result;
    if (kind == ErfKind::Erfcx) result *= std::exp(ysq);
    return result;
  }
  if (y <= 4.0) {
    double num = kC[8] * y;
    double den = y;
    for (int i = 0; i < 7; ++i) {
      num = (num + kC[i]) * y;
      den = (den + kD[i]) * y;
    }
    result = (num + kC[7]) / (den + kD[7]);
    if (kind != ErfKind::Erfcx) result *= exp_neg_square(y);
  } else if (y >= kXbig && (kind != ErfKind::Erfcx || y >= kXmax)) {
    result = 0.0;
  } else if (y >= kXhuge) {
    result = kInvSqrtPi / y;
  } else {
    const double ysq = 1.0 / (y * y);
    double num = kP[5] * ysq;
    double den = ysq;
    for (int i = 0; i < 4; ++i) {
      num = (num + kP[i]) * ysq;
      den = (den + kQ[i]) * ysq;
    }
    result = ysq * (num + kP[4]) / (den + kQ[4]);
    result = (kInvSqrtPi - result) / y;
    if (kind != ErfKind::Erfcx) result *= exp_neg_square(y);
  }

  // result holds erfc(|x|), or erfcx(|x|); fold in the sign of x.
  switch (kind) {
    case ErfKind::Erf:
      result = (0.5 - result) + 0.5;
      return x < 0.0 ? -result : result;
    case ErfKind::Erfc:
      return x < 0.0 ? 2.0 - result : result;
    case ErfKind::Erfcx:
      if (x >= 0.0) return result;
      if (x < kXneg) return std::numeric_limits<double>::max();
      {
        const double head = std::trunc(x * 16.0) / 16.0;
        const double del = (x - head) * (x + head);
        const double e = std::exp(head * head) * std::exp(del);
        return (e + e) - result;
      }
  }
  return result;
}

// Tail R of the erfc continued fraction,
//   sqrt(pi) erfcx(z) = 1 / (z + R),  R = (1/2) / (z + 1 / (z + (3/2) / (z + ...))),
// by the modified Lentz method. Converges quickly for z >= 3.
double erfc_fraction_tail(double z) {
  constexpr double tiny = 1e-300;
  double f = tiny;
  double c = tiny;
  double d = 0.0;
  for (int k = 1; k <= 500; ++k) {
    const double a = 0.5 * k;
    d = z + a * d;
    if (std::abs(d) < tiny) d = tiny;
    c = z + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return f;
}

}  // namespace

double erf(double x) { return calerf(x, ErfKind::Erf); }
double erfc(double x) { return calerf(x, ErfKind::Erfc); }
double erfcx(double x) { return calerf(x, ErfKind::Erfcx); }

double rod_exact(double x, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("rod_exact: t must be positive");
  const double sqrt_t = std::sqrt(t);
  const double z = x / (2.0 * sqrt_t);
  const double prefactor = 2.0 * sqrt_t / std::sqrt(std::numbers::pi);
  if (z < 3.0) {
    return prefactor * (std::exp(-z * z) - z * std::sqrt(std::numbers::pi) * erfc(z));
  }
  // 1 - sqrt(pi) z erfcx(z) = R / (z + R) without cancellation.
  const double tail = erfc_fraction_tail(z);
  return prefactor * exp_neg_square(z) * (tail / (z + tail));
}

double cosine_mode_exact(double x, double t, double length, double alpha) {
  const double k = std::numbers::pi / length;
  return std::cos(k * x) * std::exp(-alpha * k * k * t);
}

ErrorReport error_norm(std::span<const SpatialPoint> points, std::span<const double> numerical,
                       std::span<const double> reference, ErrorWindow window, NormVariant variant) {
  if (points.size() != numerical.size() || points.size() != reference.size()) {
    throw std::invalid_argument("error_norm: size mismatch");
  }
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!window.contains(points[i][0])) continue;
    const double e = numerical[i] - reference[i];
    sum += e * e;
    ++count;
  }
  if (count == 0) throw std::invalid_argument("error_norm: no evaluation points in window");
  ErrorReport report;
  report.n_points = count;
  report.window = window;
  report.error = variant == NormVariant::Rms ? std::sqrt(sum / static_cast<double>(count))
                                             : std::sqrt(sum) / static_cast<double>(count);
  return report;
}

ErrorReport error_norm(std::span<const SpatialPoint> points, std::span<const double> numerical,
                       const std::function<double(const SpatialPoint&)>& reference, ErrorWindow window,
                       NormVariant variant) {
  std::vector<double> values(points.size(), 0.0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (window.contains(points[i][0])) values[i] = reference(points[i]);
  }
  return error_norm(points, numerical, std::span<const double>(values), window, variant);
}

}  // namespace stheat
