// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "stheat/analytic.hpp"
#include "stheat/baselines.hpp"
#include "stheat/experiments.hpp"
#include "stheat/fem.hpp"
#include "stheat/heat_solver.hpp"
#include "stheat/mesh.hpp"
#include "stheat/moving_domain.hpp"

using namespace stheat;

namespace {

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] %d. %s: %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

CaseConfig rod(std::size_t nx, double dt, Scheme scheme = Scheme::SpaceTime, JumpMode mode = JumpMode::Flipped) {
  CaseConfig c = default_config(CaseKind::Rod);
  c.nx = nx;
  c.dt = dt;
  c.scheme = scheme;
  c.jump_mode = mode;
  return c;
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// 1. Rod accuracy on the comparison meshes.
void rod_accuracy() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (auto mode : {JumpMode::Classical, JumpMode::Flipped}) {
    const double e1 = solve_case(rod(1000, 0.1, Scheme::SpaceTime, mode)).report.error;
    const double e2 = solve_case(rod(kDeskMaxNx, 0.05, Scheme::SpaceTime, mode)).report.error;
    ok = ok && std::isfinite(e1) && std::isfinite(e2) && e2 < e1;
    detail += fmt("%s e(1000,0.1)=%.3e e(2000,0.05)=%.3e; ", std::string(to_string(mode)).c_str(), e1, e2);
  }
  const double desk = seconds_since(start);
  ok = ok && desk < 120.0;
  const double full1 = solve_case(rod(1000, 0.1)).report.error;
  const double full2 = solve_case(rod(10000, 0.05)).report.error;
  ok = ok && std::isfinite(full2) && full2 < full1;
  detail += fmt("paper mesh e(10000,0.05)=%.3e; desk runtime %.1f s", full2, desk);
  report(1, "rod accuracy", ok, detail);
}

// 2. Classical and flipped jump treatment agree far below the error.
void mode_equivalence() {
  bool ok = true;
  std::string detail;
  for (const auto& row : run_mode_diff(default_config(CaseKind::Rod), table2_entries(true))) {
    const double smallest = std::min(row.error_classical, row.error_flipped);
    ok = ok && row.difference * 100.0 <= smallest && row.max_relative_node_diff <= 1e-10;
    detail += fmt("nx=%zu: diff=%.2e err=%.2e rel=%.2e; ", row.nx, row.difference, smallest,
                  row.max_relative_node_diff);
  }
  report(2, "mode equivalence", ok, detail);
}

// 3 and 4 share one sweep on the desk mesh.
void convergence_and_floor() {
  const std::vector<double> dts{0.2, 0.1, 0.05, 0.025, 0.0125, 0.00625, 0.003125};
  CaseConfig base = rod(kDeskMaxNx, 0.1);
  const auto st = run_convergence(base, dts, {Scheme::SpaceTime});
  const auto ie = run_convergence(base, {dts.begin(), dts.begin() + 4}, {Scheme::ImplicitEuler});
  const double floor = st.back().error;

  bool ok3 = true;
  std::string d3 = "IE orders";
  for (std::size_t k = 1; k < ie.size(); ++k) {
    ok3 = ok3 && std::abs(ie[k].observed_order - 1.0) <= 0.15;
    d3 += fmt(" %.3f", ie[k].observed_order);
  }
  for (std::size_t k = 0; k < ie.size(); ++k) ok3 = ok3 && st[k].error < ie[k].error;
  d3 += "; ST/IE";
  for (std::size_t k = 0; k < ie.size(); ++k) d3 += fmt(" %.1e/%.1e", st[k].error, ie[k].error);
  std::size_t before_floor = 0;
  d3 += "; ST ratios before floor";
  for (std::size_t k = 1; k < ie.size(); ++k) {
    // A pair counts as pre-floor while its coarse error is above twice the plateau.
    if (st[k - 1].error <= 2.0 * floor) break;
    const double ratio = st[k - 1].error / st[k].error;
    ok3 = ok3 && ratio >= 3.0 && st[k].observed_order > ie[k].observed_order;
    d3 += fmt(" %.2f", ratio);
    ++before_floor;
  }
  ok3 = ok3 && before_floor >= 1;
  report(3, "convergence orders", ok3, d3);

  bool ok4 = true;
  std::string d4 = "ratios";
  for (std::size_t k = 4; k < st.size(); ++k) {
    const double ratio = st[k - 1].error / st[k].error;
    ok4 = ok4 && ratio >= 0.5 && ratio <= 2.0;
    d4 += fmt(" %.4f", ratio);
  }
  d4 += fmt("; plateau %.3e at nx=%zu", floor, kDeskMaxNx);
  report(4, "error floor", ok4, d4);
}

// 5. One slab of ten layers against ten single-layer slabs.
void multi_layer() {
  CaseConfig slabs = rod(1000, 0.1);
  CaseConfig layers = rod(1000, 1.0);
  layers.time_layers = 10;
  const auto a = solve_case(slabs);
  const auto b = solve_case(layers);
  const double diff = error_norm(a.profile.points, a.profile.numeric, std::span<const double>(b.profile.numeric)).error;
  const double smallest = std::min(a.report.error, b.report.error);
  report(5, "multi-layer equivalence", diff <= 0.1 * smallest,
         fmt("profile diff=%.3e vs 10%% of min error %.3e (10 slabs %.3e, 10 layers %.3e)", diff, 0.1 * smallest,
             a.report.error, b.report.error));
}

// 6. Rigid-body motion of the unit square.
void rigid_body() {
  const auto start = std::chrono::steady_clock::now();
  const SpatialMesh mesh = make_rectangle_mesh(1.0, 1.0, 4, 4);
  const PrescribedMotion motion{{0.1, 0.1}, 10.0};
  bool ok = true;
  double worst = 0.0;
  double gap = 0.0;
  for (std::size_t slabs : {1u, 10u}) {
    const auto r = run_rigid_motion(mesh, motion, slabs, 1, JumpMode::Flipped);
    for (const auto& d : r.final_displacement) worst = std::max(worst, std::abs(std::hypot(d[0], d[1]) - std::sqrt(2.0)));
    gap = std::max(gap, r.max_conformity_gap);
  }
  ok = worst <= 1e-8 && gap == 0.0;
  report(6, "rigid body", ok,
         fmt("max | |d| - sqrt2 | = %.2e, interface gap %.1e, %.2f s", worst, gap, seconds_since(start)));
}

// 7. Property suites in compact form.
void properties() {
  std::mt19937_64 rng(7);
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto mesh_for = [&](int trial) {
    SpatialMesh m = trial % 2 == 0 ? make_interval_mesh(uniform(0.5, 4.0), 5) : make_rectangle_mesh(uniform(0.5, 4.0), uniform(0.5, 2.0), 4, 3);
    const std::size_t row = m.dim == 1 ? 0 : 5;
    if (m.dim == 1) {
      for (std::size_t i = 1; i < 5; ++i) m.nodes[i][0] += uniform(-0.2, 0.2) * m.nodes[1][0];
    } else {
      for (std::size_t j = 1; j < 3; ++j) {
        for (std::size_t i = 1; i < 4; ++i) {
          m.nodes[j * row + i][0] += uniform(-0.05, 0.05);
          m.nodes[j * row + i][1] += uniform(-0.05, 0.05);
        }
      }
    }
    return m;
  };
  std::vector<std::string> failed;
  auto check = [&](const char* name, bool ok) {
    if (!ok) failed.emplace_back(name);
  };

  bool involution = true, unity = true, patch_x = true, patch_t = true, volume = true;
  for (int trial = 0; trial < 20; ++trial) {
    const SpatialMesh mesh = mesh_for(trial);
    const int layers = 1 + trial % 4;
    SpaceTimeSlab slab = extrude(mesh, layers);
    involution = involution && flip_time(flip_time(slab)) == slab;
    if (trial % 3 == 0) slab = flip_time(slab);
    const double dt = uniform(1e-3, 1.0);
    const auto interval = SlabInterval::from_step(uniform(0.0, 3.0), dt);
    const ReferenceElement ref(mesh.dim, true);
    const double a = uniform(-2, 2), b = uniform(-2, 2), r = uniform(-2, 2);
    MappedBasis basis;
    for (std::size_t e = 0; e < slab.element_count(); ++e) {
      map_element(slab, e, interval, ref, basis);
      const auto conn = slab.element(e);
      for (std::size_t q = 0; q < basis.point_count; ++q) {
        double sum = 0, gx = 0, gt = 0;
        for (std::size_t k = 0; k < conn.size(); ++k) {
          const auto& node = slab.nodes[conn[k]];
          sum += basis.value(q, k);
          gx += basis.dx(q, k, 0) * (a * node.x[0] + b * node.x[1]);
          gt += basis.dt(q, k) * r * interval.physical_time(node.t, slab.t_min, slab.t_max);
        }
        unity = unity && std::abs(sum - 1.0) <= 1e-14;
        patch_x = patch_x && std::abs(gx - a) <= 1e-9;
        patch_t = patch_t && std::abs(gt - r) <= 1e-9;
      }
      const double measured = std::accumulate(basis.weights.begin(), basis.weights.end(), 0.0);
      const auto sconn = mesh.element(e % mesh.element_count());
      double area = 0.0;
      if (mesh.dim == 1) {
        area = std::abs(mesh.nodes[sconn[1]][0] - mesh.nodes[sconn[0]][0]);
      } else {
        for (std::size_t i = 0; i < 4; ++i) {
          const auto& p = mesh.nodes[sconn[i]];
          const auto& s = mesh.nodes[sconn[(i + 1) % 4]];
          area += 0.5 * (p[0] * s[1] - s[0] * p[1]);
        }
      }
      const double exact = area * dt / layers;
      volume = volume && std::abs(measured - exact) <= 1e-12 * exact;
    }
  }
  check("flip involution", involution);
  check("partition of unity", unity);
  check("spatial patch", patch_x);
  check("temporal patch", patch_t);
  check("quadrature volume", volume);

  bool energy = true, spd = true;
  for (int trial = 0; trial < 6; ++trial) {
    const SpatialMesh mesh = mesh_for(trial);
    HeatCase hc;
    hc.slab = extrude(mesh, 1 + trial % 2);
    hc.problem.material.alpha = uniform(0.2, 2.0);
    hc.mode = trial % 2 == 0 ? JumpMode::Flipped : JumpMode::Classical;
    hc.dt = uniform(0.01, 0.3);
    hc.initial = make_initial_trace(hc.slab, [](const SpatialPoint& x) { return std::cos(x[0]) + x[1]; });
    const auto res = march(hc, 4);
    const auto op = assemble_spatial(mesh, hc.problem.material, {});
    auto integral = [&](const SpaceTimeSlab& s, const SlabTrace& t) {
      const auto v = trace_by_spatial_node(s, t);
      return (op.mass * Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()))).sum();
    };
    const double e0 = integral(hc.slab, res.history.front());
    energy = energy && std::abs(integral(res.final_slab, res.history.back()) - e0) <= 1e-10 * std::abs(e0);

    const Eigen::MatrixXd block(assemble_jump_block(hc.slab, SlabInterval::from_step(0, hc.dt)));
    const auto ns = static_cast<Eigen::Index>(hc.slab.spatial_node_count());
    Eigen::MatrixXd sub(ns, ns);
    for (Eigen::Index i = 0; i < ns; ++i) {
      for (Eigen::Index j = 0; j < ns; ++j) {
        sub(i, j) = block(static_cast<Eigen::Index>(hc.slab.bottom_nodes[i]), static_cast<Eigen::Index>(hc.slab.bottom_nodes[j]));
      }
    }
    spd = spd && (block - block.transpose()).norm() <= 1e-15 &&
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sub).eigenvalues().minCoeff() > 0.0;
  }
  check("energy conservation", energy);
  check("jump block SPD", spd);

  const double h = 1e-4;
  double residual = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double x = uniform(0.05, 6.0), t = uniform(0.2, 3.0);
    const double dt = (rod_exact(x, t + h) - rod_exact(x, t - h)) / (2 * h);
    const double dxx = (rod_exact(x + h, t) - 2 * rod_exact(x, t) + rod_exact(x - h, t)) / (h * h);
    residual = std::max(residual, std::abs(dt - dxx));
  }
  double flux = 0.0;
  for (double t : {0.1, 0.5, 1.0, 2.0}) flux = std::max(flux, std::abs(-(rod_exact(h, t) - rod_exact(-h, t)) / (2 * h) - 1.0));
  check("rod PDE residual", residual <= 1e-6);
  check("rod boundary flux", flux <= 1e-8);

  std::string detail = fmt("PDE residual %.1e, flux error %.1e", residual, flux);
  for (const auto& f : failed) detail += "; failed: " + f;
  report(7, "property suites", failed.empty(), detail);
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria{rod_accuracy, mode_equivalence, convergence_and_floor, multi_layer,
                                                    rigid_body, properties};
  for (const auto& run : criteria) {
    try {
      run();
    } catch (const std::exception& e) {
      std::printf("[FAIL] exception: %s\n", e.what());
      ++failures;
    }
  }
  std::printf("[SKIP] 8. beam results: out of scope, not reproduced\n");
  std::printf("%d criterion check(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
