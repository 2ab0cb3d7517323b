#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <memory>

#include "stheat/heat_solver.hpp"
#include "stheat/mesh.hpp"

namespace stheat {

/// Spatial FE operators for the semi-discrete system M dT/dt + alpha K T = f.
struct SemiDiscreteOperator {
  Eigen::SparseMatrix<double> mass;
  Eigen::SparseMatrix<double> stiffness;  // without alpha
  Eigen::VectorXd load;                   // Neumann flux load
  double alpha = 1.0;
};

/// Dirichlet conditions are not supported by the semi-discrete baselines.
SemiDiscreteOperator assemble_spatial(const SpatialMesh& mesh, const MaterialParams& material,
                                      const BoundaryConditions& bcs,
                                      int quadrature_order = ReferenceElement::kDefaultOrder);

/// theta-scheme with a cached factorization of (M + theta dt alpha K):
///   (M + theta dt alpha K) T1 = (M - (1 - theta) dt alpha K) T0 + dt f
/// theta = 1 is implicit Euler, theta = 0.5 Crank-Nicolson.
class ThetaStepper {
 public:
  ThetaStepper(const SemiDiscreteOperator& op, double dt, double theta);

  Eigen::VectorXd step(const Eigen::VectorXd& current) const;
  double dt() const { return dt_; }
  double theta() const { return theta_; }

 private:
  double dt_;
  double theta_;
  Eigen::SparseMatrix<double> explicit_part_;
  Eigen::VectorXd forcing_;  // dt * f
  std::shared_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> factor_;
};

Eigen::VectorXd step_theta(const SemiDiscreteOperator& op, const Eigen::VectorXd& current, double dt, double theta);

/// Runs n_steps of the theta-scheme from `initial`.
Eigen::VectorXd run_theta(const SemiDiscreteOperator& op, Eigen::VectorXd initial, double dt, double theta,
                          std::size_t n_steps);

}  // namespace stheat
