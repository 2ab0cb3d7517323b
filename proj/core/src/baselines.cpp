#include "stheat/baselines.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace stheat {

SemiDiscreteOperator assemble_spatial(const SpatialMesh& mesh, const MaterialParams& material,
                                      const BoundaryConditions& bcs, int quadrature_order) {
  validate(bcs);
  if (material.alpha < 0.0) throw std::invalid_argument("assemble_spatial: alpha must be non-negative");
  const ReferenceElement ref(mesh.dim, false, quadrature_order);
  const auto n = static_cast<Eigen::Index>(mesh.nodes.size());
  const std::size_t npe = mesh.nodes_per_element();
  std::vector<Eigen::Triplet<double>> mass;
  std::vector<Eigen::Triplet<double>> stiffness;
  mass.reserve(mesh.element_count() * npe * npe);
  stiffness.reserve(mesh.element_count() * npe * npe);

  MappedBasis basis;
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    map_spatial_element(mesh, e, ref, basis);
    const auto conn = mesh.element(e);
    for (std::size_t a = 0; a < npe; ++a) {
      for (std::size_t b = 0; b < npe; ++b) {
        double m = 0.0;
        double k = 0.0;
        for (std::size_t q = 0; q < basis.point_count; ++q) {
          m += basis.weights[q] * basis.value(q, a) * basis.value(q, b);
          double grad = 0.0;
          for (int i = 0; i < mesh.dim; ++i) grad += basis.dx(q, a, i) * basis.dx(q, b, i);
          k += basis.weights[q] * grad;
        }
        mass.emplace_back(static_cast<int>(conn[a]), static_cast<int>(conn[b]), m);
        stiffness.emplace_back(static_cast<int>(conn[a]), static_cast<int>(conn[b]), k);
      }
    }
  }

  SemiDiscreteOperator op;
  op.alpha = material.alpha;
  op.mass.resize(n, n);
  op.mass.setFromTriplets(mass.begin(), mass.end());
  op.stiffness.resize(n, n);
  op.stiffness.setFromTriplets(stiffness.begin(), stiffness.end());
  op.load = Eigen::VectorXd::Zero(n);

  const auto facets = tag_spatial_boundary(mesh);
  for (const auto& bc : bcs) {
    const bool present = std::any_of(facets.begin(), facets.end(), [&](const BoundaryFacet& f) { return f.tag == bc.tag; });
    if (!present) throw std::invalid_argument("assemble_spatial: unknown boundary tag '" + std::string(to_string(bc.tag)) + "'");
    if (bc.kind == BcKind::Dirichlet) {
      throw std::invalid_argument("assemble_spatial: Dirichlet conditions are not supported by the semi-discrete baselines");
    }
  }
  for (const auto& facet : facets) {
    const BoundaryCondition* bc = nullptr;
    for (const auto& candidate : bcs) {
      if (candidate.tag == facet.tag) bc = &candidate;
    }
    if (bc == nullptr || bc->kind != BcKind::NeumannFlux) continue;
    const MappedFace face = map_spatial_face(mesh, facet.element, facet.local_face, ref);
    const auto conn = mesh.element(facet.element);
    for (std::size_t a : ref.cell().face_nodes(facet.local_face)) {
      double load = 0.0;
      for (std::size_t q = 0; q < face.point_count; ++q) load += face.weights[q] * face.value(q, a);
      op.load[static_cast<Eigen::Index>(conn[a])] += bc->value * load;
    }
  }
  return op;
}

ThetaStepper::ThetaStepper(const SemiDiscreteOperator& op, double dt, double theta)
    : dt_(dt), theta_(theta) {
  if (theta != 1.0 && theta != 0.5) throw std::invalid_argument("ThetaStepper: theta must be 1.0 or 0.5");
  if (!(dt > 0.0)) throw std::invalid_argument("ThetaStepper: dt must be positive");
  const Eigen::SparseMatrix<double> lhs = op.mass + (theta * dt * op.alpha) * op.stiffness;
  explicit_part_ = op.mass - ((1.0 - theta) * dt * op.alpha) * op.stiffness;
  forcing_ = dt * op.load;
  factor_ = std::make_shared<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>(lhs);
  if (factor_->info() != Eigen::Success) throw std::runtime_error("ThetaStepper: factorization failed");
}

Eigen::VectorXd ThetaStepper::step(const Eigen::VectorXd& current) const {
  if (current.size() != forcing_.size()) throw std::invalid_argument("ThetaStepper: state size mismatch");
  const Eigen::VectorXd rhs = explicit_part_ * current + forcing_;
  Eigen::VectorXd next = factor_->solve(rhs);
  if (factor_->info() != Eigen::Success || !next.allFinite()) throw std::runtime_error("ThetaStepper: solve failed");
  return next;
}

Eigen::VectorXd step_theta(const SemiDiscreteOperator& op, const Eigen::VectorXd& current, double dt, double theta) {
  return ThetaStepper(op, dt, theta).step(current);
}

Eigen::VectorXd run_theta(const SemiDiscreteOperator& op, Eigen::VectorXd initial, double dt, double theta,
                          std::size_t n_steps) {
  const ThetaStepper stepper(op, dt, theta);
  for (std::size_t k = 0; k < n_steps; ++k) initial = stepper.step(initial);
  return initial;
}

}  // namespace stheat
