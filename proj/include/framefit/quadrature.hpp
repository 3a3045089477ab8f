#pragma once

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "framefit/errors.hpp"
#include "framefit/jacobi.hpp"

namespace framefit {

template <typename Scalar = double>
struct QuadratureRule {
  Eigen::VectorX<Scalar> nodes;    // ascending, inside (-1, 1)
  Eigen::VectorX<Scalar> weights;  // positive, summing to the weight's total mass
};

// Gauss rule for the weight (1-x)^alpha (1+x)^beta via the Golub-Welsch
// symmetric tridiagonal eigenproblem built from the monic recurrence.
template <typename Scalar>
QuadratureRule<Scalar> gauss_jacobi(Eigen::Index num_nodes, const JacobiParams<Scalar>& params) {
  params.validate();
  if (num_nodes < 1) throw ParameterError("quadrature rule needs at least one node");
  const Scalar a = params.alpha, b = params.beta, apb = a + b;

  Eigen::VectorX<Scalar> diag(num_nodes), sub(num_nodes > 1 ? num_nodes - 1 : 0);
  diag(0) = (b - a) / (apb + 2);
  for (Eigen::Index k = 1; k < num_nodes; ++k) {
    const Scalar fk = Scalar(k);
    diag(k) = (b * b - a * a) / ((2 * fk + apb) * (2 * fk + apb + 2));
    Scalar bk;
    if (k == 1)
      bk = 4 * (a + 1) * (b + 1) / ((apb + 2) * (apb + 2) * (apb + 3));
    else
      bk = 4 * fk * (fk + a) * (fk + b) * (fk + apb) /
           ((2 * fk + apb) * (2 * fk + apb) * (2 * fk + apb + 1) * (2 * fk + apb - 1));
    sub(k - 1) = std::sqrt(bk);
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixX<Scalar>> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw NumericalError("tridiagonal eigensolve for quadrature nodes failed");

  const Scalar mu0 = norm_constant(0, params);  // total mass of the weight
  QuadratureRule<Scalar> rule;
  rule.nodes = solver.eigenvalues();
  rule.weights = mu0 * solver.eigenvectors().row(0).transpose().array().square();
  return rule;
}

template <typename Scalar = double>
QuadratureRule<Scalar> gauss_legendre(Eigen::Index num_nodes) {
  return gauss_jacobi(num_nodes, JacobiParams<Scalar>{Scalar(0), Scalar(0)});
}

}  // namespace framefit
