#pragma once

#include <Eigen/Core>
#include <cmath>
#include <string>
#include <utility>

#include "framefit/errors.hpp"
#include "framefit/jacobi.hpp"
#include "framefit/quadrature.hpp"

namespace framefit {

// The m+1 equispaced points x_k = -1 + 2k/m, endpoints included.
template <typename Scalar = double>
struct EquispacedGrid {
  Eigen::Index m{};
  Eigen::VectorX<Scalar> nodes;
};

template <typename Scalar = double>
EquispacedGrid<Scalar> make_grid(Eigen::Index m) {
  if (m < 1) throw ParameterError("equispaced grid needs m >= 1");
  EquispacedGrid<Scalar> g;
  g.m = m;
  g.nodes.resize(m + 1);
  for (Eigen::Index k = 0; k <= m; ++k)
    g.nodes(k) = Scalar(-1) + 2 * Scalar(k) / Scalar(m);
  return g;
}

// Unscaled point values f(x_k); the sqrt(2/(m+1)) factor belongs to assembly.
template <typename Scalar = double>
struct SampleVector {
  EquispacedGrid<Scalar> grid;
  Eigen::VectorX<Scalar> values;
};

template <typename Scalar, typename F>
SampleVector<Scalar> sample(F&& f, const EquispacedGrid<Scalar>& grid) {
  SampleVector<Scalar> s;
  s.grid = grid;
  s.values.resize(grid.nodes.size());
  for (Eigen::Index k = 0; k < grid.nodes.size(); ++k) s.values(k) = f(grid.nodes(k));
  return s;
}

namespace detail {
template <typename Scalar>
void require_same_grid(const SampleVector<Scalar>& f, const SampleVector<Scalar>& g) {
  if (f.grid.m != g.grid.m || f.values.size() != g.values.size())
    throw ShapeError("sample vectors live on different grids");
}
}  // namespace detail

// (2/(m+1)) sum_k f(x_k) g(x_k)
template <typename Scalar>
Scalar discrete_inner(const SampleVector<Scalar>& f, const SampleVector<Scalar>& g) {
  detail::require_same_grid(f, g);
  return Scalar(2) / Scalar(f.grid.m + 1) * f.values.dot(g.values);
}

template <typename Scalar>
Scalar discrete_norm2(const SampleVector<Scalar>& f) {
  return std::sqrt(Scalar(2) / Scalar(f.grid.m + 1)) * f.values.norm();
}

template <typename Scalar>
Scalar discrete_sup(const SampleVector<Scalar>& f) {
  return f.values.cwiseAbs().maxCoeff();
}

// Weighted L2 norm on [-gamma, gamma] of a polynomial given by frame
// coefficients: exactly the Euclidean norm, by orthonormality.
template <typename Scalar, typename Derived>
Scalar weighted_l2_norm_extended(const Eigen::MatrixBase<Derived>& coeffs,
                                 const FrameSystem<Scalar>& sys) {
  if (coeffs.size() != sys.max_degree() + 1)
    throw ShapeError("coefficient vector length must equal max_degree + 1");
  return coeffs.norm();
}

// Independent quadrature path for the same norm: substitute x = gamma t, so
// int |p|^2 w(x/gamma) dx = gamma int |p(gamma t)|^2 w(t) dt, which a Gauss
// rule for w integrates exactly for polynomial p.
template <typename Scalar, typename Derived>
Scalar weighted_l2_norm_quadrature(const Eigen::MatrixBase<Derived>& coeffs,
                                   const FrameSystem<Scalar>& sys,
                                   Eigen::Index num_nodes = 0) {
  if (coeffs.size() != sys.max_degree() + 1)
    throw ShapeError("coefficient vector length must equal max_degree + 1");
  if (num_nodes <= 0) num_nodes = 4 * (sys.max_degree() + 1);
  const QuadratureRule<Scalar> rule = gauss_jacobi(num_nodes, sys.params());
  const Eigen::VectorX<Scalar> vals =
      sys.rows((sys.gamma() * rule.nodes).eval()) * coeffs.derived();
  return std::sqrt(sys.gamma() * rule.weights.dot(vals.cwiseAbs2()));
}

// Max |f| over `points` equispaced nodes of [a, b], endpoints included.
template <typename Scalar, typename F>
Scalar sup_norm_dense(F&& f, Scalar a, Scalar b, Eigen::Index points = 10000) {
  if (points < 2) throw ParameterError("dense sup norm needs at least 2 points");
  Scalar best = Scalar(0);
  for (Eigen::Index k = 0; k < points; ++k) {
    const Scalar x = a + (b - a) * Scalar(k) / Scalar(points - 1);
    const Scalar v = f(x);
    if (!std::isfinite(v)) throw EvaluationError("function value is not finite", double(x));
    best = std::max(best, std::abs(v));
  }
  return best;
}

}  // namespace framefit
