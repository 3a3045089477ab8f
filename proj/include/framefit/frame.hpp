#pragma once

#include <Eigen/Core>
#include <Eigen/SVD>
#include <cmath>
#include <utility>

#include "framefit/errors.hpp"
#include "framefit/jacobi.hpp"
#include "framefit/sampling.hpp"

namespace framefit {

// Nearest integer to eta * n, half-up; the sample count follows m = eta n.
template <typename Scalar>
Eigen::Index oversample_count(Scalar eta, Eigen::Index n) {
  return static_cast<Eigen::Index>(std::floor(eta * Scalar(n) + Scalar(0.5)));
}

// Full problem description: frame system plus sample count, truncation
// tolerance, and the (informational) oversampling ratio.
template <typename Scalar = double>
struct FrameConfig {
  FrameSystem<Scalar> sys;
  Eigen::Index m;
  Scalar epsilon;
  Scalar eta;

  FrameConfig(FrameSystem<Scalar> system, Eigen::Index last_index, Scalar eps, Scalar ratio)
      : sys(std::move(system)), m(last_index), epsilon(eps), eta(ratio) {
    validate();
  }

  FrameConfig(const FrameSystem<Scalar>& system, Eigen::Index last_index, Scalar eps)
      : FrameConfig(system, last_index, eps, system_ratio(last_index, system.max_degree())) {}

  void validate() const {
    if (m < 1) throw ParameterError("sample index m must be >= 1");
    if (m < sys.max_degree())
      throw ParameterError("least-squares shape requires m >= max degree n");
    if (!(epsilon >= Scalar(0))) throw ParameterError("truncation tolerance must be >= 0");
    if (!(eta >= Scalar(1))) throw ParameterError("oversampling ratio must be >= 1");
  }

 private:
  static Scalar system_ratio(Eigen::Index m, Eigen::Index n) {
    return n >= 1 ? Scalar(m) / Scalar(n) : Scalar(m);
  }
};

template <typename Scalar>
FrameConfig<Scalar> make_config(FrameSystem<Scalar> sys, Scalar eta, Scalar epsilon) {
  const Eigen::Index m = oversample_count(eta, sys.max_degree());
  return FrameConfig<Scalar>(std::move(sys), m, epsilon, eta);
}

// A[k][j] = sqrt(2/(m+1)) phi_j(x_k) on the equispaced grid.
template <typename Scalar = double>
struct DesignMatrix {
  Eigen::MatrixX<Scalar> entries;
  FrameConfig<Scalar> config;
};

template <typename Scalar>
DesignMatrix<Scalar> assemble(const FrameConfig<Scalar>& config) {
  config.validate();
  const EquispacedGrid<Scalar> grid = make_grid<Scalar>(config.m);
  Eigen::MatrixX<Scalar> entries = config.sys.rows(grid.nodes);
  entries *= std::sqrt(Scalar(2) / Scalar(config.m + 1));
  for (Eigen::Index k = 0; k < entries.rows(); ++k)
    for (Eigen::Index j = 0; j < entries.cols(); ++j)
      if (!std::isfinite(entries(k, j)))
        throw AssemblyError("design-matrix entry is not finite", k, j);
  return DesignMatrix<Scalar>{std::move(entries), config};
}

// Thin SVD of the design matrix with the strict kept rule sigma_i > epsilon.
// Singular values are nonincreasing, so the kept set is the prefix
// [0, kept_count).
template <typename Scalar = double>
struct TruncatedFactorization {
  Eigen::MatrixX<Scalar> U;        // (m+1) x (n+1)
  Eigen::VectorX<Scalar> sigma;    // n+1, nonincreasing
  Eigen::MatrixX<Scalar> V;        // (n+1) x (n+1)
  Scalar epsilon{};
  Eigen::Index kept_count{};

  bool is_kept(Eigen::Index i) const { return i >= 0 && i < kept_count; }

  // V Sigma^{eps,+} U^T b
  Eigen::VectorX<Scalar> solve(const Eigen::VectorX<Scalar>& b) const {
    if (b.size() != U.rows()) throw ShapeError("right-hand side length must be m + 1");
    Eigen::VectorX<Scalar> coeffs = Eigen::VectorX<Scalar>::Zero(V.rows());
    if (kept_count > 0) {
      const auto Uk = U.leftCols(kept_count);
      const auto Vk = V.leftCols(kept_count);
      coeffs = Vk * (Uk.transpose() * b).cwiseQuotient(sigma.head(kept_count));
    }
    return coeffs;
  }
};

template <typename Scalar>
TruncatedFactorization<Scalar> factorize(const DesignMatrix<Scalar>& A, Scalar epsilon) {
  if (!(epsilon >= Scalar(0))) throw ParameterError("truncation tolerance must be >= 0");
  Eigen::BDCSVD<Eigen::MatrixX<Scalar>> svd(A.entries,
                                            Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw NumericalError("singular value decomposition failed");
  TruncatedFactorization<Scalar> fact;
  fact.U = svd.matrixU();
  fact.sigma = svd.singularValues();
  fact.V = svd.matrixV();
  fact.epsilon = epsilon;
  fact.kept_count = (fact.sigma.array() > epsilon).count();
  return fact;
}

// Regularized coefficient vector a^eps in the phi basis.
template <typename Scalar = double>
struct FrameApproximant {
  Eigen::VectorX<Scalar> coeffs;
  FrameConfig<Scalar> config;
};

template <typename Scalar>
FrameApproximant<Scalar> approximate(const TruncatedFactorization<Scalar>& fact,
                                     const FrameConfig<Scalar>& config,
                                     const SampleVector<Scalar>& samples) {
  if (samples.grid.m != config.m)
    throw ShapeError("samples must live on the config's equispaced grid");
  const Eigen::VectorX<Scalar> b =
      std::sqrt(Scalar(2) / Scalar(config.m + 1)) * samples.values;
  return FrameApproximant<Scalar>{fact.solve(b), config};
}

template <typename Scalar>
FrameApproximant<Scalar> approximate(const FrameConfig<Scalar>& config,
                                     const SampleVector<Scalar>& samples) {
  const DesignMatrix<Scalar> A = assemble(config);
  return approximate(factorize(A, config.epsilon), config, samples);
}

template <typename Scalar>
Scalar evaluate(const FrameApproximant<Scalar>& approx, Scalar x) {
  return approx.config.sys.row(x).dot(approx.coeffs);
}

template <typename Scalar, typename Derived>
Eigen::VectorX<Scalar> evaluate_many(const FrameApproximant<Scalar>& approx,
                                     const Eigen::MatrixBase<Derived>& x) {
  return approx.config.sys.rows(x) * approx.coeffs;
}

// zeta_i = sum_j (v_i)_j phi_j: unit continuous norm, discrete norm sigma_i.
template <typename Scalar = double>
struct SingularPolynomial {
  Eigen::Index index{};
  Eigen::VectorX<Scalar> coefficients;
  Scalar sigma{};
};

template <typename Scalar>
SingularPolynomial<Scalar> singular_poly(const TruncatedFactorization<Scalar>& fact,
                                         const FrameSystem<Scalar>& sys, Eigen::Index i) {
  if (i < 0 || i > sys.max_degree())
    throw ParameterError("singular-polynomial index exceeds max degree");
  return SingularPolynomial<Scalar>{i, fact.V.col(i), fact.sigma(i)};
}

// Alternate code path for the same operator: expand in singular polynomials,
// Q(f) = sum_{sigma_i > eps} <f, zeta_i>_{m,2} / sigma_i^2 * zeta_i.  The
// zeta values are recomputed from the frame rows, independently of U.
template <typename Scalar>
FrameApproximant<Scalar> project_via_singular(const TruncatedFactorization<Scalar>& fact,
                                              const FrameConfig<Scalar>& config,
                                              const SampleVector<Scalar>& samples) {
  if (samples.grid.m != config.m)
    throw ShapeError("samples must live on the config's equispaced grid");
  Eigen::VectorX<Scalar> coeffs = Eigen::VectorX<Scalar>::Zero(fact.V.rows());
  if (fact.kept_count > 0) {
    const auto Vk = fact.V.leftCols(fact.kept_count);
    const Eigen::MatrixX<Scalar> zeta_at_nodes = config.sys.rows(samples.grid.nodes) * Vk;
    const Eigen::VectorX<Scalar> inner =
        Scalar(2) / Scalar(config.m + 1) * (zeta_at_nodes.transpose() * samples.values);
    coeffs = Vk * inner.cwiseQuotient(fact.sigma.head(fact.kept_count).cwiseAbs2());
  }
  return FrameApproximant<Scalar>{std::move(coeffs), config};
}

// Induced (discrete-sup -> uniform) operator norm, maximized over an
// equispaced evaluation grid: max_x sum_k |M(x, k)| with
// M(x, .) = sqrt(2/(m+1)) phi-row(x) V Sigma^{eps,+} U^T.
template <typename Scalar>
Scalar condition_estimate(const TruncatedFactorization<Scalar>& fact,
                          const FrameConfig<Scalar>& config, Eigen::Index eval_points) {
  if (eval_points < 1000) throw ParameterError("condition estimate needs >= 1000 grid points");
  if (fact.kept_count == 0) return Scalar(0);
  const auto Uk = fact.U.leftCols(fact.kept_count);
  const auto Vk = fact.V.leftCols(fact.kept_count);
  const Eigen::VectorX<Scalar> inv_sigma =
      fact.sigma.head(fact.kept_count).cwiseInverse();

  Scalar best = Scalar(0);
  const Eigen::Index chunk = 2048;
  for (Eigen::Index start = 0; start < eval_points; start += chunk) {
    const Eigen::Index count = std::min(chunk, eval_points - start);
    Eigen::VectorX<Scalar> x(count);
    for (Eigen::Index k = 0; k < count; ++k)
      x(k) = Scalar(-1) + Scalar(2) * Scalar(start + k) / Scalar(eval_points - 1);
    const Eigen::MatrixX<Scalar> w =
        (config.sys.rows(x) * Vk) * inv_sigma.asDiagonal();   // count x kept
    const Eigen::MatrixX<Scalar> map = w * Uk.transpose();    // count x (m+1)
    best = std::max(best, map.cwiseAbs().rowwise().sum().maxCoeff());
  }
  return std::sqrt(Scalar(2) / Scalar(config.m + 1)) * best;
}

template <typename Scalar>
Scalar condition_estimate(const FrameConfig<Scalar>& config, Eigen::Index eval_points) {
  const DesignMatrix<Scalar> A = assemble(config);
  return condition_estimate(factorize(A, config.epsilon), config, eval_points);
}

}  // namespace framefit
