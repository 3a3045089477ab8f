#pragma once

#include <Eigen/Core>
#include <cmath>
#include <string>

#include "framefit/errors.hpp"

namespace framefit {

// Weight exponents (alpha, beta) of the family orthogonal under
// (1-x)^alpha (1+x)^beta on [-1,1]; polynomials normalized by
// P_i(1) = binom(i+alpha, i).
template <typename Scalar = double>
struct JacobiParams {
  Scalar alpha{0};
  Scalar beta{0};

  Scalar mu() const { return alpha > beta ? alpha : beta; }

  void validate() const {
    if (!(alpha > Scalar(-1)) || !(beta > Scalar(-1)))
      throw ParameterError("weight exponents must satisfy alpha > -1 and beta > -1");
  }
};

// P_i at a single point by forward three-term recurrence.
template <typename Scalar>
Scalar jacobi_eval(Eigen::Index i, const JacobiParams<Scalar>& params, Scalar x) {
  params.validate();
  if (i < 0) throw ParameterError("polynomial degree must be nonnegative");
  const Scalar a = params.alpha, b = params.beta, apb = a + b;
  Scalar pm2 = Scalar(1);
  if (i == 0) return pm2;
  Scalar pm1 = ((apb + 2) * x + (a - b)) / 2;
  for (Eigen::Index q = 2; q <= i; ++q) {
    const Scalar qq = Scalar(q);
    const Scalar c1 = 2 * qq * (qq + apb) * (2 * qq + apb - 2);
    const Scalar c2 = (2 * qq + apb - 1) * (2 * qq + apb) * (2 * qq + apb - 2);
    const Scalar c3 = (2 * qq + apb - 1) * (a * a - b * b);
    const Scalar c4 = 2 * (qq + a - 1) * (qq + b - 1) * (2 * qq + apb);
    const Scalar p = ((c2 * x + c3) * pm1 - c4 * pm2) / c1;
    pm2 = pm1;
    pm1 = p;
  }
  return pm1;
}

// [P_0(x), ..., P_n(x)] in one recurrence pass.
template <typename Scalar>
Eigen::VectorX<Scalar> jacobi_eval_all(Eigen::Index n, const JacobiParams<Scalar>& params,
                                       Scalar x) {
  params.validate();
  if (n < 0) throw ParameterError("polynomial degree must be nonnegative");
  const Scalar a = params.alpha, b = params.beta, apb = a + b;
  Eigen::VectorX<Scalar> p(n + 1);
  p(0) = Scalar(1);
  if (n >= 1) p(1) = ((apb + 2) * x + (a - b)) / 2;
  for (Eigen::Index q = 2; q <= n; ++q) {
    const Scalar qq = Scalar(q);
    const Scalar c1 = 2 * qq * (qq + apb) * (2 * qq + apb - 2);
    const Scalar c2 = (2 * qq + apb - 1) * (2 * qq + apb) * (2 * qq + apb - 2);
    const Scalar c3 = (2 * qq + apb - 1) * (a * a - b * b);
    const Scalar c4 = 2 * (qq + a - 1) * (qq + b - 1) * (2 * qq + apb);
    p(q) = ((c2 * x + c3) * p(q - 1) - c4 * p(q - 2)) / c1;
  }
  return p;
}

// Columnwise recurrence over a vector of points; row k holds
// [P_0(x_k), ..., P_n(x_k)].
template <typename Derived>
Eigen::MatrixX<typename Derived::Scalar> jacobi_eval_matrix(
    Eigen::Index n, const JacobiParams<typename Derived::Scalar>& params,
    const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  params.validate();
  if (n < 0) throw ParameterError("polynomial degree must be nonnegative");
  const Scalar a = params.alpha, b = params.beta, apb = a + b;
  const auto xa = x.derived().array();
  Eigen::MatrixX<Scalar> p(x.size(), n + 1);
  p.col(0).setOnes();
  if (n >= 1) p.col(1).array() = ((apb + 2) * xa + (a - b)) / 2;
  for (Eigen::Index q = 2; q <= n; ++q) {
    const Scalar qq = Scalar(q);
    const Scalar c1 = 2 * qq * (qq + apb) * (2 * qq + apb - 2);
    const Scalar c2 = (2 * qq + apb - 1) * (2 * qq + apb) * (2 * qq + apb - 2);
    const Scalar c3 = (2 * qq + apb - 1) * (a * a - b * b);
    const Scalar c4 = 2 * (qq + a - 1) * (qq + b - 1) * (2 * qq + apb);
    p.col(q).array() =
        ((c2 * xa + c3) * p.col(q - 1).array() - c4 * p.col(q - 2).array()) / c1;
  }
  return p;
}

// log h_i, with h_i = 2^{a+b+1} G(i+a+1) G(i+b+1) / ((2i+a+b+1) i! G(i+a+b+1)).
// The i = 0 case is rewritten through G(a+b+2) so that a+b <= -1 (where
// G(a+b+1) is singular or negative) stays well defined.
template <typename Scalar>
Scalar log_norm_constant(Eigen::Index i, const JacobiParams<Scalar>& params) {
  params.validate();
  if (i < 0) throw ParameterError("norm-constant index must be nonnegative");
  using std::lgamma;
  using std::log;
  const Scalar a = params.alpha, b = params.beta;
  const Scalar ln2 = log(Scalar(2));
  if (i == 0)
    return (a + b + 1) * ln2 + lgamma(a + 1) + lgamma(b + 1) - lgamma(a + b + 2);
  const Scalar fi = Scalar(i);
  return (a + b + 1) * ln2 + lgamma(fi + a + 1) + lgamma(fi + b + 1) -
         log(2 * fi + a + b + 1) - lgamma(fi + 1) - lgamma(fi + a + b + 1);
}

template <typename Scalar>
Scalar norm_constant(Eigen::Index i, const JacobiParams<Scalar>& params) {
  using std::exp;
  using std::isfinite;
  const Scalar h = exp(log_norm_constant(i, params));
  if (!isfinite(h) || !(h > Scalar(0)))
    throw OverflowError("norm constant h_" + std::to_string(i) + " is not finite positive");
  return h;
}

// N+1 Chebyshev-distributed points halfwidth*cos(pi j / N), j = 0..N
// (descending, endpoints included).
template <typename Scalar = double>
Eigen::VectorX<Scalar> chebyshev_grid(Eigen::Index segments, Scalar halfwidth = Scalar(1)) {
  if (segments < 1) throw ParameterError("chebyshev grid needs at least one segment");
  Eigen::VectorX<Scalar> x(segments + 1);
  const Scalar pi = Scalar(EIGEN_PI);
  for (Eigen::Index j = 0; j <= segments; ++j)
    x(j) = halfwidth * std::cos(pi * Scalar(j) / Scalar(segments));
  return x;
}

// Max |P_i| over a dense Chebyshev grid; confirms the n^mu sup-norm growth.
template <typename Scalar>
Scalar sup_norm_growth_check(const JacobiParams<Scalar>& params, Eigen::Index i,
                             Eigen::Index segments = 4096) {
  if (i < 1) throw ParameterError("sup-norm growth check needs degree >= 1");
  if (segments < 4096) throw ParameterError("sup-norm grid needs >= 4096 segments");
  const Eigen::VectorX<Scalar> x = chebyshev_grid<Scalar>(segments);
  return jacobi_eval_matrix(i, params, x).col(i).cwiseAbs().maxCoeff();
}

// Orthonormal system of the extended interval [-gamma, gamma]:
// phi_i(x) = P_i(x/gamma) / sqrt(gamma h_i).  Immutable after construction.
template <typename Scalar = double>
class FrameSystem {
 public:
  FrameSystem(JacobiParams<Scalar> params, Scalar gamma, Eigen::Index max_degree)
      : params_(params), gamma_(gamma), n_(max_degree) {
    params_.validate();
    if (!(gamma_ > Scalar(1))) throw ParameterError("frame extension factor must satisfy gamma > 1");
    if (n_ < 0) throw ParameterError("frame max degree must be nonnegative");
    h_.resize(n_ + 1);
    scale_.resize(n_ + 1);
    for (Eigen::Index i = 0; i <= n_; ++i) {
      h_(i) = framefit::norm_constant(i, params_);
      scale_(i) = Scalar(1) / std::sqrt(gamma_ * h_(i));
      if (!std::isfinite(scale_(i)))
        throw OverflowError("frame scale 1/sqrt(gamma h_" + std::to_string(i) +
                            ") is not finite");
    }
  }

  const JacobiParams<Scalar>& params() const { return params_; }
  Scalar gamma() const { return gamma_; }
  Eigen::Index max_degree() const { return n_; }
  Scalar norm_constant(Eigen::Index i) const { return h_(i); }
  const Eigen::VectorX<Scalar>& scales() const { return scale_; }

  void check_domain(Scalar x) const {
    if (!(std::abs(x) <= gamma_))
      throw DomainError("evaluation point " + std::to_string(x) +
                        " outside [-gamma, gamma], gamma = " + std::to_string(gamma_));
  }

  // [phi_0(x), ..., phi_n(x)]
  Eigen::VectorX<Scalar> row(Scalar x) const {
    check_domain(x);
    return jacobi_eval_all(n_, params_, x / gamma_).cwiseProduct(scale_);
  }

  // Stacked rows for a vector of points.
  template <typename Derived>
  Eigen::MatrixX<Scalar> rows(const Eigen::MatrixBase<Derived>& x) const {
    for (Eigen::Index k = 0; k < x.size(); ++k) check_domain(x.derived()(k));
    Eigen::MatrixX<Scalar> p = jacobi_eval_matrix(n_, params_, (x.derived() / gamma_).eval());
    p.array().rowwise() *= scale_.transpose().array();
    return p;
  }

 private:
  JacobiParams<Scalar> params_;
  Scalar gamma_;
  Eigen::Index n_;
  Eigen::VectorX<Scalar> h_;
  Eigen::VectorX<Scalar> scale_;
};

template <typename Scalar>
Scalar frame_eval(const FrameSystem<Scalar>& sys, Eigen::Index i, Scalar x) {
  if (i < 0 || i > sys.max_degree())
    throw ParameterError("frame index exceeds the system's max degree");
  sys.check_domain(x);
  return jacobi_eval(i, sys.params(), x / sys.gamma()) * sys.scales()(i);
}

}  // namespace framefit
