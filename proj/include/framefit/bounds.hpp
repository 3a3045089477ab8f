#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <random>

#include "framefit/errors.hpp"
#include "framefit/frame.hpp"
#include "framefit/jacobi.hpp"
#include "framefit/sampling.hpp"

namespace framefit {

// Ellipse with foci +-1 and parameter theta > 1; analyticity inside governs
// the theta^{-n} convergence rate.
template <typename Scalar = double>
struct BernsteinEllipse {
  Scalar theta{};

  void validate() const {
    if (!(theta > Scalar(1))) throw ParameterError("Bernstein parameter must satisfy theta > 1");
  }
};

// Parameter of the ellipse just covering [-gamma, gamma].
template <typename Scalar>
Scalar tau_value(Scalar gamma) {
  if (!(gamma >= Scalar(1))) throw ParameterError("tau needs gamma >= 1");
  return gamma + std::sqrt(gamma * gamma - 1);
}

// c_{n,gamma,alpha,beta} = max_x (sum_i phi_i(x)^2)^{1/2}, maximized on a
// Chebyshev-refined grid since the sum peaks at the interval ends.
template <typename Scalar>
Scalar frame_constant(const FrameSystem<Scalar>& sys, Eigen::Index segments = 8192) {
  if (segments < 8192) throw ParameterError("frame-constant grid needs >= 8192 segments");
  const Eigen::VectorX<Scalar> x = chebyshev_grid<Scalar>(segments, sys.gamma());
  return sys.rows(x).rowwise().norm().maxCoeff();
}

// sqrt(gamma h_0); gamma = 1 is admitted here for degenerate checks even
// though the frame itself requires gamma > 1.
template <typename Scalar>
Scalar lemma22_constant(const JacobiParams<Scalar>& params, Scalar gamma) {
  if (!(gamma >= Scalar(1))) throw ParameterError("lemma constant needs gamma >= 1");
  return std::sqrt(gamma * norm_constant(0, params));
}

template <typename Scalar>
Scalar lemma22_constant(const FrameSystem<Scalar>& sys) {
  return lemma22_constant(sys.params(), sys.gamma());
}

struct OversamplingReport {
  bool satisfied{};            // m >= required_m
  Eigen::Index required_m{};   // minimal m with m >= 36 n log(1/eps) / sqrt(gamma^2-1)
  bool side_condition{};       // n >= sqrt(gamma^2-1) log(1/eps)
};

template <typename Scalar>
OversamplingReport oversampling_check(const FrameConfig<Scalar>& config) {
  const Scalar eps = config.epsilon;
  if (!(eps > Scalar(0)) || !(eps <= std::exp(Scalar(-1))))
    throw ParameterError("oversampling condition requires epsilon in (0, 1/e]");
  const Scalar gamma = config.sys.gamma();
  const Scalar root = std::sqrt(gamma * gamma - 1);
  const Scalar logeps = std::log(Scalar(1) / eps);
  const Scalar required = 36 * Scalar(config.sys.max_degree()) * logeps / root;
  OversamplingReport report;
  report.required_m =
      static_cast<Eigen::Index>(std::ceil(required * (1 - Scalar(1e-12))));
  report.satisfied = config.m >= report.required_m;
  report.side_condition = Scalar(config.sys.max_degree()) >= root * logeps;
  return report;
}

// eps' = sqrt(2) c_{n,gamma,alpha,beta} eps
template <typename Scalar>
Scalar effective_epsilon(const FrameSystem<Scalar>& sys, Scalar eps) {
  return std::sqrt(Scalar(2)) * frame_constant(sys) * eps;
}

// One evaluated error bound: the two bracket addends separately (so the
// crossover where the eps term takes over is visible) plus the full value.
template <typename Scalar = double>
struct BoundTerms {
  Scalar rate_term{};              // addend carrying theta^{-n} or n^{-k}
  Scalar eps_term{};               // addend carrying the eps power
  Scalar constant{};               // multiplier applied to the bracket
  Scalar value{};                  // prefactor * norm * constant * (addends)
  bool branch_constant_gt_1{};     // G3 > 1 (outer) or H3 > 1 (inner)
  bool mu_ge_minus_half{};
  bool unknown_constant_mode{};    // prefactor left at its default 1
};

// Covered regime theta > tau: K (theta^{-n} + n^pow eps) with K = G1 or G2
// by the G3 split; pow = mu+1 for mu >= -1/2, else 1/2.  The caller's
// prefactor stands in for the unspecified c sqrt(m+1).
template <typename Scalar>
BoundTerms<Scalar> analytic_bound_outer(const BernsteinEllipse<Scalar>& ellipse,
                                        const FrameSystem<Scalar>& sys, Eigen::Index n,
                                        Scalar eps, Scalar f_sup,
                                        Scalar prefactor = Scalar(1)) {
  ellipse.validate();
  const Scalar theta = ellipse.theta;
  const Scalar tau = tau_value(sys.gamma());
  if (!(theta > tau))
    throw RegimeError("theta <= tau: the covered-regime bound does not apply; "
                      "use analytic_bound_inner");
  const Scalar h0 = sys.norm_constant(0);
  const Scalar g1 = 4 / (theta - 1);
  const Scalar g2 = 2 * theta * std::sqrt(h0) / (theta - tau);
  const Scalar g3 = g2 / g1;
  const Scalar mu = sys.params().mu();
  const bool upper = mu >= Scalar(-0.5);
  const Scalar pow_eps = upper ? mu + 1 : Scalar(0.5);
  BoundTerms<Scalar> out;
  out.constant = g3 > 1 ? g2 : g1;
  out.rate_term = out.constant * std::pow(theta, Scalar(-Scalar(n)));
  out.eps_term = out.constant * std::pow(Scalar(n), pow_eps) * eps;
  out.value = prefactor * f_sup * (out.rate_term + out.eps_term);
  out.branch_constant_gt_1 = g3 > 1;
  out.mu_ge_minus_half = upper;
  out.unknown_constant_mode = prefactor == Scalar(1);
  return out;
}

// Uncovered regime 1 < theta < tau: K (theta^{-n} + (1 + n^pow) eps^{log
// theta / log tau}); the limiting accuracy is a fractional power of eps.
template <typename Scalar>
BoundTerms<Scalar> analytic_bound_inner(const BernsteinEllipse<Scalar>& ellipse,
                                        const FrameSystem<Scalar>& sys, Eigen::Index n,
                                        Scalar eps, Scalar f_sup,
                                        Scalar prefactor = Scalar(1)) {
  ellipse.validate();
  const Scalar theta = ellipse.theta;
  const Scalar tau = tau_value(sys.gamma());
  if (!(theta < tau))
    throw RegimeError("theta >= tau: the uncovered-regime bound does not apply; "
                      "use analytic_bound_outer");
  const Scalar h0 = sys.norm_constant(0);
  const Scalar h1 = 4 / (theta - 1);
  const Scalar h2 = 2 * tau * std::sqrt(h0) / (tau - theta);
  const Scalar h3 = h2 / h1;
  const Scalar mu = sys.params().mu();
  const bool upper = mu >= Scalar(-0.5);
  const Scalar pow_eps = upper ? mu + 1 : Scalar(0.5);
  const Scalar eps_power = eps > 0 ? std::pow(eps, std::log(theta) / std::log(tau)) : Scalar(0);
  BoundTerms<Scalar> out;
  out.constant = h3 > 1 ? h2 : h1;
  out.rate_term = out.constant * std::pow(theta, Scalar(-Scalar(n)));
  out.eps_term = out.constant * (1 + std::pow(Scalar(n), pow_eps)) * eps_power;
  out.value = prefactor * f_sup * (out.rate_term + out.eps_term);
  out.branch_constant_gt_1 = h3 > 1;
  out.mu_ge_minus_half = upper;
  out.unknown_constant_mode = prefactor == Scalar(1);
  return out;
}

// C^k bound: 4 c_k c'_k * prefactor * |f|_{C^k} (n^{-k} + sqrt(h0)/(4 c'_k)
// n^pow eps) with pow = mu for mu >= -1/2, else 1/2.
template <typename Scalar>
BoundTerms<Scalar> differentiable_bound(Eigen::Index k, const FrameSystem<Scalar>& sys,
                                        Eigen::Index n, Scalar eps, Scalar f_norm,
                                        Scalar c_k = Scalar(1), Scalar c_k_prime = Scalar(1),
                                        Scalar prefactor = Scalar(1)) {
  if (k < 0) throw ParameterError("smoothness order must be >= 0");
  if (n < 1) throw ParameterError("differentiable bound needs n >= 1");
  const Scalar h0 = sys.norm_constant(0);
  const Scalar mu = sys.params().mu();
  const bool upper = mu >= Scalar(-0.5);
  const Scalar pow_eps = upper ? mu : Scalar(0.5);
  BoundTerms<Scalar> out;
  out.constant = 4 * c_k * c_k_prime;
  out.rate_term = std::pow(Scalar(n), Scalar(-Scalar(k)));
  out.eps_term = std::sqrt(h0) / (4 * c_k_prime) * std::pow(Scalar(n), pow_eps) * eps;
  out.value = out.constant * prefactor * f_norm * (out.rate_term + out.eps_term);
  out.branch_constant_gt_1 = false;
  out.mu_ge_minus_half = upper;
  out.unknown_constant_mode = prefactor == Scalar(1);
  return out;
}

// Summary of the computable constants for one configuration.  The rough
// projection bound's eps coefficient follows the in-proof line
// sqrt(gamma h0)/2 * c_frame (the displayed inequality omits the
// sqrt(gamma) factor; the discrepancy flag records that choice).
template <typename Scalar = double>
struct BoundReport {
  Scalar gamma{}, epsilon{}, eta{};
  Eigen::Index n{}, m{};
  Scalar mu{};
  bool mu_ge_minus_half{};
  Scalar c_frame{};
  Scalar lemma22{};
  Scalar tau{};
  Scalar epsilon_prime{};
  bool oversampling_applicable{};
  OversamplingReport oversampling{};
  Scalar rough_eps_coefficient{};
  bool sqrt_gamma_discrepancy{true};
};

template <typename Scalar>
BoundReport<Scalar> make_bound_report(const FrameConfig<Scalar>& config) {
  BoundReport<Scalar> report;
  report.gamma = config.sys.gamma();
  report.epsilon = config.epsilon;
  report.eta = config.eta;
  report.n = config.sys.max_degree();
  report.m = config.m;
  report.mu = config.sys.params().mu();
  report.mu_ge_minus_half = report.mu >= Scalar(-0.5);
  report.c_frame = frame_constant(config.sys);
  report.lemma22 = lemma22_constant(config.sys);
  report.tau = tau_value(config.sys.gamma());
  report.epsilon_prime = std::sqrt(Scalar(2)) * report.c_frame * config.epsilon;
  report.oversampling_applicable =
      config.epsilon > Scalar(0) && config.epsilon <= std::exp(Scalar(-1));
  if (report.oversampling_applicable) report.oversampling = oversampling_check(config);
  report.rough_eps_coefficient =
      std::sqrt(config.sys.gamma() * config.sys.norm_constant(0)) / 2 * report.c_frame *
      config.epsilon;
  report.sqrt_gamma_discrepancy = true;
  return report;
}

namespace detail {

// Deterministic standard normals (Box-Muller over mt19937_64), so estimates
// reproduce across standard-library implementations.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double standard_normal(std::mt19937_64& rng) {
  const double u1 = 1.0 - uniform01(rng);  // (0, 1]
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * EIGEN_PI * u2);
}

template <typename Scalar>
Eigen::VectorX<Scalar> gaussian_vector(std::mt19937_64& rng, Eigen::Index size) {
  Eigen::VectorX<Scalar> v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = Scalar(standard_normal(rng));
  return v;
}

}  // namespace detail

// Monte-Carlo LOWER bound on C(m,n,gamma,eps) = sup { |p|_{[-1,1],inf} :
// |p|_{m,inf} <= 1, |p|_{[-gamma,gamma],inf} <= 1/eps }.  Random coefficient
// vectors are rescaled onto the feasible set; the constant polynomial
// min(1, 1/eps) seeds the estimate.  The true sup is not computed.
template <typename Scalar>
Scalar quantity_C_estimate(const FrameConfig<Scalar>& config, Scalar eps, Eigen::Index trials,
                           std::uint64_t seed) {
  if (trials < 1) throw ParameterError("estimator needs at least one trial");
  if (!(eps >= Scalar(0))) throw ParameterError("constraint tolerance must be >= 0");
  const Eigen::Index n = config.sys.max_degree();
  const EquispacedGrid<Scalar> grid = make_grid<Scalar>(config.m);
  const Eigen::MatrixX<Scalar> at_samples = config.sys.rows(grid.nodes);
  const Eigen::MatrixX<Scalar> at_extended =
      config.sys.rows(chebyshev_grid<Scalar>(4096, config.sys.gamma()));
  Eigen::VectorX<Scalar> unit_points(2001);
  for (Eigen::Index k = 0; k < unit_points.size(); ++k)
    unit_points(k) = Scalar(-1) + 2 * Scalar(k) / Scalar(unit_points.size() - 1);
  const Eigen::MatrixX<Scalar> at_unit = config.sys.rows(unit_points);

  Scalar best = eps > 1 ? 1 / eps : Scalar(1);  // feasible constant polynomial
  std::mt19937_64 rng(seed);
  for (Eigen::Index t = 0; t < trials; ++t) {
    const Eigen::VectorX<Scalar> c = detail::gaussian_vector<Scalar>(rng, n + 1);
    const Scalar sample_sup = (at_samples * c).cwiseAbs().maxCoeff();
    const Scalar extended_sup = (at_extended * c).cwiseAbs().maxCoeff();
    const Scalar limit = std::max(sample_sup, eps * extended_sup);
    if (!(limit > Scalar(0))) continue;
    best = std::max(best, (at_unit * c).cwiseAbs().maxCoeff() / limit);
  }
  return best;
}

// Monte-Carlo LOWER bound on C1 = sup { |p|_{[-1,1],inf} : p in the kept
// singular-function span, |p|_{m,inf} <= 1 }.
template <typename Scalar>
Scalar c1_estimate(const TruncatedFactorization<Scalar>& fact, const FrameConfig<Scalar>& config,
                   Eigen::Index trials, std::uint64_t seed) {
  if (trials < 1) throw ParameterError("estimator needs at least one trial");
  if (fact.kept_count == 0) return Scalar(0);
  const EquispacedGrid<Scalar> grid = make_grid<Scalar>(config.m);
  const Eigen::MatrixX<Scalar> at_samples = config.sys.rows(grid.nodes);
  Eigen::VectorX<Scalar> unit_points(2001);
  for (Eigen::Index k = 0; k < unit_points.size(); ++k)
    unit_points(k) = Scalar(-1) + 2 * Scalar(k) / Scalar(unit_points.size() - 1);
  const Eigen::MatrixX<Scalar> at_unit = config.sys.rows(unit_points);
  const auto Vk = fact.V.leftCols(fact.kept_count);

  Scalar best = Scalar(0);
  std::mt19937_64 rng(seed);
  for (Eigen::Index t = 0; t < trials; ++t) {
    const Eigen::VectorX<Scalar> c =
        Vk * detail::gaussian_vector<Scalar>(rng, fact.kept_count);
    const Scalar sample_sup = (at_samples * c).cwiseAbs().maxCoeff();
    if (!(sample_sup > Scalar(0))) continue;
    best = std::max(best, (at_unit * c).cwiseAbs().maxCoeff() / sample_sup);
  }
  return best;
}

}  // namespace framefit
