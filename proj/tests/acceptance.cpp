// Acceptance gate: one line per criterion, exit code = number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "framefit/bench.hpp"
#include "framefit/bounds.hpp"
#include "framefit/frame.hpp"
#include "framefit/jacobi.hpp"
#include "framefit/quadrature.hpp"
#include "framefit/sampling.hpp"

using framefit::ExperimentSpec;
using framefit::FitModel;
using framefit::FitResult;
using framefit::FrameApproximant;
using framefit::FrameConfig;
using framefit::FrameSystem;
using framefit::JacobiParams;
using framefit::ResultRow;
using framefit::SampleVector;
using framefit::TruncatedFactorization;

namespace {

int failures = 0;

std::string fmt(const char* pattern, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, value);
  return buf;
}

template <typename Body>
void criterion(int id, const char* title, Body&& body) {
  const auto start = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = true;
  try {
    detail = body();
  } catch (const std::exception& e) {
    detail = e.what();
    ok = false;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("[%s] C%d %s: %s [%.1f s]\n", ok ? "PASS" : "FAIL", id, title, detail.c_str(),
              secs);
  std::fflush(stdout);
  if (!ok) ++failures;
}

struct LineStats {
  double slope;
  double r2;
};

LineStats fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = double(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double fit = slope * xs[i] + intercept;
    ss_res += (ys[i] - fit) * (ys[i] - fit);
    ss_tot += (ys[i] - sy / n) * (ys[i] - sy / n);
  }
  return {slope, 1.0 - ss_res / ss_tot};
}

SampleVector<double> span_samples(const FrameConfig<double>& config, const Eigen::VectorXd& c) {
  SampleVector<double> s;
  s.grid = framefit::make_grid<double>(config.m);
  s.values = config.sys.rows(s.grid.nodes) * c;
  return s;
}

Eigen::VectorXd random_unit(Eigen::Index size, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd c(size);
  for (Eigen::Index i = 0; i < size; ++i) c(i) = gauss(rng);
  return c / c.norm();
}

std::vector<ResultRow> sweep(const std::string& fn, double alpha, double beta, double gamma) {
  ExperimentSpec spec;
  spec.functions = {fn};
  spec.param_pairs = {{alpha, beta}};
  spec.gammas = {gamma};
  spec.epsilons = {1e-14};
  spec.etas = {4.0};
  spec.n_start = 2;
  spec.n_stop = 60;
  spec.n_step = 2;
  spec.grid_size = 10000;
  return framefit::run_sweep(spec);
}

}  // namespace

int main() {
  // C1 -- basis orthogonality: Gram matrix under the Jacobi weight matches
  // diag(h_i) to 1e-9 relative for four parameter sets, degrees <= 20.
  criterion(1, "weighted orthogonality of the polynomial basis", [] {
    const JacobiParams<double> sets[4] = {
        {1.0 / 3.0, 0.5}, {-1.0 / 3.0, -2.0 / 3.0}, {2.0, 2.5}, {0.0, 0.0}};
    double worst = 0.0;
    for (const JacobiParams<double>& params : sets) {
      const framefit::QuadratureRule<double> rule = framefit::gauss_jacobi<double>(22, params);
      Eigen::MatrixXd table(rule.nodes.size(), 21);
      for (Eigen::Index q = 0; q < rule.nodes.size(); ++q)
        table.row(q) = framefit::jacobi_eval_all(20, params, rule.nodes(q)).transpose();
      const Eigen::MatrixXd gram = table.transpose() * rule.weights.asDiagonal() * table;
      for (Eigen::Index i = 0; i <= 20; ++i)
        for (Eigen::Index j = 0; j <= 20; ++j) {
          const double hi = framefit::norm_constant(i, params);
          const double hj = framefit::norm_constant(j, params);
          const double want = i == j ? hi : 0.0;
          worst = std::max(worst, std::abs(gram(i, j) - want) / std::sqrt(hi * hj));
        }
    }
    if (!(worst <= 1e-9))
      throw std::runtime_error("Gram deviation " + fmt("%.3g", worst) + " exceeds 1e-9");
    return "max relative Gram deviation " + fmt("%.3g", worst) + " <= 1e-9";
  });

  // C2 -- singular-value collapse: for (1/3,1/2), gamma=2, eta=4 the smallest
  // singular value decays geometrically (log-linear fit R^2 >= 0.95 before
  // the 1e-13 floor) and reaches 1e-14 * sigma_max by n = 40.
  criterion(2, "geometric singular-value decay", [] {
    const JacobiParams<double> params{1.0 / 3.0, 0.5};
    std::vector<double> ns, logs;
    double ratio40 = 1.0;
    for (Eigen::Index n = 2; n <= 40; n += 2) {
      const FrameSystem<double> sys(params, 2.0, n);
      const FrameConfig<double> config = framefit::make_config(sys, 4.0, 1e-14);
      const TruncatedFactorization<double> fact =
          framefit::factorize(framefit::assemble(config), 0.0);
      const double smin = fact.sigma(fact.sigma.size() - 1);
      const double smax = fact.sigma(0);
      if (n == 40) ratio40 = smin / smax;
      if (smin / smax > 1e-13) {
        ns.push_back(double(n));
        logs.push_back(std::log(smin));
      }
    }
    if (!(ratio40 < 1e-14))
      throw std::runtime_error("sigma_min/sigma_max at n=40 is " + fmt("%.3g", ratio40) +
                               ", expected < 1e-14");
    if (ns.size() < 4) throw std::runtime_error("too few pre-floor points for the decay fit");
    const LineStats line = fit_line(ns, logs);
    if (!(line.slope < 0.0) || !(line.r2 >= 0.95))
      throw std::runtime_error("log sigma_min vs n fit R^2 " + fmt("%.3f", line.r2) +
                               " < 0.95");
    return "sigma_min/sigma_max(n=40) " + fmt("%.2g", ratio40) + " < 1e-14, decay fit R^2 " +
           fmt("%.3f", line.r2) + " >= 0.95";
  });

  // C3 -- analytic convergence: f1 on gamma=1.2 converges exponentially with
  // rate within 15% of 1+sqrt(2) and plateaus at or below 1e-9.
  criterion(3, "exponential convergence rate for f1", [] {
    const std::vector<ResultRow> rows = sweep("f1", 1.0 / 3.0, 0.5, 1.2);
    const FitResult fit = framefit::fit_rate(rows, FitModel::exponential);
    const double target = 1.0 + std::sqrt(2.0);
    const double ratio = fit.exponent / target;
    if (!(ratio >= 0.85 && ratio <= 1.15))
      throw std::runtime_error("theta-hat " + fmt("%.4f", fit.exponent) +
                               " outside [0.85, 1.15] x (1+sqrt(2))");
    const double level = framefit::plateau_level(rows);
    if (!(level <= 1e-9))
      throw std::runtime_error("plateau level " + fmt("%.3g", level) + " exceeds 1e-9");
    return "theta-hat " + fmt("%.4f", fit.exponent) + " vs 2.4142, plateau " +
           fmt("%.2g", level) + " <= 1e-9";
  });

  // C4 -- extension-width tradeoff: enlarging gamma from 1.2 to 2.5 raises
  // the f3 error plateau.
  criterion(4, "wider extension costs limiting accuracy", [] {
    const double narrow = framefit::plateau_level(sweep("f3", 1.0 / 3.0, 0.5, 1.2));
    const double wide = framefit::plateau_level(sweep("f3", 1.0 / 3.0, 0.5, 2.5));
    if (!(narrow < wide))
      throw std::runtime_error("plateau(gamma=1.2) " + fmt("%.3g", narrow) +
                               " not below plateau(gamma=2.5) " + fmt("%.3g", wide));
    return "plateau " + fmt("%.2g", narrow) + " (gamma 1.2) < " + fmt("%.2g", wide) +
           " (gamma 2.5)";
  });

  // C5 -- algebraic convergence: |x|, |x-1/2|^5, |x-1/4|^{3/2} fit to rates
  // near 1, 5, 1.5.
  criterion(5, "algebraic rates for kink functions", [] {
    struct Want {
      const char* fn;
      double lo, hi;
    };
    const Want wants[3] = {{"f5", 0.7, 1.3}, {"f7", 4.2, 5.8}, {"f8", 1.2, 1.8}};
    std::string detail;
    for (const Want& w : wants) {
      const std::vector<ResultRow> rows = sweep(w.fn, 1.0 / 3.0, 0.5, 2.0);
      const FitResult fit = framefit::fit_rate(rows, FitModel::algebraic);
      if (!(fit.exponent >= w.lo && fit.exponent <= w.hi))
        throw std::runtime_error(std::string(w.fn) + " rate " + fmt("%.3f", fit.exponent) +
                                 " outside [" + fmt("%.1f", w.lo) + ", " + fmt("%.1f", w.hi) +
                                 "]");
      detail += std::string(w.fn) + " " + fmt("%.2f", fit.exponent) + " ";
    }
    return detail + "within bands";
  });

  // C6 -- parameter sensitivity: on gamma=2.5, moving (alpha,beta) from
  // (1/3,1/2) to (0,20) destroys the attainable accuracy.
  criterion(6, "large Jacobi parameters degrade accuracy", [] {
    ExperimentSpec spec;
    spec.functions = {"f1"};
    spec.param_pairs = {{1.0 / 3.0, 0.5}, {0.0, 20.0}};
    spec.gammas = {2.5};
    spec.epsilons = {1e-14};
    spec.etas = {4.0};
    spec.n_start = 2;
    spec.n_stop = 60;
    spec.n_step = 2;
    spec.grid_size = 10000;
    const std::vector<ResultRow> rows = framefit::run_sweep(spec);
    const std::size_t half = rows.size() / 2;
    const std::vector<ResultRow> mild(rows.begin(), rows.begin() + half);
    const std::vector<ResultRow> harsh(rows.begin() + half, rows.end());
    const double level_mild = framefit::plateau_level(mild);
    const double level_harsh = framefit::plateau_level(harsh);
    const double ratio = level_harsh / level_mild;
    bool tail_rises = true;
    for (std::size_t i = 2 * harsh.size() / 3; i + 1 < harsh.size(); ++i)
      if (harsh[i + 1].status == "ok" && harsh[i].status == "ok" &&
          harsh[i + 1].uniform_error < harsh[i].uniform_error)
        tail_rises = false;
    if (!(ratio >= 1e2) && !tail_rises)
      throw std::runtime_error("plateau ratio " + fmt("%.3g", ratio) +
                               " below 1e2 and the (0,20) tail still improves");
    return "plateau ratio " + fmt("%.2g", ratio) + " ((0,20) vs (1/3,1/2))";
  });

  // C7 -- operator contract: linearity, in-span reproduction, truncation
  // residual, SVD/singular-function path agreement, and orthonormality of
  // the singular functions.
  criterion(7, "approximation operator contract", [] {
    const JacobiParams<double> params{1.0 / 3.0, 0.5};
    std::mt19937_64 rng(77);

    // linearity at eps = 1e-2
    const FrameSystem<double> sys30(params, 2.0, 30);
    const FrameConfig<double> c30 = framefit::make_config(sys30, 4.0, 1e-2);
    const TruncatedFactorization<double> f30 =
        framefit::factorize(framefit::assemble(c30), c30.epsilon);
    SampleVector<double> u = span_samples(c30, random_unit(31, rng));
    SampleVector<double> v = span_samples(c30, random_unit(31, rng));
    SampleVector<double> combo = u;
    combo.values = 2.5 * u.values - 0.3 * v.values;
    const double lin_err = (framefit::approximate(f30, c30, combo).coeffs -
                            (2.5 * framefit::approximate(f30, c30, u).coeffs -
                             0.3 * framefit::approximate(f30, c30, v).coeffs))
                               .cwiseAbs()
                               .maxCoeff();
    if (!(lin_err <= 1e-12))
      throw std::runtime_error("linearity violation " + fmt("%.3g", lin_err));

    // exact reproduction of in-span polynomials below the truncation floor
    double rep_err = 0.0;
    const struct {
      Eigen::Index n;
      double eta, gamma;
    } reps[2] = {{10, 2.0, 2.0}, {20, 4.0, 1.2}};
    for (const auto& r : reps) {
      const FrameSystem<double> sys(params, r.gamma, r.n);
      const FrameConfig<double> config = framefit::make_config(sys, r.eta, 1e-14);
      const Eigen::VectorXd c = random_unit(r.n + 1, rng);
      const FrameApproximant<double> approx =
          framefit::approximate(config, span_samples(config, c));
      Eigen::VectorXd x(10000);
      for (Eigen::Index k = 0; k < x.size(); ++k)
        x(k) = -1.0 + 2.0 * double(k) / double(x.size() - 1);
      const Eigen::MatrixXd rows = config.sys.rows(x);
      rep_err = std::max(rep_err, (rows * (approx.coeffs - c)).cwiseAbs().maxCoeff());
    }
    if (!(rep_err <= 1e-8))
      throw std::runtime_error("in-span reproduction error " + fmt("%.3g", rep_err));

    // truncation residual + non-expansion at eps = 1e-2
    double res_slack = 0.0, expand = 0.0;
    for (int t = 0; t < 20; ++t) {
      const Eigen::VectorXd c = random_unit(31, rng);
      const SampleVector<double> samples = span_samples(c30, c);
      const FrameApproximant<double> approx = framefit::approximate(f30, c30, samples);
      SampleVector<double> diff = samples;
      diff.values =
          samples.values - framefit::evaluate_many(approx, samples.grid.nodes);
      res_slack = std::max(res_slack, framefit::discrete_norm2(diff) -
                                          (c30.epsilon * c.norm() + 1e-12));
      expand = std::max(expand, (c - approx.coeffs).norm() - c.norm() * (1.0 + 1e-10));
    }
    if (res_slack > 0.0)
      throw std::runtime_error("truncation residual exceeds eps * norm by " +
                               fmt("%.3g", res_slack));
    if (expand > 0.0)
      throw std::runtime_error("residual coefficient norm expands by " + fmt("%.3g", expand));

    // two-path agreement on f1
    const FrameSystem<double> sys20(params, 2.0, 20);
    const FrameConfig<double> c20 = framefit::make_config(sys20, 4.0, 1e-2);
    const TruncatedFactorization<double> f20 =
        framefit::factorize(framefit::assemble(c20), c20.epsilon);
    const SampleVector<double> f1s = framefit::sample(
        [](double x) { return 1.0 / (1.0 + x * x); }, framefit::make_grid<double>(c20.m));
    const Eigen::VectorXd a_svd = framefit::approximate(f20, c20, f1s).coeffs;
    const Eigen::VectorXd a_zeta = framefit::project_via_singular(f20, c20, f1s).coeffs;
    const double path_gap = (a_svd - a_zeta).norm() / std::max(1.0, a_svd.norm());
    if (!(path_gap <= 1e-10))
      throw std::runtime_error("SVD/singular-function paths differ by " +
                               fmt("%.3g", path_gap));

    // orthonormality of the singular functions (continuous and discrete)
    const FrameConfig<double> cz = framefit::make_config(sys20, 4.0, 1e-14);
    const TruncatedFactorization<double> fz =
        framefit::factorize(framefit::assemble(cz), cz.epsilon);
    const framefit::QuadratureRule<double> rule =
        framefit::gauss_jacobi<double>(4 * 21, params);
    const Eigen::MatrixXd Z = cz.sys.rows((2.0 * rule.nodes).eval()) * fz.V;
    const Eigen::MatrixXd gram_cont = 2.0 * Z.transpose() * rule.weights.asDiagonal() * Z;
    const double cont_dev =
        (gram_cont - Eigen::MatrixXd::Identity(21, 21)).cwiseAbs().maxCoeff();
    const Eigen::MatrixXd Zg =
        cz.sys.rows(framefit::make_grid<double>(cz.m).nodes) * fz.V;
    Eigen::MatrixXd gram_disc = (2.0 / double(cz.m + 1)) * Zg.transpose() * Zg;
    for (Eigen::Index i = 0; i < 21; ++i) gram_disc(i, i) -= fz.sigma(i) * fz.sigma(i);
    const double disc_dev =
        gram_disc.cwiseAbs().maxCoeff() / (fz.sigma(0) * fz.sigma(0));
    if (!(cont_dev <= 1e-8) || !(disc_dev <= 1e-8))
      throw std::runtime_error("singular-function Gram deviations " + fmt("%.3g", cont_dev) +
                               " / " + fmt("%.3g", disc_dev) + " exceed 1e-8");

    return "linearity " + fmt("%.1g", lin_err) + ", reproduction " + fmt("%.1g", rep_err) +
           ", path gap " + fmt("%.1g", path_gap) + ", Gram " + fmt("%.1g", cont_dev) + "/" +
           fmt("%.1g", disc_dev);
  });

  // C8 -- extension inequalities and conditioning: the two norm inequalities
  // hold with 1e-8 slack; the kept-span sup constant stays below the
  // estimated condition number everywhere; and at eta = 4 the estimate stays
  // below the 10 sqrt(m+1) envelope.
  criterion(8, "norm inequalities and conditioning envelope", [] {
    const JacobiParams<double> sets[2] = {{1.0 / 3.0, 0.5}, {-1.0 / 3.0, -2.0 / 3.0}};
    std::mt19937_64 rng(31);
    double worst_slack = 0.0;
    for (const JacobiParams<double>& params : sets)
      for (double gamma : {1.2, 2.0}) {
        const FrameSystem<double> sys(params, gamma, 40);
        const double c_frame = framefit::frame_constant(sys);
        const double lem = framefit::lemma22_constant(sys);
        const Eigen::MatrixXd rows = sys.rows(framefit::chebyshev_grid<double>(4096, gamma));
        for (int t = 0; t < 100; ++t) {
          const Eigen::VectorXd c = random_unit(41, rng);
          const double sup_ext = (rows * c).cwiseAbs().maxCoeff();
          worst_slack = std::max(worst_slack, sup_ext - c_frame * (1.0 + 1e-8));
          worst_slack = std::max(worst_slack, 1.0 - lem * sup_ext * (1.0 + 1e-8));
        }
      }
    if (worst_slack > 0.0)
      throw std::runtime_error("norm inequality violated by " + fmt("%.3g", worst_slack));

    double worst_envelope = 0.0, worst_order = 0.0;
    for (const JacobiParams<double>& params : sets)
      for (double gamma : {1.2, 2.0})
        for (double eps : {1e-14, 1e-10})
          for (double eta : {2.0, 4.0})
            for (Eigen::Index n : {10, 20, 40}) {
              const FrameSystem<double> sys(params, gamma, n);
              const FrameConfig<double> config = framefit::make_config(sys, eta, eps);
              const TruncatedFactorization<double> fact =
                  framefit::factorize(framefit::assemble(config), eps);
              const double kappa = framefit::condition_estimate(fact, config, 2001);
              const double c1 = framefit::c1_estimate(fact, config, 200, 31);
              worst_order = std::max(worst_order, c1 / (kappa * (1.0 + 1e-8)));
              if (eta == 4.0)
                worst_envelope = std::max(
                    worst_envelope, kappa / (10.0 * std::sqrt(double(config.m + 1))));
            }
    if (!(worst_order <= 1.0))
      throw std::runtime_error("kept-span sup constant exceeds the condition estimate, "
                               "ratio " + fmt("%.3g", worst_order));
    if (!(worst_envelope <= 1.0))
      throw std::runtime_error("condition estimate at eta=4 exceeds 10 sqrt(m+1) by factor " +
                               fmt("%.3g", worst_envelope));
    return "norm slack <= 0, c1 <= kappa everywhere, eta=4 envelope ratio " +
           fmt("%.2f", worst_envelope) + " <= 1";
  });

  std::printf("%d of 8 criteria passed\n", 8 - failures);
  return failures;
}
