#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "framefit/bench.hpp"
#include "framefit/errors.hpp"
#include "framefit/frame.hpp"
#include "framefit/jacobi.hpp"

namespace {

// Fit reports go to stderr so stdout stays a clean CSV stream.
void report_fits(const std::vector<framefit::ResultRow>& rows, std::size_t curve_len,
                 framefit::FitModel model, const char* model_name) {
  for (std::size_t start = 0; start + curve_len <= rows.size(); start += curve_len) {
    const std::vector<framefit::ResultRow> curve(rows.begin() + start,
                                                 rows.begin() + start + curve_len);
    const framefit::ResultRow& head = curve.front();
    std::fprintf(stderr,
                 "# fit function=%s alpha=%g beta=%g gamma=%g epsilon=%g eta=%g model=%s ",
                 head.function.c_str(), head.alpha, head.beta, head.gamma, head.epsilon,
                 head.eta, model_name);
    try {
      const framefit::FitResult fit = framefit::fit_rate(curve, model);
      std::fprintf(stderr, "exponent=%.6g residual=%.3g window=%lld\n", fit.exponent,
                   fit.residual, static_cast<long long>(fit.window_size));
    } catch (const framefit::Error& e) {
      std::fprintf(stderr, "failed: %s\n", e.what());
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equispaced polynomial-frame approximation benchmarks"};

  std::string function = "f1";
  std::vector<double> alphas, betas, gammas, epsilons, etas;
  long long n_max = 60, n_step = 2, grid_size = 10000;
  std::uint64_t seed = 0;
  std::string out_path, profile_path, fit_model;

  app.add_option("--function", function, "Corpus function id (f1..f9) or 'all'")
      ->capture_default_str();
  app.add_option("--alpha", alphas, "Jacobi alpha (repeatable, zipped with --beta)");
  app.add_option("--beta", betas, "Jacobi beta (repeatable, zipped with --alpha)");
  app.add_option("--gamma", gammas, "Extension half-width gamma > 1 (repeatable)");
  app.add_option("--epsilon", epsilons, "Truncation tolerance (repeatable)");
  app.add_option("--eta", etas, "Oversampling ratio eta > 1 (repeatable)");
  app.add_option("--n-max", n_max, "Largest polynomial degree")->capture_default_str();
  app.add_option("--n-step", n_step, "Degree increment; the range is step..max")
      ->capture_default_str();
  app.add_option("--grid-size", grid_size, "Uniform-error evaluation grid size")
      ->capture_default_str();
  app.add_option("--out", out_path, "CSV output path (default: stdout)");
  app.add_option("--profile", profile_path,
                 "Write a singular-value profile CSV for the first parameter tuple");
  app.add_option("--fit", fit_model, "Report a rate fit per curve on stderr")
      ->check(CLI::IsMember({"exp", "alg"}));
  app.add_option("--seed", seed, "Random seed recorded with the experiment")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (alphas.empty()) alphas.push_back(1.0 / 3.0);
  if (betas.empty()) betas.push_back(0.5);
  if (alphas.size() != betas.size()) {
    std::fprintf(stderr, "error: --alpha and --beta need the same number of values\n");
    return 2;
  }
  if (gammas.empty()) gammas.push_back(2.0);
  if (epsilons.empty()) epsilons.push_back(1e-14);
  if (etas.empty()) etas.push_back(4.0);

  framefit::ExperimentSpec spec;
  try {
    if (function == "all")
      for (const framefit::TestFunction& f : framefit::corpus()) spec.functions.push_back(f.id);
    else
      spec.functions.push_back(function);
    for (std::size_t i = 0; i < alphas.size(); ++i)
      spec.param_pairs.emplace_back(alphas[i], betas[i]);
    spec.gammas = gammas;
    spec.epsilons = epsilons;
    spec.etas = etas;
    spec.n_start = n_step;
    spec.n_stop = n_max;
    spec.n_step = n_step;
    spec.grid_size = grid_size;
    spec.seed = seed;
    spec.validate();
  } catch (const framefit::ParameterError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  try {
    const std::vector<framefit::ResultRow> rows = framefit::run_sweep(spec);

    if (!profile_path.empty()) {
      const framefit::FrameSystem<double> sys(
          framefit::JacobiParams<double>{spec.param_pairs[0].first, spec.param_pairs[0].second},
          spec.gammas[0], spec.n_stop);
      framefit::emit_singular_profile(
          framefit::make_config(sys, spec.etas[0], spec.epsilons[0]), profile_path);
    }

    if (out_path.empty())
      framefit::emit_csv(rows, std::cout);
    else
      framefit::emit_csv(rows, out_path);

    if (!fit_model.empty())
      report_fits(rows, spec.degrees().size(),
                  fit_model == "exp" ? framefit::FitModel::exponential
                                     : framefit::FitModel::algebraic,
                  fit_model.c_str());

    for (const framefit::ResultRow& r : rows)
      if (r.status != "ok") return 3;
    return 0;
  } catch (const framefit::ParameterError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
