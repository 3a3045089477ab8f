#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "framefit/frame.hpp"

namespace framefit {

enum class FunctionKind { analytic, differentiable };

// One corpus entry.  Analytic entries carry the Bernstein parameter of the
// nearest complex singularity; differentiable entries carry the expected
// algebraic rate.
struct TestFunction {
  std::string id;
  std::function<double(double)> evaluator;
  FunctionKind kind{};
  std::optional<double> theta;
  std::optional<double> rate_exponent;
};

// The nine benchmark functions f1..f9.
const std::vector<TestFunction>& corpus();
const TestFunction& corpus_function(const std::string& id);

// Cartesian sweep description; rows are produced for every
// function x (alpha,beta) x gamma x epsilon x eta tuple and every n in
// n_start..n_stop step n_step.
struct ExperimentSpec {
  std::vector<std::string> functions;
  std::vector<std::pair<double, double>> param_pairs;
  std::vector<double> gammas;
  std::vector<double> epsilons;
  std::vector<double> etas;
  Eigen::Index n_start = 2;
  Eigen::Index n_stop = 60;
  Eigen::Index n_step = 2;
  Eigen::Index grid_size = 10000;
  std::uint64_t seed = 0;

  void validate() const;
  std::vector<Eigen::Index> degrees() const;
};

struct ResultRow {
  std::string function;
  double alpha{}, beta{}, gamma{}, epsilon{}, eta{};
  Eigen::Index n{}, m{};
  double uniform_error{};
  double sigma_min{};
  Eigen::Index kept_count{};  // -1 when the row failed
  double condition_estimate{};
  double wall_time_ms{};
  std::string status;  // "ok" or an error token
};

// Field-wise equality with NaN == NaN (failed rows carry NaN numerics).
bool rows_equal(const ResultRow& a, const ResultRow& b);
bool rows_equal(const std::vector<ResultRow>& a, const std::vector<ResultRow>& b);

// One experiment point.  Failures are recorded in the status column with
// NaN numerics and kept_count = -1; they never propagate.
ResultRow run_row(const TestFunction& f, double alpha, double beta, double gamma,
                  double epsilon, double eta, Eigen::Index n, Eigen::Index grid_size);

// Full sweep; deterministic output order (tuple order, then n ascending)
// regardless of FRAMEFIT_THREADS.
std::vector<ResultRow> run_sweep(const ExperimentSpec& spec);

// Median of the last three uniform errors of a curve.
double plateau_level(const std::vector<ResultRow>& curve);

// Plateau level if the tail of the curve has stopped decaying (near-zero
// log-slope over the last max(4, N/3) rows), otherwise nullopt.
std::optional<double> detect_plateau(const std::vector<ResultRow>& curve);

// Pre-plateau row indices: everything above 10x the detected plateau, or
// all rows when no plateau is present.
std::vector<std::size_t> auto_fit_window(const std::vector<ResultRow>& curve);

enum class FitModel { exponential, algebraic };

struct FitResult {
  double exponent{};  // theta-hat (exponential) or k-hat (algebraic)
  double residual{};  // RMS misfit of the fitted line in log space
  Eigen::Index window_size{};
};

// Least-squares rate fit over the given window (indices into curve):
// exponential fits log(err) vs n and reports theta-hat = exp(-slope);
// algebraic fits log(err) vs log(n) and reports k-hat = -slope.
FitResult fit_rate(const std::vector<ResultRow>& curve, FitModel model,
                   const std::vector<std::size_t>& window);

// Same with the automatic pre-plateau window.
FitResult fit_rate(const std::vector<ResultRow>& curve, FitModel model);

// CSV with the fixed header; floats carry 17 significant digits.
void emit_csv(const std::vector<ResultRow>& rows, std::ostream& out);
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);
std::vector<ResultRow> parse_csv(std::istream& in);
std::vector<ResultRow> parse_csv_file(const std::string& path);

extern const char* const kCsvHeader;

// Singular-value profile n,index,sigma for subproblems of degree
// 1..max_degree (step selectable), each with m = round(eta * n).
void emit_singular_profile(const FrameConfig<double>& config, const std::string& path,
                           Eigen::Index step = 1);
void emit_singular_profile(const FrameConfig<double>& config, std::ostream& out,
                           Eigen::Index step = 1);

}  // namespace framefit
