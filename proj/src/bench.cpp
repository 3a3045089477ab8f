#include "framefit/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "framefit/errors.hpp"
#include "framefit/jacobi.hpp"
#include "framefit/sampling.hpp"

namespace framefit {

const char* const kCsvHeader =
    "function,alpha,beta,gamma,epsilon,eta,n,m,uniform_error,sigma_min,kept_count,"
    "condition_estimate,wall_time_ms,status";

const std::vector<TestFunction>& corpus() {
  static const std::vector<TestFunction> table = [] {
    const double theta1 = 1.0 + std::sqrt(2.0);
    const double theta2 = (1.0 + std::sqrt(5.0)) / 2.0;
    const double theta3 = (10.0 + std::sqrt(19.0)) / 9.0;
    const double theta4 = std::sqrt(10.0 / 9.0) + 1.0 / 3.0;
    std::vector<TestFunction> t;
    t.push_back({"f1", [](double x) { return 1.0 / (1.0 + x * x); },
                 FunctionKind::analytic, theta1, std::nullopt});
    t.push_back({"f2", [](double x) { return 1.0 / (1.0 + 4.0 * x * x); },
                 FunctionKind::analytic, theta2, std::nullopt});
    t.push_back({"f3", [](double x) { return 1.0 / (10.0 - 9.0 * x); },
                 FunctionKind::analytic, theta3, std::nullopt});
    // Real surrogate 25 sqrt(10 - 9x^2): same branch points +-sqrt(10)/3,
    // hence the same Bernstein parameter theta4.
    t.push_back({"f4", [](double x) { return 25.0 * std::sqrt(10.0 - 9.0 * x * x); },
                 FunctionKind::analytic, theta4, std::nullopt});
    t.push_back({"f5", [](double x) { return std::abs(x); },
                 FunctionKind::differentiable, std::nullopt, 1.0});
    t.push_back({"f6", [](double x) { return std::pow(std::abs(std::sin(x)), 3.0); },
                 FunctionKind::differentiable, std::nullopt, 3.0});
    t.push_back({"f7", [](double x) { return std::pow(std::abs(x - 0.5), 5.0); },
                 FunctionKind::differentiable, std::nullopt, 5.0});
    t.push_back({"f8", [](double x) { return std::pow(std::abs(x - 0.25), 1.5); },
                 FunctionKind::differentiable, std::nullopt, 1.5});
    t.push_back({"f9", [](double x) { return std::pow(std::abs(x + 0.5), 7.0); },
                 FunctionKind::differentiable, std::nullopt, 7.0});
    return t;
  }();
  return table;
}

const TestFunction& corpus_function(const std::string& id) {
  for (const TestFunction& f : corpus())
    if (f.id == id) return f;
  throw ParameterError("unknown corpus function: " + id);
}

void ExperimentSpec::validate() const {
  if (functions.empty()) throw ParameterError("experiment needs at least one function");
  for (const std::string& id : functions) corpus_function(id);
  if (param_pairs.empty()) throw ParameterError("experiment needs at least one (alpha, beta) pair");
  for (const auto& [a, b] : param_pairs) JacobiParams<double>{a, b}.validate();
  if (gammas.empty()) throw ParameterError("experiment needs at least one gamma");
  for (double g : gammas)
    if (!(g > 1)) throw ParameterError("all gamma values must be > 1");
  if (epsilons.empty()) throw ParameterError("experiment needs at least one epsilon");
  for (double e : epsilons)
    if (!(e >= 0)) throw ParameterError("all epsilon values must be >= 0");
  if (etas.empty()) throw ParameterError("experiment needs at least one eta");
  for (double h : etas)
    if (!(h > 1)) throw ParameterError("all eta values must be > 1");
  if (n_step < 1) throw ParameterError("n step must be >= 1");
  if (n_start < 0 || n_stop < n_start) throw ParameterError("n range is empty");
  if (grid_size < 2) throw ParameterError("error grid needs at least 2 points");
}

std::vector<Eigen::Index> ExperimentSpec::degrees() const {
  std::vector<Eigen::Index> ns;
  for (Eigen::Index n = n_start; n <= n_stop; n += n_step) ns.push_back(n);
  return ns;
}

namespace {

bool double_eq(double a, double b) {
  return a == b || (std::isnan(a) && std::isnan(b));
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

bool rows_equal(const ResultRow& a, const ResultRow& b) {
  return a.function == b.function && double_eq(a.alpha, b.alpha) && double_eq(a.beta, b.beta) &&
         double_eq(a.gamma, b.gamma) && double_eq(a.epsilon, b.epsilon) &&
         double_eq(a.eta, b.eta) && a.n == b.n && a.m == b.m &&
         double_eq(a.uniform_error, b.uniform_error) && double_eq(a.sigma_min, b.sigma_min) &&
         a.kept_count == b.kept_count &&
         double_eq(a.condition_estimate, b.condition_estimate) &&
         double_eq(a.wall_time_ms, b.wall_time_ms) && a.status == b.status;
}

bool rows_equal(const std::vector<ResultRow>& a, const std::vector<ResultRow>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!rows_equal(a[i], b[i])) return false;
  return true;
}

ResultRow run_row(const TestFunction& f, double alpha, double beta, double gamma,
                  double epsilon, double eta, Eigen::Index n, Eigen::Index grid_size) {
  ResultRow row;
  row.function = f.id;
  row.alpha = alpha;
  row.beta = beta;
  row.gamma = gamma;
  row.epsilon = epsilon;
  row.eta = eta;
  row.n = n;
  row.m = oversample_count(eta, n);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto mark_failed = [&](const char* token) {
    row.uniform_error = nan;
    row.sigma_min = nan;
    row.condition_estimate = nan;
    row.kept_count = -1;
    row.status = token;
  };
  mark_failed("error");

  const auto start = std::chrono::steady_clock::now();
  try {
    if (grid_size < 2) throw ParameterError("error grid needs at least 2 points");
    const FrameSystem<double> sys(JacobiParams<double>{alpha, beta}, gamma, n);
    const FrameConfig<double> config = make_config(sys, eta, epsilon);
    row.m = config.m;

    const EquispacedGrid<double> grid = make_grid<double>(config.m);
    const SampleVector<double> samples = sample<double>(f.evaluator, grid);
    for (Eigen::Index k = 0; k < samples.values.size(); ++k)
      if (!std::isfinite(samples.values(k)))
        throw EvaluationError("sample value is not finite", grid.nodes(k));

    const TruncatedFactorization<double> fact = factorize(assemble(config), epsilon);
    row.sigma_min = fact.sigma(fact.sigma.size() - 1);
    row.kept_count = fact.kept_count;

    const FrameApproximant<double> approx = approximate(fact, config, samples);
    Eigen::VectorXd x(grid_size);
    for (Eigen::Index k = 0; k < grid_size; ++k)
      x(k) = -1.0 + 2.0 * double(k) / double(grid_size - 1);
    const Eigen::VectorXd fitted = evaluate_many(approx, x);
    if (fitted.hasNaN()) throw NumericalError("approximant evaluated to NaN");
    double err = 0;
    for (Eigen::Index k = 0; k < grid_size; ++k) {
      const double fx = f.evaluator(x(k));
      if (!std::isfinite(fx)) throw EvaluationError("function value is not finite", x(k));
      err = std::max(err, std::abs(fx - fitted(k)));
    }
    row.uniform_error = err;
    row.condition_estimate =
        condition_estimate(fact, config, std::max<Eigen::Index>(grid_size, 1000));
    row.status = "ok";
  } catch (const ParameterError&) {
    mark_failed("parameter_error");
  } catch (const DomainError&) {
    mark_failed("domain_error");
  } catch (const ShapeError&) {
    mark_failed("shape_error");
  } catch (const OverflowError&) {
    mark_failed("overflow_error");
  } catch (const EvaluationError&) {
    mark_failed("evaluation_error");
  } catch (const AssemblyError&) {
    mark_failed("assembly_error");
  } catch (const NumericalError&) {
    mark_failed("numerical_error");
  } catch (const std::exception&) {
    mark_failed("error");
  }
  row.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
          .count();
  return row;
}

namespace {

std::size_t sweep_thread_count(std::size_t tasks) {
  std::size_t threads = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("FRAMEFIT_THREADS")) {
    char* end = nullptr;
    const unsigned long parsed = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && parsed > 0) threads = parsed;
  }
  return std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(tasks, 1));
}

}  // namespace

std::vector<ResultRow> run_sweep(const ExperimentSpec& spec) {
  spec.validate();
  struct Task {
    const TestFunction* f;
    double alpha, beta, gamma, epsilon, eta;
    Eigen::Index n;
  };
  std::vector<Task> tasks;
  const std::vector<Eigen::Index> ns = spec.degrees();
  for (const std::string& id : spec.functions) {
    const TestFunction& f = corpus_function(id);
    for (const auto& [alpha, beta] : spec.param_pairs)
      for (double gamma : spec.gammas)
        for (double eps : spec.epsilons)
          for (double eta : spec.etas)
            for (Eigen::Index n : ns) tasks.push_back({&f, alpha, beta, gamma, eps, eta, n});
  }

  // Slot-indexed collection keeps the output order deterministic no matter
  // how the pool schedules the independent rows.
  std::vector<ResultRow> rows(tasks.size());
  auto run_task = [&](std::size_t i) {
    const Task& t = tasks[i];
    rows[i] = run_row(*t.f, t.alpha, t.beta, t.gamma, t.epsilon, t.eta, t.n, spec.grid_size);
  };
  const std::size_t threads = sweep_thread_count(tasks.size());
  if (threads <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
          run_task(i);
      });
    for (std::thread& th : pool) th.join();
  }
  return rows;
}

namespace {

std::vector<std::size_t> usable_rows(const std::vector<ResultRow>& curve) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const ResultRow& r = curve[i];
    if (r.status == "ok" && std::isfinite(r.uniform_error) && r.uniform_error > 0)
      idx.push_back(i);
  }
  return idx;
}

struct LineFit {
  double slope{}, intercept{}, rms{};
};

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = double(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0) throw WindowError("degenerate fit window (all abscissae equal)");
  LineFit out;
  out.slope = (n * sxy - sx * sy) / denom;
  out.intercept = (sy - out.slope * sx) / n;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d = ys[i] - (out.intercept + out.slope * xs[i]);
    ss += d * d;
  }
  out.rms = std::sqrt(ss / n);
  return out;
}

}  // namespace

double plateau_level(const std::vector<ResultRow>& curve) {
  const std::vector<std::size_t> idx = usable_rows(curve);
  if (idx.empty()) throw WindowError("no usable rows for a plateau level");
  std::vector<double> tail;
  for (std::size_t i = idx.size() >= 3 ? idx.size() - 3 : 0; i < idx.size(); ++i)
    tail.push_back(curve[idx[i]].uniform_error);
  std::sort(tail.begin(), tail.end());
  return tail[tail.size() / 2];
}

std::optional<double> detect_plateau(const std::vector<ResultRow>& curve) {
  const std::vector<std::size_t> idx = usable_rows(curve);
  if (idx.size() < 4) return std::nullopt;
  // A curve has plateaued when log(err) is nearly flat in n over the tail;
  // still-decaying algebraic curves keep a clearly negative slope.
  const std::size_t k = std::max<std::size_t>(4, idx.size() / 3);
  std::vector<double> xs, ys;
  for (std::size_t j = idx.size() - k; j < idx.size(); ++j) {
    xs.push_back(double(curve[idx[j]].n));
    ys.push_back(std::log(curve[idx[j]].uniform_error));
  }
  if (fit_line(xs, ys).slope >= -0.01) return plateau_level(curve);
  return std::nullopt;
}

std::vector<std::size_t> auto_fit_window(const std::vector<ResultRow>& curve) {
  const std::vector<std::size_t> idx = usable_rows(curve);
  const std::optional<double> level = detect_plateau(curve);
  if (!level) return idx;
  std::vector<std::size_t> out;
  for (std::size_t i : idx)
    if (curve[i].uniform_error > 10.0 * *level) out.push_back(i);
  return out;
}

FitResult fit_rate(const std::vector<ResultRow>& curve, FitModel model,
                   const std::vector<std::size_t>& window) {
  if (window.size() < 4) throw WindowError("rate fit needs at least 4 pre-plateau rows");
  const std::optional<double> level = detect_plateau(curve);
  std::vector<double> xs, ys;
  for (std::size_t i : window) {
    if (i >= curve.size()) throw WindowError("fit window index out of range");
    const ResultRow& r = curve[i];
    if (r.status != "ok" || !std::isfinite(r.uniform_error) || !(r.uniform_error > 0))
      throw WindowError("fit window contains an unusable row");
    if (level && r.uniform_error <= 10.0 * *level)
      throw WindowError("fit window contains plateau rows");
    if (model == FitModel::algebraic && r.n < 1)
      throw WindowError("algebraic fit needs n >= 1");
    xs.push_back(model == FitModel::exponential ? double(r.n) : std::log(double(r.n)));
    ys.push_back(std::log(r.uniform_error));
  }
  const LineFit line = fit_line(xs, ys);
  FitResult out;
  out.exponent = model == FitModel::exponential ? std::exp(-line.slope) : -line.slope;
  out.residual = line.rms;
  out.window_size = static_cast<Eigen::Index>(window.size());
  return out;
}

FitResult fit_rate(const std::vector<ResultRow>& curve, FitModel model) {
  return fit_rate(curve, model, auto_fit_window(curve));
}

void emit_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const ResultRow& r : rows)
    out << r.function << ',' << fmt(r.alpha) << ',' << fmt(r.beta) << ',' << fmt(r.gamma)
        << ',' << fmt(r.epsilon) << ',' << fmt(r.eta) << ',' << r.n << ',' << r.m << ','
        << fmt(r.uniform_error) << ',' << fmt(r.sigma_min) << ',' << r.kept_count << ','
        << fmt(r.condition_estimate) << ',' << fmt(r.wall_time_ms) << ',' << r.status << '\n';
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream file(path);
  if (!file) throw FileError("cannot open CSV output", path);
  emit_csv(rows, file);
  file.flush();
  if (!file) throw FileError("write to CSV output failed", path);
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> parts;
  std::string::size_type start = 0;
  while (true) {
    const std::string::size_type comma = line.find(',', start);
    if (comma == std::string::npos) {
      parts.push_back(line.substr(start));
      return parts;
    }
    parts.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double to_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty()) throw Error("malformed CSV number: " + s);
  return v;
}

Eigen::Index to_index(const std::string& s) {
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || s.empty()) throw Error("malformed CSV integer: " + s);
  return static_cast<Eigen::Index>(v);
}

}  // namespace

std::vector<ResultRow> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("empty CSV input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw Error("unexpected CSV header: " + line);
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> parts = split_fields(line);
    if (parts.size() != 14) throw Error("malformed CSV row: " + line);
    ResultRow r;
    r.function = parts[0];
    r.alpha = to_double(parts[1]);
    r.beta = to_double(parts[2]);
    r.gamma = to_double(parts[3]);
    r.epsilon = to_double(parts[4]);
    r.eta = to_double(parts[5]);
    r.n = to_index(parts[6]);
    r.m = to_index(parts[7]);
    r.uniform_error = to_double(parts[8]);
    r.sigma_min = to_double(parts[9]);
    r.kept_count = to_index(parts[10]);
    r.condition_estimate = to_double(parts[11]);
    r.wall_time_ms = to_double(parts[12]);
    r.status = parts[13];
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ResultRow> parse_csv_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw FileError("cannot open CSV input", path);
  return parse_csv(file);
}

void emit_singular_profile(const FrameConfig<double>& config, std::ostream& out,
                           Eigen::Index step) {
  if (step < 1) throw ParameterError("profile step must be >= 1");
  out << "n,index,sigma\n";
  for (Eigen::Index n = 1; n <= config.sys.max_degree(); n += step) {
    const FrameSystem<double> sub(config.sys.params(), config.sys.gamma(), n);
    const FrameConfig<double> cfg = make_config(sub, config.eta, config.epsilon);
    const TruncatedFactorization<double> fact = factorize(assemble(cfg), cfg.epsilon);
    for (Eigen::Index i = 0; i < fact.sigma.size(); ++i)
      out << n << ',' << i << ',' << fmt(fact.sigma(i)) << '\n';
  }
}

void emit_singular_profile(const FrameConfig<double>& config, const std::string& path,
                           Eigen::Index step) {
  std::ofstream file(path);
  if (!file) throw FileError("cannot open profile output", path);
  emit_singular_profile(config, file, step);
  file.flush();
  if (!file) throw FileError("write to profile output failed", path);
}

}  // namespace framefit
