#ifndef NCDR_BENCH_HPP_
#define NCDR_BENCH_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ncdr/dr_core.hpp"
#include "ncdr/feasibility.hpp"

namespace ncdr {

struct BenchConfig {
  std::vector<int> m_list;
  std::vector<int> n_list;
  int trials = 50;
  std::vector<MethodKind> methods = {MethodKind::dr_damped, MethodKind::alt_projection};
  std::uint64_t base_seed = 0;
  double tol = 1e-8;
  int max_iters = 20000;
  double success_threshold = 1e-12;
  double failure_threshold = 1e-6;
  GammaMode gamma_mode = GammaMode::adaptive;
  /// Fixed mode: the step size. Adaptive mode: the starting value
  /// (default 150 * gamma0 with gamma0 = sqrt(3/2) - 1).
  std::optional<double> gamma;
  double bound = 1e6;
  int workers = 1;
  /// Tail length kept per run for cycle detection (0 disables it).
  int cycle_window = 100;

  void validate() const;
  GammaPolicy policy() const;
  SolveOptions solve_options() const;
};

/// Per-trial seed: derive_seed({base_seed, m, n, trial}).
std::uint64_t trial_seed(std::uint64_t base_seed, int m, int n, int trial);

struct BenchRow {
  int m = 0;
  int n = 0;
  MethodKind method = MethodKind::dr_damped;
  double iter_mean = 0.0;
  double fval_max = 0.0;
  double fval_min = 0.0;
  int succ = 0;
  int fail = 0;
  double wall_time = 0.0;  // seconds summed over the cell's trials

  bool operator==(const BenchRow&) const = default;
};

struct TrialOutcome {
  int m = 0;
  int n = 0;
  MethodKind method = MethodKind::dr_damped;
  int trial = 0;
  std::uint64_t seed = 0;
  SolveStatus status = SolveStatus::max_iters;
  int iterations = 0;
  double objective = 0.0;
  double residual = 0.0;
  double seconds = 0.0;
  std::optional<int> cycle_period;
  std::string error;  // non-empty when the solver threw

  bool success(const BenchConfig& config) const { return objective < config.success_threshold; }
  bool failure(const BenchConfig& config) const { return !(objective <= config.failure_threshold); }
};

struct BenchRun {
  std::vector<BenchRow> rows;
  std::vector<TrialOutcome> outcomes;  // cell-major, then trial, then method
};

/// Every (m, n) cell with m <= n, every method, `trials` seeded instances
/// solved from the origin. Instances are shared across methods. Results do not
/// depend on the worker count (wall_time aside).
BenchRun run_benchmark_detailed(const BenchConfig& config);
std::vector<BenchRow> run_benchmark(const BenchConfig& config);

/// Aggregates outcomes of one cell and method. fval_max/fval_min cover all
/// trials, failed or errored ones included.
BenchRow aggregate(const std::vector<TrialOutcome>& outcomes, const BenchConfig& config);

enum class ResultFormat { csv, table };

/// Header m,n,method,iter_mean,fval_max,fval_min,succ,fail,wall_time; real
/// columns in scientific notation with 6 significant digits.
std::string format_csv(const std::vector<BenchRow>& rows);
std::vector<BenchRow> parse_csv(const std::string& text);
/// Aligned text table with the CSV's column order.
std::string render_table(const std::vector<BenchRow>& rows);
/// Writes to `path`, or to stdout when path is "-" or empty.
void emit_results(const std::vector<BenchRow>& rows, ResultFormat format, const std::string& path);

}  // namespace ncdr

#endif  // NCDR_BENCH_HPP_
