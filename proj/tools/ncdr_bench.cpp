// Command-line driver: solve one feasibility instance or sweep a benchmark grid.
//
//   ncdr_bench single --m 20 --n 100 --seed 7 --method dr --trace trace.csv
//   ncdr_bench single --example1 --eta 1 --gamma 0.2 --fixed
//   ncdr_bench bench --m 20 40 60 --n 400 --trials 20 --method dr altproj --format table
//
// Exit codes: 0 success, 1 usage error, 2 runtime error.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ncdr/bench.hpp"
#include "ncdr/diagnostics.hpp"
#include "ncdr/feasibility.hpp"
#include "ncdr/instances.hpp"

namespace {

const std::vector<std::string> kMethods = {"dr", "altproj", "classical"};

struct SolverFlags {
  std::optional<double> gamma;
  bool adaptive = false;
  bool fixed = false;
  double tol = 1e-8;
  int max_iters = 20000;
  double succ_thresh = 1e-12;
  double fail_thresh = 1e-6;
};

void add_solver_flags(CLI::App* app, SolverFlags& flags) {
  app->add_option("--gamma", flags.gamma, "Step size (fixed) or starting step size (adaptive)")
      ->check(CLI::PositiveNumber);
  auto* adaptive = app->add_flag("--adaptive", flags.adaptive, "Shrinking step-size rule");
  auto* fixed = app->add_flag("--fixed", flags.fixed, "Constant step size");
  adaptive->excludes(fixed);
  app->add_option("--tol", flags.tol, "Relative-change tolerance")->check(CLI::PositiveNumber);
  app->add_option("--max-iters", flags.max_iters, "Iteration cap")->check(CLI::PositiveNumber);
  app->add_option("--succ-thresh", flags.succ_thresh, "Success if final objective is below");
  app->add_option("--fail-thresh", flags.fail_thresh, "Failure if final objective is above");
}

void print_vec(const char* label, const ncdr::Vec& v) {
  std::printf("%s: (", label);
  for (Eigen::Index i = 0; i < v.size(); ++i) std::printf(i ? ", %.12g" : "%.12g", v[i]);
  std::printf(")\n");
}

int run_single(const SolverFlags& flags, bool example1, double eta, int m, int n, std::uint64_t seed,
               const std::string& method_name, const std::string& instance_path,
               const std::string& save_path, const std::string& trace_path) {
  const ncdr::MethodKind method = ncdr::parse_method(method_name);
  const double gamma0 = std::sqrt(1.5) - 1.0;

  std::optional<ncdr::FeasibilityProblem> problem;
  ncdr::Vec x0;
  bool use_fixed = flags.fixed;
  if (example1) {
    problem = ncdr::example1_problem(eta);
    x0 = ncdr::Vec(2);
    x0 << 7.0, eta;
    use_fixed = !flags.adaptive;
  } else {
    ncdr::SparseInstance inst =
        instance_path.empty() ? ncdr::gen_sparse_instance(m, n, seed) : ncdr::load_instance(instance_path);
    if (!save_path.empty()) ncdr::save_instance(inst, save_path);
    std::printf("instance: m=%d n=%d r=%d seed=%llu\n", inst.m, inst.n, inst.r,
                static_cast<unsigned long long>(inst.seed));
    problem = inst.problem();
    x0 = ncdr::Vec::Zero(inst.n);
  }

  ncdr::GammaPolicy policy;
  if (use_fixed) {
    policy = ncdr::GammaPolicy::fixed(flags.gamma.value_or(example1 ? 0.2 : 0.9 * gamma0));
  } else {
    policy = ncdr::GammaPolicy::adaptive(gamma0);
    if (flags.gamma) policy.gamma = *flags.gamma;
  }

  ncdr::SolveOptions options;
  options.tol = flags.tol;
  options.max_iters = flags.max_iters;
  options.record_trace = !trace_path.empty();
  options.record_iterates = true;
  options.history_limit = 201;

  const ncdr::SolveReport report = ncdr::solve_feasibility(*problem, method, x0, policy, options);
  std::printf("method: %s\n", ncdr::to_string(method).c_str());
  std::printf("status: %s\n", ncdr::to_string(report.status).c_str());
  std::printf("iterations: %d\n", report.iterations);
  std::printf("final_objective: %.6e\n", report.final_objective);
  std::printf("residual: %.6e\n", report.final_residual);
  if (std::isfinite(report.final_gamma)) std::printf("final_gamma: %.6g\n", report.final_gamma);
  const char* verdict = report.final_objective < flags.succ_thresh   ? "success"
                        : report.final_objective > flags.fail_thresh ? "failure"
                                                                     : "undecided";
  std::printf("outcome: %s\n", verdict);
  if (report.status == ncdr::SolveStatus::max_iters) {
    if (auto period = ncdr::detect_cycle(report.x_history, 100)) {
      std::printf("cycle: period %d\n", *period);
    }
  }
  if (report.final_iterate.y.size() <= 10) {
    print_vec("y", report.final_iterate.y);
    print_vec("z", report.final_iterate.z);
    print_vec("x", report.final_iterate.x);
  }
  if (!trace_path.empty()) ncdr::write_trace_csv(report.trace, trace_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Damped Douglas-Rachford splitting for sparse feasibility problems"};
  app.require_subcommand(1);

  // single
  auto* single = app.add_subcommand("single", "Solve one instance");
  SolverFlags single_flags;
  add_solver_flags(single, single_flags);
  int m = 20, n = 100;
  std::uint64_t seed = 0;
  std::string method = "dr";
  bool example1 = false;
  double eta = 1.0;
  std::string instance_path, save_path, trace_path;
  single->add_option("--m", m, "Rows of A")->check(CLI::Range(5, 1000000));
  single->add_option("--n", n, "Columns of A")->check(CLI::PositiveNumber);
  single->add_option("--seed", seed, "Instance seed");
  single->add_option("--method", method, "dr | altproj | classical")->check(CLI::IsMember(kMethods));
  single->add_flag("--example1", example1, "Three-point example in the plane, x0 = (7, eta)");
  single->add_option("--eta", eta, "Example parameter in (0, 1]")->check(CLI::Range(1e-300, 1.0));
  single->add_option("--instance", instance_path, "Load the instance from a file")->check(CLI::ExistingFile);
  single->add_option("--save-instance", save_path, "Write the generated instance to a file");
  single->add_option("--trace", trace_path, "Per-iteration trace CSV");

  // bench
  auto* bench = app.add_subcommand("bench", "Sweep (m, n, method) cells");
  SolverFlags bench_flags;
  add_solver_flags(bench, bench_flags);
  ncdr::BenchConfig config;
  config.m_list = {20, 40, 60};
  config.n_list = {400};
  config.trials = 20;
  std::vector<std::string> methods = {"dr", "altproj"};
  std::string out_path = "-";
  std::string format = "table";
  bench->add_option("--m", config.m_list, "Row counts")->check(CLI::Range(5, 1000000));
  bench->add_option("--n", config.n_list, "Column counts")->check(CLI::PositiveNumber);
  bench->add_option("--trials", config.trials, "Instances per cell")->check(CLI::PositiveNumber);
  bench->add_option("--seed", config.base_seed, "Base seed");
  bench->add_option("--method", methods, "Methods")->check(CLI::IsMember(kMethods));
  bench->add_option("--out", out_path, "Output file, - for stdout");
  bench->add_option("--format", format, "csv | table")->check(CLI::IsMember({"csv", "table"}));
  bench->add_option("--workers", config.workers, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*single) {
      if (single_flags.succ_thresh >= single_flags.fail_thresh) {
        std::cerr << "error: --succ-thresh must be below --fail-thresh\n";
        return 1;
      }
      return run_single(single_flags, example1, eta, m, n, seed, method, instance_path, save_path, trace_path);
    }
    config.methods.clear();
    for (const auto& name : methods) config.methods.push_back(ncdr::parse_method(name));
    config.tol = bench_flags.tol;
    config.max_iters = bench_flags.max_iters;
    config.success_threshold = bench_flags.succ_thresh;
    config.failure_threshold = bench_flags.fail_thresh;
    config.gamma_mode = bench_flags.fixed ? ncdr::GammaMode::fixed : ncdr::GammaMode::adaptive;
    config.gamma = bench_flags.gamma;
    try {
      config.validate();
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
    const auto rows = ncdr::run_benchmark(config);
    ncdr::emit_results(rows, format == "csv" ? ncdr::ResultFormat::csv : ncdr::ResultFormat::table, out_path);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
