#include "ncdr/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ncdr/diagnostics.hpp"
#include "ncdr/instances.hpp"
#include "ncdr/rng.hpp"

namespace ncdr {

namespace {

constexpr const char* kCsvHeader = "m,n,method,iter_mean,fval_max,fval_min,succ,fail,wall_time";

struct Cell {
  int m;
  int n;
};

std::vector<Cell> cells_of(const BenchConfig& config) {
  std::vector<Cell> cells;
  for (int m : config.m_list) {
    for (int n : config.n_list) {
      if (m <= n) cells.push_back({m, n});
    }
  }
  return cells;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.5e", v);
  return buf;
}

std::vector<TrialOutcome> run_trial(const BenchConfig& config, const Cell& cell, int trial) {
  std::vector<TrialOutcome> out;
  const std::uint64_t seed = trial_seed(config.base_seed, cell.m, cell.n, trial);
  const GammaPolicy policy = config.policy();
  const SolveOptions options = config.solve_options();

  std::optional<SparseInstance> inst;
  std::optional<FeasibilityProblem> problem;
  std::string setup_error;
  try {
    inst = gen_sparse_instance(cell.m, cell.n, seed);
    problem = inst->problem(config.bound);
  } catch (const std::exception& e) {
    setup_error = e.what();
  }

  for (MethodKind method : config.methods) {
    TrialOutcome o;
    o.m = cell.m;
    o.n = cell.n;
    o.method = method;
    o.trial = trial;
    o.seed = seed;
    o.objective = std::numeric_limits<double>::infinity();
    o.residual = std::numeric_limits<double>::infinity();
    if (!problem) {
      o.error = setup_error;
      out.push_back(o);
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    try {
      const SolveReport report = solve_feasibility(*problem, method, Vec::Zero(cell.n), policy, options);
      o.status = report.status;
      o.iterations = report.iterations;
      o.objective = report.final_objective;
      o.residual = report.final_residual;
      if (config.cycle_window > 0 && report.status == SolveStatus::max_iters) {
        o.cycle_period = detect_cycle(report.x_history, config.cycle_window);
      }
    } catch (const std::exception& e) {
      o.error = e.what();
    }
    o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace

void BenchConfig::validate() const {
  if (m_list.empty() || n_list.empty()) throw std::invalid_argument("bench: empty m or n list");
  for (int m : m_list) {
    if (m < 5) throw std::invalid_argument("bench: every m must be >= 5");
  }
  if (cells_of(*this).empty()) throw std::invalid_argument("bench: no cell with m <= n");
  if (trials < 1) throw std::invalid_argument("bench: trials must be >= 1");
  if (methods.empty()) throw std::invalid_argument("bench: no methods selected");
  if (!(tol > 0.0)) throw std::invalid_argument("bench: tol must be positive");
  if (max_iters < 1) throw std::invalid_argument("bench: max_iters must be >= 1");
  if (!(success_threshold < failure_threshold)) {
    throw std::invalid_argument("bench: success threshold must be below failure threshold");
  }
  if (workers < 1) throw std::invalid_argument("bench: workers must be >= 1");
  if (gamma && !(*gamma > 0.0)) throw std::invalid_argument("bench: gamma must be positive");
  if (!(bound > 0.0)) throw std::invalid_argument("bench: bound must be positive");
  if (cycle_window < 0) throw std::invalid_argument("bench: cycle window must be >= 0");
  if (cycle_window == 1) throw std::invalid_argument("bench: cycle window must be 0 or >= 2");
}

GammaPolicy BenchConfig::policy() const {
  const double gamma0 = std::sqrt(1.5) - 1.0;
  if (gamma_mode == GammaMode::fixed) {
    return GammaPolicy::fixed(gamma.value_or(0.9 * gamma0));
  }
  GammaPolicy p = GammaPolicy::adaptive(gamma0);
  if (gamma) p.gamma = *gamma;
  return p;
}

SolveOptions BenchConfig::solve_options() const {
  SolveOptions o;
  o.tol = tol;
  o.max_iters = max_iters;
  if (cycle_window > 0) {
    o.record_iterates = true;
    o.history_limit = 2 * cycle_window + 1;
  }
  return o;
}

std::uint64_t trial_seed(std::uint64_t base_seed, int m, int n, int trial) {
  return derive_seed({base_seed, static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(n),
                      static_cast<std::uint64_t>(trial)});
}

BenchRow aggregate(const std::vector<TrialOutcome>& outcomes, const BenchConfig& config) {
  if (outcomes.empty()) throw std::invalid_argument("aggregate: no outcomes");
  BenchRow row;
  row.m = outcomes.front().m;
  row.n = outcomes.front().n;
  row.method = outcomes.front().method;
  row.fval_max = -std::numeric_limits<double>::infinity();
  row.fval_min = std::numeric_limits<double>::infinity();
  double iters = 0.0;
  for (const auto& o : outcomes) {
    iters += o.iterations;
    row.fval_max = std::max(row.fval_max, o.objective);
    row.fval_min = std::min(row.fval_min, o.objective);
    if (o.success(config)) ++row.succ;
    if (o.failure(config)) ++row.fail;
    row.wall_time += o.seconds;
  }
  row.iter_mean = iters / static_cast<double>(outcomes.size());
  return row;
}

BenchRun run_benchmark_detailed(const BenchConfig& config) {
  config.validate();
  const auto cells = cells_of(config);
  const std::size_t jobs = cells.size() * static_cast<std::size_t>(config.trials);
  std::vector<std::vector<TrialOutcome>> slots(jobs);

  auto work = [&](std::size_t job) {
    const Cell& cell = cells[job / static_cast<std::size_t>(config.trials)];
    const int trial = static_cast<int>(job % static_cast<std::size_t>(config.trials));
    slots[job] = run_trial(config, cell, trial);
  };

  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(config.workers), jobs);
  if (workers <= 1) {
    for (std::size_t j = 0; j < jobs; ++j) work(j);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t j = next++; j < jobs; j = next++) work(j);
      });
    }
    for (auto& t : pool) t.join();
  }

  BenchRun run;
  for (const auto& s : slots) run.outcomes.insert(run.outcomes.end(), s.begin(), s.end());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (std::size_t k = 0; k < config.methods.size(); ++k) {
      std::vector<TrialOutcome> cell_outcomes;
      for (int t = 0; t < config.trials; ++t) {
        cell_outcomes.push_back(slots[c * static_cast<std::size_t>(config.trials) + static_cast<std::size_t>(t)][k]);
      }
      run.rows.push_back(aggregate(cell_outcomes, config));
    }
  }
  return run;
}

std::vector<BenchRow> run_benchmark(const BenchConfig& config) {
  return run_benchmark_detailed(config).rows;
}

std::string format_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.m << ',' << r.n << ',' << to_string(r.method) << ',' << sci(r.iter_mean) << ','
        << sci(r.fval_max) << ',' << sci(r.fval_min) << ',' << r.succ << ',' << r.fail << ','
        << sci(r.wall_time) << '\n';
  }
  return out.str();
}

std::vector<BenchRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::runtime_error("results csv: unexpected header");
  }
  std::vector<BenchRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 9) throw std::runtime_error("results csv: expected 9 fields: " + line);
    try {
      BenchRow r;
      r.m = std::stoi(fields[0]);
      r.n = std::stoi(fields[1]);
      r.method = parse_method(fields[2]);
      r.iter_mean = std::stod(fields[3]);
      r.fval_max = std::stod(fields[4]);
      r.fval_min = std::stod(fields[5]);
      r.succ = std::stoi(fields[6]);
      r.fail = std::stoi(fields[7]);
      r.wall_time = std::stod(fields[8]);
      rows.push_back(r);
    } catch (const std::invalid_argument&) {
      throw std::runtime_error("results csv: malformed row: " + line);
    }
  }
  return rows;
}

std::string render_table(const std::vector<BenchRow>& rows) {
  const std::vector<std::string> header = {"m", "n", "method", "iter_mean", "fval_max",
                                           "fval_min", "succ", "fail", "wall_time"};
  std::vector<std::vector<std::string>> cells;
  char buf[64];
  for (const auto& r : rows) {
    std::vector<std::string> c;
    c.push_back(std::to_string(r.m));
    c.push_back(std::to_string(r.n));
    c.push_back(to_string(r.method));
    std::snprintf(buf, sizeof(buf), "%.1f", r.iter_mean);
    c.push_back(buf);
    std::snprintf(buf, sizeof(buf), "%.0e", r.fval_max);
    c.push_back(buf);
    std::snprintf(buf, sizeof(buf), "%.0e", r.fval_min);
    c.push_back(buf);
    c.push_back(std::to_string(r.succ));
    c.push_back(std::to_string(r.fail));
    std::snprintf(buf, sizeof(buf), "%.2f", r.wall_time);
    c.push_back(buf);
    cells.push_back(std::move(c));
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t j = 0; j < header.size(); ++j) {
    width[j] = header[j].size();
    for (const auto& c : cells) width[j] = std::max(width[j], c[j].size());
  }
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& c) {
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (j > 0) out << "  ";
      out << std::string(width[j] - c[j].size(), ' ') << c[j];
    }
    out << '\n';
  };
  emit(header);
  for (const auto& c : cells) emit(c);
  return out.str();
}

void emit_results(const std::vector<BenchRow>& rows, ResultFormat format, const std::string& path) {
  if (rows.empty()) throw std::invalid_argument("emit_results: no rows");
  const std::string text = format == ResultFormat::csv ? format_csv(rows) : render_table(rows);
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

}  // namespace ncdr
