#include "ncdr/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ncdr/prox.hpp"

namespace ncdr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool finite(const DrIterate& s) {
  return s.y.allFinite() && s.z.allFinite() && s.x.allFinite();
}

SolveReport run_classical(const FeasibilityProblem& problem, const Vec& x0, const SolveOptions& options) {
  SolveReport report;
  DrIterate state = DrIterate::start(x0);
  record_iterate(report, state.x, options);
  report.status = SolveStatus::max_iters;

  for (int t = 1; t <= options.max_iters; ++t) {
    DrIterate next;
    next.y = problem.C->project(state.x);
    next.z = problem.D->project(2.0 * next.y - state.x);
    next.x = state.x + (next.z - next.y);
    next.prev_x = state.x;
    next.t = t;
    report.iterations = t;
    if (!finite(next)) {
      state = std::move(next);
      report.status = SolveStatus::diverged;
      break;
    }
    const double change = relative_change(state, next);
    const double residual = (next.y - next.z).norm();
    if (options.record_trace) {
      report.trace.push_back({t, kNaN, (next.y - state.y).norm(), (next.x - state.x).norm(), residual,
                              residual, kInf});
    }
    record_iterate(report, next.x, options);
    state = std::move(next);
    if (change < options.tol && residual < options.residual_tol) {
      report.status = SolveStatus::converged;
      break;
    }
  }
  report.final_iterate = state;
  report.final_gamma = kInf;
  report.final_residual = (state.y - state.z).norm();
  report.final_objective = finite(state) ? problem.objective(state.z) : kInf;
  return report;
}

SolveReport run_alt_projection(const FeasibilityProblem& problem, const Vec& x0,
                               const SolveOptions& options) {
  SolveReport report;
  DrIterate state = DrIterate::start(x0);
  record_iterate(report, state.x, options);
  report.status = SolveStatus::max_iters;
  double step = 0.0;

  for (int t = 1; t <= options.max_iters; ++t) {
    DrIterate next;
    next.y = problem.C->project(state.x);
    next.z = problem.D->project(next.y);
    next.x = next.z;
    next.prev_x = state.x;
    next.t = t;
    report.iterations = t;
    if (!finite(next)) {
      state = std::move(next);
      report.status = SolveStatus::diverged;
      break;
    }
    step = (next.x - state.x).norm();
    const double change = step / std::max(state.x.norm(), 1.0);
    if (options.record_trace) {
      report.trace.push_back({t, kNaN, (next.y - state.y).norm(), step, (next.y - next.z).norm(), step,
                              kInf});
    }
    record_iterate(report, next.x, options);
    state = std::move(next);
    if (change < options.tol && step < options.residual_tol) {
      report.status = SolveStatus::converged;
      break;
    }
  }
  report.final_iterate = state;
  report.final_gamma = kInf;
  report.final_residual = step;
  report.final_objective = finite(state) ? problem.objective(state.x) : kInf;
  return report;
}

}  // namespace

FeasibilityProblem::FeasibilityProblem(SetPtr c, SetPtr d) : C(std::move(c)), D(std::move(d)) {
  if (!C || !D) throw std::invalid_argument("FeasibilityProblem: null set");
  if (!C->is_convex()) throw std::invalid_argument("FeasibilityProblem: C must be convex");
  if (C->dim() != D->dim()) throw std::invalid_argument("FeasibilityProblem: dimension mismatch");
}

double FeasibilityProblem::objective(const Vec& u) const {
  return half_sqdist(*C, u);
}

std::string to_string(MethodKind method) {
  switch (method) {
    case MethodKind::dr_damped: return "dr";
    case MethodKind::alt_projection: return "altproj";
    case MethodKind::dr_classical: return "classical";
  }
  return "unknown";
}

MethodKind parse_method(const std::string& name) {
  if (name == "dr") return MethodKind::dr_damped;
  if (name == "altproj") return MethodKind::alt_projection;
  if (name == "classical") return MethodKind::dr_classical;
  throw std::invalid_argument("unknown method: " + name);
}

SolveReport solve_feasibility(const FeasibilityProblem& problem, MethodKind method, const Vec& x0,
                              const GammaPolicy& policy, const SolveOptions& options) {
  if (x0.size() != problem.dim()) throw std::invalid_argument("solve_feasibility: x0 dimension mismatch");
  if (options.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");

  switch (method) {
    case MethodKind::dr_damped: {
      const SmoothOracle f = half_sqdist_oracle(problem.C);
      const ProxOracle g = indicator_oracle(problem.D);
      SolveReport report = solve(f, g, x0, policy, options);
      if (report.final_iterate.z.allFinite()) {
        report.final_objective = problem.objective(report.final_iterate.z);
      }
      return report;
    }
    case MethodKind::alt_projection:
      return run_alt_projection(problem, x0, options);
    case MethodKind::dr_classical:
      return run_classical(problem, x0, options);
  }
  throw std::invalid_argument("solve_feasibility: unknown method");
}

FeasibilityProblem lift_product(const std::vector<SetPtr>& sets, std::optional<double> radius) {
  if (sets.size() < 2) throw std::invalid_argument("lift_product: need at least two sets");
  const Eigen::Index n = sets.front()->dim();
  for (const auto& s : sets) {
    if (!s || s->dim() != n) throw std::invalid_argument("lift_product: dimension mismatch");
  }
  auto c = std::make_shared<ConsensusSet>(static_cast<int>(sets.size()), n, radius);
  auto d = std::make_shared<ProductSet>(sets);
  return FeasibilityProblem(c, d);
}

std::vector<double> consensus_block_residuals(const Vec& z, int blocks) {
  if (blocks < 1 || z.size() % blocks != 0) {
    throw std::invalid_argument("consensus_block_residuals: dimension mismatch");
  }
  const Eigen::Index n = z.size() / blocks;
  Vec mean = Vec::Zero(n);
  for (int i = 0; i < blocks; ++i) mean += z.segment(i * n, n);
  mean /= static_cast<double>(blocks);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(blocks));
  for (int i = 0; i < blocks; ++i) out.push_back((z.segment(i * n, n) - mean).norm());
  return out;
}

}  // namespace ncdr
