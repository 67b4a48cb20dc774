#include "ncdr/dr_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

namespace ncdr {

namespace {

bool all_finite(const DrIterate& s) {
  return s.y.allFinite() && s.z.allFinite() && s.x.allFinite();
}

// Gradient descent on f(y) + ||y - x||^2/(2 gamma), strongly convex with
// modulus 1/gamma - l and smooth with modulus L + 1/gamma.
Vec inner_prox(const SmoothOracle& f, const Vec& x, const Vec& warm, double gamma,
               const SolveOptions& options) {
  const double mu = 1.0 / gamma - f.curvature_l;
  if (!(mu > 0.0)) {
    throw std::domain_error("y-subproblem is not strongly convex: need 1/gamma > l");
  }
  const double smooth = f.lipschitz_L + 1.0 / gamma;
  const double step = 2.0 / (mu + smooth);
  const double stop = options.inner_tol * (1.0 + x.norm());

  Vec y = warm;
  for (int k = 0; k < options.inner_max_iters; ++k) {
    Vec grad = f.gradient(y) + (y - x) / gamma;
    if (grad.norm() <= stop) {
      return y;
    }
    y -= step * grad;
  }
  Vec grad = f.gradient(y) + (y - x) / gamma;
  if (grad.norm() <= stop) {
    return y;
  }
  throw InnerSolveError("inner y-update did not reach tolerance within " +
                        std::to_string(options.inner_max_iters) + " iterations");
}

}  // namespace

DrIterate DrIterate::start(const Vec& x0) {
  DrIterate s;
  s.y = x0;
  s.z = x0;
  s.x = x0;
  s.prev_x = x0;
  s.t = 0;
  return s;
}

GammaPolicy GammaPolicy::fixed(double gamma) {
  GammaPolicy p;
  p.mode = GammaMode::fixed;
  p.gamma = gamma;
  p.gamma0 = gamma;
  return p;
}

GammaPolicy GammaPolicy::adaptive(double gamma0, double multiplier) {
  GammaPolicy p;
  p.mode = GammaMode::adaptive;
  p.gamma0 = gamma0;
  p.gamma = multiplier * gamma0;
  return p;
}

double GammaPolicy::next_gamma(double current, int t, double dy, double y_norm) const {
  if (mode == GammaMode::fixed || current <= gamma0) {
    return current;
  }
  if (dy > trigger_c0 / t || y_norm > trigger_c1) {
    return std::max(shrink_factor * current, floor_factor * gamma0);
  }
  return current;
}

void GammaPolicy::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("gamma must be positive and finite");
  }
  if (mode == GammaMode::adaptive) {
    if (!(gamma0 > 0.0)) throw std::invalid_argument("gamma0 must be positive");
    if (!(shrink_factor > 0.0 && shrink_factor < 1.0)) {
      throw std::invalid_argument("shrink_factor must lie in (0, 1)");
    }
    if (!(floor_factor > 0.0 && floor_factor <= 1.0)) {
      throw std::invalid_argument("floor_factor must lie in (0, 1]");
    }
  }
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iters: return "max_iters";
    case SolveStatus::merit_violation: return "merit_violation";
    case SolveStatus::diverged: return "diverged";
    case SolveStatus::inner_failure: return "inner_failure";
  }
  return "unknown";
}

void write_trace_csv(const MeritTrace& trace, std::ostream& out) {
  out << "t,merit,dy,dx,yz_gap,residual,gamma\n";
  char buf[256];
  for (const auto& r : trace) {
    std::snprintf(buf, sizeof(buf), "%d,%.12e,%.12e,%.12e,%.12e,%.12e,%.12e\n", r.t, r.merit, r.dy,
                  r.dx, r.yz_gap, r.residual, r.gamma);
    out << buf;
  }
}

void write_trace_csv(const MeritTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open trace file: " + path);
  }
  write_trace_csv(trace, out);
  if (!out) {
    throw std::runtime_error("failed writing trace file: " + path);
  }
}

double gamma_threshold(double L, double l) {
  if (!(L > 0.0)) throw std::domain_error("gamma_threshold: L must be positive");
  if (l < -L) throw std::domain_error("gamma_threshold: l must be >= -L");
  // Positive root of L^2 g^2 + (2L + 2.5 l) g - 1/2 = 0.
  const double c = 2.5 * l + 2.0 * L;
  return (-c + std::sqrt(c * c + 2.0 * L * L)) / (2.0 * L * L);
}

double decrease_constant(double gamma, double L, double l) {
  if (!(gamma > 0.0)) throw std::domain_error("decrease_constant: gamma must be positive");
  const double a = 1.0 + gamma * L;
  const double k = (1.5 - a * a - 2.5 * gamma * l) / gamma;
  if (!(k > 0.0)) {
    throw std::domain_error("decrease_constant: gamma violates the step-size condition");
  }
  return k;
}

double theoretical_tau(double gamma, double L) {
  if (!(gamma > 0.0)) throw std::domain_error("theoretical_tau: gamma must be positive");
  return std::sqrt(3.0) * (1.0 + gamma * L) / gamma;
}

double merit(const Vec& y, const Vec& z, const Vec& x, double gamma, const SmoothOracle& f,
             const ProxOracle& g) {
  const double gz = g.value(z);
  if (gz == std::numeric_limits<double>::infinity()) {
    return gz;
  }
  const Vec yz = y - z;
  return f.value(y) + gz - yz.squaredNorm() / (2.0 * gamma) + (x - y).dot(z - y) / gamma;
}

double stationarity_residual(const DrIterate& state, double gamma, double L) {
  return (L + 1.0 / gamma) * (state.y - state.z).norm();
}

DrIterate dr_step(const DrIterate& state, double gamma, const SmoothOracle& f, const ProxOracle& g,
                  const SolveOptions& options) {
  if (!(gamma > 0.0)) throw std::domain_error("dr_step: gamma must be positive");
  DrIterate next;
  if (f.exact_prox) {
    next.y = f.exact_prox(state.x, gamma);
  } else {
    next.y = inner_prox(f, state.x, state.y, gamma, options);
  }
  next.z = g.prox(2.0 * next.y - state.x, gamma);
  next.x = state.x + (next.z - next.y);
  next.prev_x = state.x;
  next.t = state.t + 1;
  return next;
}

double relative_change(const DrIterate& prev, const DrIterate& next) {
  const double num = std::max({(next.x - prev.x).norm(), (next.y - prev.y).norm(),
                               (next.z - prev.z).norm()});
  const double den = std::max({prev.x.norm(), prev.y.norm(), prev.z.norm(), 1.0});
  return num / den;
}

void record_iterate(SolveReport& report, const Vec& x, const SolveOptions& options) {
  if (!options.record_iterates) return;
  auto& h = report.x_history;
  if (options.history_limit > 0 && static_cast<int>(h.size()) >= options.history_limit) {
    h.erase(h.begin(), h.begin() + (static_cast<int>(h.size()) - options.history_limit + 1));
  }
  h.push_back(x);
}

SolveReport solve(const SmoothOracle& f, const ProxOracle& g, const Vec& x0, const GammaPolicy& policy,
                  const SolveOptions& options) {
  policy.validate();
  if (options.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");

  SolveReport report;
  DrIterate state = DrIterate::start(x0);
  double gamma = policy.gamma;
  const double L = f.lipschitz_L;

  bool monitor = false;
  if (policy.mode == GammaMode::fixed) {
    monitor = gamma < gamma_threshold(L, f.curvature_l);
  }

  record_iterate(report, state.x, options);
  if (!x0.allFinite()) {
    report.status = SolveStatus::diverged;
    report.final_iterate = state;
    report.final_gamma = gamma;
    return report;
  }

  report.status = SolveStatus::max_iters;
  double prev_merit = std::numeric_limits<double>::quiet_NaN();
  for (int t = 1; t <= options.max_iters; ++t) {
    DrIterate next;
    try {
      next = dr_step(state, gamma, f, g, options);
    } catch (const InnerSolveError&) {
      report.status = SolveStatus::inner_failure;
      break;
    }
    if (!all_finite(next)) {
      state = std::move(next);
      report.iterations = t;
      report.status = SolveStatus::diverged;
      break;
    }

    const double dy = (next.y - state.y).norm();
    const double dx = (next.x - state.x).norm();
    const double change = relative_change(state, next);
    const double residual = stationarity_residual(next, gamma, L);

    double m = std::numeric_limits<double>::quiet_NaN();
    if (monitor || options.record_trace) {
      m = merit(next.y, next.z, next.x, gamma, f, g);
    }
    // Non-increase is only claimed from t = 1 onward, so the first comparison is D(2) vs D(1).
    if (monitor && t >= 2 && m > prev_merit + options.monotonicity_slack * (1.0 + std::abs(prev_merit))) {
      ++report.merit_violations;
    }
    prev_merit = m;

    if (options.record_trace) {
      report.trace.push_back({t, m, dy, dx, (next.y - next.z).norm(), residual, gamma});
    }
    record_iterate(report, next.x, options);

    state = std::move(next);
    report.iterations = t;

    if (change < options.tol && residual < options.residual_tol) {
      report.status = SolveStatus::converged;
      break;
    }
    gamma = policy.next_gamma(gamma, t, dy, state.y.norm());
  }

  if (report.merit_violations > 0 && report.status != SolveStatus::diverged &&
      report.status != SolveStatus::inner_failure) {
    report.status = SolveStatus::merit_violation;
  }
  report.final_iterate = state;
  report.final_gamma = gamma;
  report.final_residual = stationarity_residual(state, gamma, L);
  report.final_objective = all_finite(state) ? f.value(state.z) + g.value(state.z)
                                             : std::numeric_limits<double>::infinity();
  return report;
}

bool gradient_consistent(const SmoothOracle& f, const std::vector<Vec>& points, double rel_tol) {
  for (const auto& u : points) {
    const Vec grad = f.gradient(u);
    Vec fd(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      const double h = 1e-6 * (1.0 + std::abs(u[i]));
      Vec up = u, dn = u;
      up[i] += h;
      dn[i] -= h;
      fd[i] = (f.value(up) - f.value(dn)) / (2.0 * h);
    }
    if ((fd - grad).norm() > rel_tol * (1.0 + grad.norm())) {
      return false;
    }
  }
  return true;
}

}  // namespace ncdr
