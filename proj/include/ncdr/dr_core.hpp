#ifndef NCDR_DR_CORE_HPP_
#define NCDR_DR_CORE_HPP_

#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ncdr {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Smooth part f of min f(u) + g(u).
///
/// `lipschitz_L` bounds the Lipschitz modulus of the gradient and
/// `curvature_l` is any l with f + (l/2)||.||^2 convex (l = L always works).
/// When `exact_prox` is set it must return argmin_u f(u) + ||u - z||^2 / (2 gamma);
/// otherwise the solver minimizes that subproblem numerically.
struct SmoothOracle {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  double lipschitz_L = 1.0;
  double curvature_l = 1.0;
  std::function<Vec(const Vec&, double)> exact_prox;
};

/// Nonsmooth part g. `value` may return +infinity. `prox(z, gamma)` must
/// return a global minimizer of gamma*g(u) + ||u - z||^2 / 2 and be
/// deterministic (ties are the oracle's business).
struct ProxOracle {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&, double)> prox;
};

struct DrIterate {
  Vec y;
  Vec z;
  Vec x;
  Vec prev_x;
  int t = 0;

  /// Iterate at t = 0 with y = z = x = prev_x = x0.
  static DrIterate start(const Vec& x0);
};

enum class GammaMode { fixed, adaptive };

/// Step-size rule. Adaptive mode shrinks gamma to max(shrink*gamma,
/// floor*gamma0) whenever gamma > gamma0 and either ||y^t - y^{t-1}|| > c0/t
/// or ||y^t|| > c1.
struct GammaPolicy {
  GammaMode mode = GammaMode::fixed;
  double gamma = 0.1;
  double gamma0 = 0.0;
  double shrink_factor = 0.5;
  double floor_factor = 0.9999;
  double trigger_c0 = 1000.0;
  double trigger_c1 = 1e10;

  static GammaPolicy fixed(double gamma);
  /// Starts at `multiplier * gamma0`.
  static GammaPolicy adaptive(double gamma0, double multiplier = 150.0);

  /// Applies the shrink rule after iteration t; returns the gamma to use next.
  double next_gamma(double current, int t, double dy, double y_norm) const;
  void validate() const;
};

struct TraceRecord {
  int t = 0;
  double merit = 0.0;
  double dy = 0.0;       // ||y^t - y^{t-1}||
  double dx = 0.0;       // ||x^t - x^{t-1}||
  double yz_gap = 0.0;   // ||y^t - z^t||
  double residual = 0.0;
  double gamma = 0.0;
};

using MeritTrace = std::vector<TraceRecord>;

/// CSV columns: t,merit,dy,dx,yz_gap,residual,gamma
void write_trace_csv(const MeritTrace& trace, std::ostream& out);
void write_trace_csv(const MeritTrace& trace, const std::string& path);

enum class SolveStatus { converged, max_iters, merit_violation, diverged, inner_failure };

std::string to_string(SolveStatus status);

struct SolveOptions {
  int max_iters = 20000;
  double tol = 1e-8;
  /// Convergence additionally requires the stationarity residual below this.
  double residual_tol = 1e-6;
  double monotonicity_slack = 1e-10;
  bool record_trace = false;
  bool record_iterates = false;
  /// Keep only the most recent iterates in x_history (0 keeps all).
  int history_limit = 0;

  // Inner solver for the y-subproblem when f has no exact prox.
  int inner_max_iters = 10000;
  double inner_tol = 1e-12;
};

struct SolveReport {
  SolveStatus status = SolveStatus::max_iters;
  int iterations = 0;
  DrIterate final_iterate;
  double final_residual = 0.0;
  double final_objective = 0.0;
  double final_gamma = 0.0;
  int merit_violations = 0;
  MeritTrace trace;
  std::vector<Vec> x_history;  // x^0..x^T when record_iterates is set
};

/// Appends x to report.x_history when iterates are recorded, honoring history_limit.
void record_iterate(SolveReport& report, const Vec& x, const SolveOptions& options);

/// Thrown by dr_step when the inner y-subproblem solve does not reach tolerance.
class InnerSolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Supremum of step sizes with (1 + gamma L)^2 + 5 gamma l / 2 < 3/2.
double gamma_threshold(double L, double l);

/// K = ((3/2) - (1 + gamma L)^2 - 5 gamma l / 2) / gamma, the guaranteed
/// per-step merit decrease factor on ||y^{t+1} - y^t||^2.
double decrease_constant(double gamma, double L, double l);

/// sqrt(3) (1 + gamma L) / gamma; bounds dist(0, dD) by tau ||y^{t+1} - y^t||.
double theoretical_tau(double gamma, double L);

/// f(y) + g(z) - ||y - z||^2/(2 gamma) + <x - y, z - y>/gamma.
double merit(const Vec& y, const Vec& z, const Vec& x, double gamma, const SmoothOracle& f,
             const ProxOracle& g);

/// (L + 1/gamma) ||y - z||.
double stationarity_residual(const DrIterate& state, double gamma, double L);

/// One DR step: y = prox_{gamma f}(x), z = prox_{gamma g}(2y - x), x += z - y.
DrIterate dr_step(const DrIterate& state, double gamma, const SmoothOracle& f, const ProxOracle& g,
                  const SolveOptions& options = {});

/// max{||dx||, ||dy||, ||dz||} / max{||x_prev||, ||y_prev||, ||z_prev||, 1}.
double relative_change(const DrIterate& prev, const DrIterate& next);

SolveReport solve(const SmoothOracle& f, const ProxOracle& g, const Vec& x0, const GammaPolicy& policy,
                  const SolveOptions& options = {});

/// Central-difference gradient check at `points`; true when every point agrees
/// to `rel_tol` relative (scaled by 1 + ||grad||).
bool gradient_consistent(const SmoothOracle& f, const std::vector<Vec>& points, double rel_tol = 1e-5);

}  // namespace ncdr

#endif  // NCDR_DR_CORE_HPP_
