#ifndef NCDR_DIAGNOSTICS_HPP_
#define NCDR_DIAGNOSTICS_HPP_

#include <optional>
#include <vector>

#include "ncdr/dr_core.hpp"

namespace ncdr {

struct RateFit {
  std::optional<double> eta;  // set only when the fit passes the quality gate
  double raw_eta = 0.0;       // exp(slope), whatever the fit quality
  double r_squared = 0.0;
  int window = 0;
};

/// Least-squares fit of log(residual) against t over the last `window`
/// records. `eta` is reported when r_squared > 0.9 and window >= 20.
RateFit fit_rate(const MeritTrace& trace, int window);
RateFit fit_rate(const std::vector<double>& residuals, int window);

/// Smallest period p <= window such that ||x^t - x^{t-p}|| <= tol (1 + ||x^t||)
/// for each of the last `window` iterates.
std::optional<int> detect_cycle(const std::vector<Vec>& history, int window = 100, double tol = 1e-9);

/// Smallest positive eigenvalue of a symmetric indefinite B; for every u,
/// ||B u||^2 >= alpha u^T B u.
double indefinite_lower_bound(const Mat& B);

/// [[A^+A + I/g, 0, -I/g], [0, -I/g, I/g], [-I/g, I/g, 0]], the Hessian of the
/// smooth part of the merit function at a solution of the affine-C problem.
Mat build_prop41_matrix(double gamma, const Mat& A);

}  // namespace ncdr

#endif  // NCDR_DIAGNOSTICS_HPP_
