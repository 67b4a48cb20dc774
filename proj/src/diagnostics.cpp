#include "ncdr/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ncdr {

RateFit fit_rate(const std::vector<double>& residuals, int window) {
  if (window < 2) throw std::invalid_argument("fit_rate: window must be >= 2");
  if (static_cast<int>(residuals.size()) < window) {
    throw std::invalid_argument("fit_rate: fewer residuals than the window");
  }
  const std::size_t start = residuals.size() - static_cast<std::size_t>(window);

  double mean_t = 0.0, mean_v = 0.0;
  std::vector<double> logs(static_cast<std::size_t>(window));
  for (int k = 0; k < window; ++k) {
    const double r = residuals[start + static_cast<std::size_t>(k)];
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw std::invalid_argument("fit_rate: residuals must be positive and finite");
    }
    logs[static_cast<std::size_t>(k)] = std::log(r);
    mean_t += k;
    mean_v += logs[static_cast<std::size_t>(k)];
  }
  mean_t /= window;
  mean_v /= window;

  double stt = 0.0, stv = 0.0, svv = 0.0;
  for (int k = 0; k < window; ++k) {
    const double dt = k - mean_t;
    const double dv = logs[static_cast<std::size_t>(k)] - mean_v;
    stt += dt * dt;
    stv += dt * dv;
    svv += dv * dv;
  }
  const double slope = stv / stt;

  RateFit fit;
  fit.window = window;
  fit.raw_eta = std::exp(slope);
  // A flat sequence explains nothing.
  fit.r_squared = svv > 0.0 ? (stv * stv) / (stt * svv) : 0.0;
  if (fit.r_squared > 0.9 && window >= 20) {
    fit.eta = fit.raw_eta;
  }
  return fit;
}

RateFit fit_rate(const MeritTrace& trace, int window) {
  std::vector<double> residuals;
  residuals.reserve(trace.size());
  for (const auto& r : trace) residuals.push_back(r.residual);
  return fit_rate(residuals, window);
}

std::optional<int> detect_cycle(const std::vector<Vec>& history, int window, double tol) {
  if (window < 2) throw std::invalid_argument("detect_cycle: window must be >= 2");
  const int count = static_cast<int>(history.size());
  for (int p = 1; p <= window; ++p) {
    if (count < window + p) break;
    bool holds = true;
    for (int t = count - window; t < count && holds; ++t) {
      const Vec& xt = history[static_cast<std::size_t>(t)];
      holds = (xt - history[static_cast<std::size_t>(t - p)]).norm() <= tol * (1.0 + xt.norm());
    }
    if (holds) return p;
  }
  return std::nullopt;
}

double indefinite_lower_bound(const Mat& B) {
  if (B.rows() != B.cols() || B.rows() == 0) {
    throw std::invalid_argument("indefinite_lower_bound: B must be square and non-empty");
  }
  const double scale = B.cwiseAbs().maxCoeff();
  if ((B - B.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("indefinite_lower_bound: B is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(B, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("indefinite_lower_bound: eigen decomposition failed");
  }
  const Vec& lambda = eig.eigenvalues();  // ascending
  const double zero = 1e-12 * lambda.cwiseAbs().maxCoeff();
  if (!(lambda[0] < -zero) || !(lambda[lambda.size() - 1] > zero)) {
    throw std::invalid_argument("indefinite_lower_bound: B is not indefinite");
  }
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda[i] > zero) return lambda[i];
  }
  return lambda[lambda.size() - 1];
}

Mat build_prop41_matrix(double gamma, const Mat& A) {
  if (!(gamma > 0.0)) throw std::domain_error("build_prop41_matrix: gamma must be positive");
  const Eigen::Index n = A.cols();
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(A);
  cod.setThreshold(1e-10);
  if (cod.rank() < A.rows()) {
    throw std::invalid_argument("build_prop41_matrix: A must have full row rank");
  }
  const Mat pinv_a = cod.pseudoInverse() * A;
  // Symmetrize so B is bit-exactly symmetric.
  const Mat proj = 0.5 * (pinv_a + pinv_a.transpose());
  const Mat I = Mat::Identity(n, n) / gamma;

  Mat B = Mat::Zero(3 * n, 3 * n);
  B.block(0, 0, n, n) = proj + I;
  B.block(0, 2 * n, n, n) = -I;
  B.block(n, n, n, n) = -I;
  B.block(n, 2 * n, n, n) = I;
  B.block(2 * n, 0, n, n) = -I;
  B.block(2 * n, n, n, n) = I;
  return B;
}

}  // namespace ncdr
