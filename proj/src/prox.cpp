#include "ncdr/prox.hpp"

#include <limits>
#include <stdexcept>

namespace ncdr {

Vec prox_half_sqdist(const ProjectableSet& set, const Vec& x, double gamma) {
  if (!(gamma > 0.0)) throw std::domain_error("prox_half_sqdist: gamma must be positive");
  return (x + gamma * set.project(x)) / (1.0 + gamma);
}

Vec grad_half_sqdist(const ProjectableSet& set, const Vec& x) {
  return x - set.project(x);
}

double half_sqdist(const ProjectableSet& set, const Vec& x) {
  return 0.5 * (x - set.project(x)).squaredNorm();
}

SmoothOracle half_sqdist_oracle(SetPtr set) {
  if (!set) throw std::invalid_argument("half_sqdist_oracle: null set");
  if (!set->is_convex()) throw std::invalid_argument("half_sqdist_oracle: set must be convex");
  SmoothOracle f;
  f.value = [set](const Vec& x) { return half_sqdist(*set, x); };
  f.gradient = [set](const Vec& x) { return grad_half_sqdist(*set, x); };
  f.lipschitz_L = 1.0;
  f.curvature_l = 0.0;
  f.exact_prox = [set](const Vec& x, double gamma) { return prox_half_sqdist(*set, x, gamma); };
  return f;
}

ProxOracle indicator_oracle(SetPtr set, double tol) {
  if (!set) throw std::invalid_argument("indicator_oracle: null set");
  ProxOracle g;
  g.value = [set, tol](const Vec& x) {
    return set->contains(x, tol) ? 0.0 : std::numeric_limits<double>::infinity();
  };
  g.prox = [set](const Vec& x, double) { return set->project(x); };
  return g;
}

}  // namespace ncdr
