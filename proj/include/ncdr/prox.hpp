#ifndef NCDR_PROX_HPP_
#define NCDR_PROX_HPP_

#include "ncdr/sets.hpp"

namespace ncdr {

/// argmin_y (1/2) d_C(y)^2 + ||y - x||^2 / (2 gamma) = (x + gamma P_C(x)) / (1 + gamma).
Vec prox_half_sqdist(const ProjectableSet& set, const Vec& x, double gamma);

/// Gradient of (1/2) d_C^2, i.e. x - P_C(x). Lipschitz with L = 1, l = 0.
Vec grad_half_sqdist(const ProjectableSet& set, const Vec& x);

double half_sqdist(const ProjectableSet& set, const Vec& x);

/// f = (1/2) d_C^2 with L = 1, l = 0 and the closed-form prox. C must be convex.
SmoothOracle half_sqdist_oracle(SetPtr set);

/// g = indicator of the set; prox is the projection. `tol` feeds the membership test in value().
ProxOracle indicator_oracle(SetPtr set, double tol = 1e-8);

}  // namespace ncdr

#endif  // NCDR_PROX_HPP_
