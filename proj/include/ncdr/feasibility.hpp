#ifndef NCDR_FEASIBILITY_HPP_
#define NCDR_FEASIBILITY_HPP_

#include <optional>
#include <string>
#include <vector>

#include "ncdr/dr_core.hpp"
#include "ncdr/sets.hpp"

namespace ncdr {

/// Find a point of C ∩ D by minimizing (1/2) d_C^2 over D. C must be convex.
struct FeasibilityProblem {
  SetPtr C;
  SetPtr D;

  FeasibilityProblem(SetPtr c, SetPtr d);

  Eigen::Index dim() const { return C->dim(); }
  /// (1/2) d_C(u)^2.
  double objective(const Vec& u) const;
};

enum class MethodKind {
  dr_damped,       // DR on (1/2) d_C^2 + indicator_D
  alt_projection,  // x <- P_D(P_C(x))
  dr_classical,    // DR on indicator_C + indicator_D
};

/// "dr", "altproj", "classical".
std::string to_string(MethodKind method);
MethodKind parse_method(const std::string& name);

/// Runs one of the three methods from x0.
///
/// The reported objective is (1/2) d_C^2(z^t) for the DR methods and
/// (1/2) d_C^2(x^t) for alternating projection. `final_residual` is
/// (L + 1/gamma)||y - z|| for dr_damped, ||y - z|| for dr_classical and
/// ||x^t - x^{t-1}|| for alternating projection; trace rows carry the same
/// quantity. Alternating projection stops on ||x^t - x^{t-1}|| / max(||x^{t-1}||, 1) < tol;
/// the DR methods use the three-sequence rule of `relative_change`.
/// The gamma policy is ignored by the two methods that have no gamma.
SolveReport solve_feasibility(const FeasibilityProblem& problem, MethodKind method, const Vec& x0,
                              const GammaPolicy& policy, const SolveOptions& options = {});

/// Product-space lifting of M sets in R^n: C is the consensus set (with the
/// optional radius), D the product of the sets.
FeasibilityProblem lift_product(const std::vector<SetPtr>& sets, std::optional<double> radius = std::nullopt);

/// ||z_i - mean_j z_j|| for each block of a lifted iterate. This is a
/// computable surrogate for the per-block residual of the lifted problem; the
/// normal-cone term is omitted.
std::vector<double> consensus_block_residuals(const Vec& z, int blocks);

}  // namespace ncdr

#endif  // NCDR_FEASIBILITY_HPP_
