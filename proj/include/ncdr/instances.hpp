#ifndef NCDR_INSTANCES_HPP_
#define NCDR_INSTANCES_HPP_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <utility>

#include "ncdr/feasibility.hpp"
#include "ncdr/sets.hpp"

namespace ncdr {

/// Random underdetermined system A x = b with an r-sparse planted solution,
/// r = ceil(m / 5).
struct SparseInstance {
  int m = 0;
  int n = 0;
  int r = 0;
  std::uint64_t seed = 0;
  Mat A;
  Vec b;
  Vec planted;

  /// C = {Ax = b}, D = {||x||_0 <= r, ||x||_inf <= bound}.
  FeasibilityProblem problem(double bound = 1e6) const;
};

/// Draw order from Rng(seed): A row-major, then the r nonzero values, then the
/// support (partial Fisher-Yates over 0..n-1). b = A * planted.
SparseInstance gen_sparse_instance(int m, int n, std::uint64_t seed);

/// Text container: a magic line, "m n r seed", then A row by row, b, planted.
/// Values use 17 significant digits so a save/load round trip is exact.
void save_instance(const SparseInstance& inst, std::ostream& out);
void save_instance(const SparseInstance& inst, const std::string& path);
SparseInstance load_instance(std::istream& in);
SparseInstance load_instance(const std::string& path);

/// Closed-form damped-DR iterates for the three-point example
/// C = {x_2 = 0}, D = {(0,0), (7+eta, eta), (7, -eta)} from x^0 = (7, eta).
struct ExampleIterate {
  Vec y;
  Vec z;
  Vec x;
};

/// a_1 = 2 - 1/(1+gamma), a_{t+1} = gamma a_t / (1+gamma) + 1.
double example1_a(double gamma, int t);
ExampleIterate example1_reference(double eta, double gamma, int t);
ExampleIterate example1_limit(double eta, double gamma);
FeasibilityProblem example1_problem(double eta);

/// Exhaustive projection onto {||z||_0 <= r, ||z||_inf <= bound}: every support
/// of size <= r, clipped to the box; ties go to the lexicographically smallest
/// support. Limited to n <= 12.
Vec brute_force_sparse_proj(const Vec& x, int r, double bound);

/// Two random subspaces through the origin of dimensions d1 and d2 in R^n,
/// each as an AffineSet whose rows span its orthogonal complement.
std::pair<std::shared_ptr<AffineSet>, std::shared_ptr<AffineSet>> gen_transverse_subspaces(
    int n, int d1, int d2, std::uint64_t seed);

}  // namespace ncdr

#endif  // NCDR_INSTANCES_HPP_
