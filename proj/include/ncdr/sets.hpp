#ifndef NCDR_SETS_HPP_
#define NCDR_SETS_HPP_

#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "ncdr/dr_core.hpp"

namespace ncdr {

/// A closed set with an exact (global) Euclidean projection.
/// Implementations are immutable after construction and safe to share across threads.
class ProjectableSet {
 public:
  virtual ~ProjectableSet() = default;

  virtual Eigen::Index dim() const = 0;
  virtual Vec project(const Vec& x) const = 0;
  virtual bool contains(const Vec& x, double tol = 1e-8) const = 0;
  virtual bool is_convex() const = 0;
};

using SetPtr = std::shared_ptr<const ProjectableSet>;

/// {x : A x = b}. A must have full row rank; the QR factorization of A^T is
/// computed once and every projection applies A^+ through it.
class AffineSet final : public ProjectableSet {
 public:
  AffineSet(Mat A, Vec b);

  Eigen::Index dim() const override { return A_.cols(); }
  Vec project(const Vec& x) const override;
  bool contains(const Vec& x, double tol = 1e-8) const override;
  bool is_convex() const override { return true; }

  /// A^+ r without forming A^+.
  Vec apply_pinv(const Vec& r) const;
  /// A^+ A, the orthogonal projector onto the row space of A.
  Mat row_space_projector() const;

  const Mat& A() const { return A_; }
  const Vec& b() const { return b_; }

 private:
  Mat A_;
  Vec b_;
  Mat q_;                         // n x m, orthonormal columns spanning range(A^T)
  Mat r_;                         // m x m upper triangular
  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic> perm_;  // A^T P = Q R
};

/// {z : ||z||_0 <= r, ||z||_inf <= bound}.
class SparseBoxSet final : public ProjectableSet {
 public:
  SparseBoxSet(Eigen::Index n, int r, double bound = 1e6);

  Eigen::Index dim() const override { return n_; }
  Vec project(const Vec& x) const override;
  bool contains(const Vec& x, double tol = 1e-8) const override;
  bool is_convex() const override { return false; }

  int sparsity() const { return r_; }
  double bound() const { return bound_; }

 private:
  Eigen::Index n_;
  int r_;
  double bound_;
};

/// H = {x in R^{Mn} : x_1 = ... = x_M}, or H_R when a radius is given
/// (additionally ||x_1|| <= R).
class ConsensusSet final : public ProjectableSet {
 public:
  ConsensusSet(int blocks, Eigen::Index block_dim, std::optional<double> radius = std::nullopt);

  Eigen::Index dim() const override { return blocks_ * block_dim_; }
  Vec project(const Vec& x) const override;
  bool contains(const Vec& x, double tol = 1e-8) const override;
  bool is_convex() const override { return true; }

  int blocks() const { return blocks_; }
  Eigen::Index block_dim() const { return block_dim_; }
  std::optional<double> radius() const { return radius_; }

 private:
  int blocks_;
  Eigen::Index block_dim_;
  std::optional<double> radius_;
};

/// Finite set; projection returns the nearest point, lowest index on ties.
class FinitePointSet final : public ProjectableSet {
 public:
  explicit FinitePointSet(std::vector<Vec> points);

  Eigen::Index dim() const override { return points_.front().size(); }
  Vec project(const Vec& x) const override;
  bool contains(const Vec& x, double tol = 1e-8) const override;
  bool is_convex() const override { return points_.size() == 1; }

  /// Index of the projection.
  std::size_t nearest(const Vec& x) const;
  const std::vector<Vec>& points() const { return points_; }

 private:
  std::vector<Vec> points_;
};

class BoxSet final : public ProjectableSet {
 public:
  BoxSet(Vec lower, Vec upper);

  Eigen::Index dim() const override { return lower_.size(); }
  Vec project(const Vec& x) const override;
  bool contains(const Vec& x, double tol = 1e-8) const override;
  bool is_convex() const override { return true; }

 private:
  Vec lower_;
  Vec upper_;
};

class BallSet final : public ProjectableSet {
 public:
  BallSet(Vec center, double radius);

  Eigen::Index dim() const override { return center_.size(); }
  Vec project(const Vec& x) const override;
  bool contains(const Vec& x, double tol = 1e-8) const override;
  bool is_convex() const override { return true; }

 private:
  Vec center_;
  double radius_;
};

/// D_1 x ... x D_M with blockwise projection.
class ProductSet final : public ProjectableSet {
 public:
  explicit ProductSet(std::vector<SetPtr> factors);

  Eigen::Index dim() const override { return block_dim_ * static_cast<Eigen::Index>(factors_.size()); }
  Vec project(const Vec& x) const override;
  bool contains(const Vec& x, double tol = 1e-8) const override;
  bool is_convex() const override;

  const std::vector<SetPtr>& factors() const { return factors_; }
  Eigen::Index block_dim() const { return block_dim_; }

 private:
  std::vector<SetPtr> factors_;
  Eigen::Index block_dim_;
};

// Free-function forms of the projections.
Vec proj_affine(const AffineSet& set, const Vec& x);
Vec proj_sparse_box(const SparseBoxSet& set, const Vec& x);
Vec proj_consensus(const ConsensusSet& set, const Vec& x);
Vec proj_finite(const FinitePointSet& set, const Vec& x);

}  // namespace ncdr

#endif  // NCDR_SETS_HPP_
