#include "ncdr/sets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ncdr {

namespace {

void check_dim(const ProjectableSet& set, const Vec& x) {
  if (x.size() != set.dim()) {
    throw std::invalid_argument("dimension mismatch: expected " + std::to_string(set.dim()) +
                                ", got " + std::to_string(x.size()));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// AffineSet

AffineSet::AffineSet(Mat A, Vec b) : A_(std::move(A)), b_(std::move(b)) {
  const Eigen::Index m = A_.rows();
  const Eigen::Index n = A_.cols();
  if (b_.size() != m) {
    throw std::invalid_argument("AffineSet: A has " + std::to_string(m) + " rows but b has " +
                                std::to_string(b_.size()) + " entries");
  }
  if (m > n) {
    throw std::invalid_argument("AffineSet: more equations than unknowns");
  }
  if (m == 0) {
    q_.resize(n, 0);
    r_.resize(0, 0);
    perm_.setIdentity(0);
    return;
  }

  Eigen::ColPivHouseholderQR<Mat> qr(A_.transpose());
  qr.setThreshold(1e-10);
  if (qr.rank() < m) {
    throw std::invalid_argument("AffineSet: A is rank deficient (rank " + std::to_string(qr.rank()) +
                                " < " + std::to_string(m) + ")");
  }
  q_ = qr.householderQ() * Mat::Identity(n, m);
  r_ = qr.matrixR().topLeftCorner(m, m).triangularView<Eigen::Upper>();
  perm_ = qr.colsPermutation();

  const Vec residual = A_ * apply_pinv(b_) - b_;
  if (residual.norm() > 1e-8 * (1.0 + b_.norm())) {
    throw std::invalid_argument("AffineSet: inconsistent system");
  }
}

Vec AffineSet::apply_pinv(const Vec& r) const {
  if (A_.rows() == 0) return Vec::Zero(A_.cols());
  // A = P R^T Q^T, so A^+ = Q R^{-T} P^T.
  Vec w = perm_.transpose() * r;
  r_.transpose().triangularView<Eigen::Lower>().solveInPlace(w);
  return q_ * w;
}

Mat AffineSet::row_space_projector() const {
  return q_ * q_.transpose();
}

Vec AffineSet::project(const Vec& x) const {
  check_dim(*this, x);
  if (A_.rows() == 0) return x;
  return x - apply_pinv(A_ * x - b_);
}

bool AffineSet::contains(const Vec& x, double tol) const {
  check_dim(*this, x);
  if (A_.rows() == 0) return true;
  return (A_ * x - b_).norm() <= tol * (1.0 + b_.norm());
}

// ---------------------------------------------------------------------------
// SparseBoxSet

SparseBoxSet::SparseBoxSet(Eigen::Index n, int r, double bound) : n_(n), r_(r), bound_(bound) {
  if (n < 1) throw std::invalid_argument("SparseBoxSet: n must be positive");
  if (r < 1 || r > n) throw std::invalid_argument("SparseBoxSet: need 1 <= r <= n");
  if (!(bound > 0.0)) throw std::invalid_argument("SparseBoxSet: bound must be positive");
}

Vec SparseBoxSet::project(const Vec& x) const {
  check_dim(*this, x);
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n_));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  // Larger magnitude first, lower index on ties.
  auto before = [&x](Eigen::Index a, Eigen::Index b) {
    const double fa = std::abs(x[a]);
    const double fb = std::abs(x[b]);
    return fa > fb || (fa == fb && a < b);
  };
  if (r_ < n_) {
    std::nth_element(idx.begin(), idx.begin() + r_, idx.end(), before);
  }
  Vec z = Vec::Zero(n_);
  for (int k = 0; k < r_; ++k) {
    const Eigen::Index i = idx[static_cast<std::size_t>(k)];
    z[i] = std::clamp(x[i], -bound_, bound_);
  }
  return z;
}

bool SparseBoxSet::contains(const Vec& x, double tol) const {
  check_dim(*this, x);
  const auto nnz = (x.array() != 0.0).count();
  return nnz <= r_ && x.cwiseAbs().maxCoeff() <= bound_ + tol;
}

// ---------------------------------------------------------------------------
// ConsensusSet

ConsensusSet::ConsensusSet(int blocks, Eigen::Index block_dim, std::optional<double> radius)
    : blocks_(blocks), block_dim_(block_dim), radius_(radius) {
  if (blocks < 1 || block_dim < 1) throw std::invalid_argument("ConsensusSet: empty shape");
  if (radius && !(*radius >= 0.0)) throw std::invalid_argument("ConsensusSet: negative radius");
}

Vec ConsensusSet::project(const Vec& x) const {
  check_dim(*this, x);
  Vec u = Vec::Zero(block_dim_);
  for (int i = 0; i < blocks_; ++i) u += x.segment(i * block_dim_, block_dim_);
  u /= static_cast<double>(blocks_);
  if (radius_) {
    const double norm = u.norm();
    if (norm > *radius_) u *= *radius_ / norm;
  }
  Vec out(dim());
  for (int i = 0; i < blocks_; ++i) out.segment(i * block_dim_, block_dim_) = u;
  return out;
}

bool ConsensusSet::contains(const Vec& x, double tol) const {
  check_dim(*this, x);
  const auto first = x.head(block_dim_);
  for (int i = 1; i < blocks_; ++i) {
    if ((x.segment(i * block_dim_, block_dim_) - first).norm() > tol * (1.0 + first.norm())) {
      return false;
    }
  }
  return !radius_ || first.norm() <= *radius_ + tol;
}

// ---------------------------------------------------------------------------
// FinitePointSet

FinitePointSet::FinitePointSet(std::vector<Vec> points) : points_(std::move(points)) {
  if (points_.empty()) throw std::invalid_argument("FinitePointSet: no points");
  for (const auto& p : points_) {
    if (p.size() != points_.front().size()) {
      throw std::invalid_argument("FinitePointSet: points of differing dimension");
    }
  }
}

std::size_t FinitePointSet::nearest(const Vec& x) const {
  check_dim(*this, x);
  std::size_t best = 0;
  double best_d = (points_[0] - x).squaredNorm();
  for (std::size_t k = 1; k < points_.size(); ++k) {
    const double d = (points_[k] - x).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

Vec FinitePointSet::project(const Vec& x) const {
  return points_[nearest(x)];
}

bool FinitePointSet::contains(const Vec& x, double tol) const {
  check_dim(*this, x);
  return std::any_of(points_.begin(), points_.end(),
                     [&](const Vec& p) { return (p - x).norm() <= tol * (1.0 + p.norm()); });
}

// ---------------------------------------------------------------------------
// BoxSet / BallSet

BoxSet::BoxSet(Vec lower, Vec upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) throw std::invalid_argument("BoxSet: bound size mismatch");
  if ((lower_.array() > upper_.array()).any()) throw std::invalid_argument("BoxSet: empty box");
}

Vec BoxSet::project(const Vec& x) const {
  check_dim(*this, x);
  return x.cwiseMax(lower_).cwiseMin(upper_);
}

bool BoxSet::contains(const Vec& x, double tol) const {
  check_dim(*this, x);
  return ((x.array() >= lower_.array() - tol) && (x.array() <= upper_.array() + tol)).all();
}

BallSet::BallSet(Vec center, double radius) : center_(std::move(center)), radius_(radius) {
  if (!(radius >= 0.0)) throw std::invalid_argument("BallSet: negative radius");
}

Vec BallSet::project(const Vec& x) const {
  check_dim(*this, x);
  const Vec d = x - center_;
  const double norm = d.norm();
  if (norm <= radius_) return x;
  return center_ + d * (radius_ / norm);
}

bool BallSet::contains(const Vec& x, double tol) const {
  check_dim(*this, x);
  return (x - center_).norm() <= radius_ + tol;
}

// ---------------------------------------------------------------------------
// ProductSet

ProductSet::ProductSet(std::vector<SetPtr> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw std::invalid_argument("ProductSet: no factors");
  block_dim_ = factors_.front()->dim();
  for (const auto& f : factors_) {
    if (!f) throw std::invalid_argument("ProductSet: null factor");
    if (f->dim() != block_dim_) throw std::invalid_argument("ProductSet: factor dimension mismatch");
  }
}

Vec ProductSet::project(const Vec& x) const {
  check_dim(*this, x);
  Vec out(dim());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto off = static_cast<Eigen::Index>(i) * block_dim_;
    out.segment(off, block_dim_) = factors_[i]->project(x.segment(off, block_dim_));
  }
  return out;
}

bool ProductSet::contains(const Vec& x, double tol) const {
  check_dim(*this, x);
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto off = static_cast<Eigen::Index>(i) * block_dim_;
    if (!factors_[i]->contains(x.segment(off, block_dim_), tol)) return false;
  }
  return true;
}

bool ProductSet::is_convex() const {
  return std::all_of(factors_.begin(), factors_.end(), [](const SetPtr& f) { return f->is_convex(); });
}

Vec proj_affine(const AffineSet& set, const Vec& x) { return set.project(x); }
Vec proj_sparse_box(const SparseBoxSet& set, const Vec& x) { return set.project(x); }
Vec proj_consensus(const ConsensusSet& set, const Vec& x) { return set.project(x); }
Vec proj_finite(const FinitePointSet& set, const Vec& x) { return set.project(x); }

}  // namespace ncdr
