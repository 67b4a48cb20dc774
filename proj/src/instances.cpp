#include "ncdr/instances.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "ncdr/dr_core.hpp"
#include "ncdr/rng.hpp"

namespace ncdr {

// ---------------------------------------------------------------------------
// Rng

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (std::uint64_t p : parts) h = mix64(h ^ mix64(p));
  return h;
}

Rng::Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below: empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return v % bound;
}

std::vector<std::size_t> Rng::sample_without_replacement(std::size_t n, std::size_t k) {
  if (k > n) throw std::invalid_argument("sample_without_replacement: k > n");
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

// ---------------------------------------------------------------------------
// Sparse instances

FeasibilityProblem SparseInstance::problem(double bound) const {
  auto c = std::make_shared<AffineSet>(A, b);
  auto d = std::make_shared<SparseBoxSet>(n, r, bound);
  return FeasibilityProblem(c, d);
}

SparseInstance gen_sparse_instance(int m, int n, std::uint64_t seed) {
  if (m < 5) throw std::domain_error("gen_sparse_instance: m must be >= 5");
  if (m > n) throw std::domain_error("gen_sparse_instance: m must be <= n");

  SparseInstance inst;
  inst.m = m;
  inst.n = n;
  inst.r = (m + 4) / 5;
  inst.seed = seed;

  Rng rng(seed);
  inst.A.resize(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) inst.A(i, j) = rng.normal();
  }
  Vec values(inst.r);
  for (int k = 0; k < inst.r; ++k) values[k] = rng.normal();
  const auto support = rng.sample_without_replacement(static_cast<std::size_t>(n),
                                                      static_cast<std::size_t>(inst.r));
  inst.planted = Vec::Zero(n);
  for (int k = 0; k < inst.r; ++k) {
    inst.planted[static_cast<Eigen::Index>(support[static_cast<std::size_t>(k)])] = values[k];
  }
  inst.b = inst.A * inst.planted;
  return inst;
}

namespace {

constexpr const char* kMagic = "ncdr-sparse-instance v1";

void write_row(std::ostream& out, const double* data, Eigen::Index count) {
  char buf[40];
  for (Eigen::Index j = 0; j < count; ++j) {
    std::snprintf(buf, sizeof(buf), "%.17g", data[j]);
    if (j > 0) out << ' ';
    out << buf;
  }
  out << '\n';
}

}  // namespace

void save_instance(const SparseInstance& inst, std::ostream& out) {
  out << kMagic << '\n';
  out << inst.m << ' ' << inst.n << ' ' << inst.r << ' ' << inst.seed << '\n';
  for (int i = 0; i < inst.m; ++i) {
    const Vec row = inst.A.row(i).transpose();
    write_row(out, row.data(), row.size());
  }
  write_row(out, inst.b.data(), inst.b.size());
  write_row(out, inst.planted.data(), inst.planted.size());
}

void save_instance(const SparseInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open instance file for writing: " + path);
  save_instance(inst, out);
  if (!out) throw std::runtime_error("failed writing instance file: " + path);
}

SparseInstance load_instance(std::istream& in) {
  std::string magic;
  std::getline(in, magic);
  if (magic != kMagic) throw std::runtime_error("not an instance file (bad header)");
  SparseInstance inst;
  if (!(in >> inst.m >> inst.n >> inst.r >> inst.seed)) {
    throw std::runtime_error("instance file: bad size line");
  }
  if (inst.m < 0 || inst.n < 1 || inst.m > inst.n || inst.r < 1 || inst.r > inst.n) {
    throw std::runtime_error("instance file: inconsistent sizes");
  }
  inst.A.resize(inst.m, inst.n);
  inst.b.resize(inst.m);
  inst.planted.resize(inst.n);
  auto read = [&in](double& v) {
    if (!(in >> v)) throw std::runtime_error("instance file: truncated or malformed data");
  };
  for (int i = 0; i < inst.m; ++i) {
    for (int j = 0; j < inst.n; ++j) read(inst.A(i, j));
  }
  for (int i = 0; i < inst.m; ++i) read(inst.b[i]);
  for (int j = 0; j < inst.n; ++j) read(inst.planted[j]);
  return inst;
}

SparseInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  return load_instance(in);
}

// ---------------------------------------------------------------------------
// Three-point example

namespace {

void check_example_domain(double eta, double gamma) {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::domain_error("example: eta must lie in (0, 1]");
  if (!(gamma > 0.0 && gamma < std::sqrt(1.5) - 1.0)) {
    throw std::domain_error("example: gamma must lie in (0, sqrt(3/2) - 1)");
  }
}

Vec point(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

}  // namespace

double example1_a(double gamma, int t) {
  if (t < 1) throw std::domain_error("example1_a: t must be >= 1");
  double a = 2.0 - 1.0 / (1.0 + gamma);
  for (int k = 1; k < t; ++k) a = gamma * a / (1.0 + gamma) + 1.0;
  return a;
}

ExampleIterate example1_reference(double eta, double gamma, int t) {
  check_example_domain(eta, gamma);
  if (t < 1) throw std::domain_error("example1_reference: t must be >= 1");
  ExampleIterate it;
  it.z = point(7.0 + eta, eta);
  it.x = point(7.0 + eta, example1_a(gamma, t) * eta);
  if (t == 1) {
    it.y = point(7.0, eta / (1.0 + gamma));
  } else {
    it.y = point(7.0 + eta, example1_a(gamma, t - 1) * eta / (1.0 + gamma));
  }
  return it;
}

ExampleIterate example1_limit(double eta, double gamma) {
  check_example_domain(eta, gamma);
  return {point(7.0 + eta, eta), point(7.0 + eta, eta), point(7.0 + eta, (1.0 + gamma) * eta)};
}

FeasibilityProblem example1_problem(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::domain_error("example: eta must lie in (0, 1]");
  Mat A(1, 2);
  A << 0.0, 1.0;
  auto c = std::make_shared<AffineSet>(A, Vec::Zero(1));
  auto d = std::make_shared<FinitePointSet>(
      std::vector<Vec>{point(0.0, 0.0), point(7.0 + eta, eta), point(7.0, -eta)});
  return FeasibilityProblem(c, d);
}

// ---------------------------------------------------------------------------
// Reference oracles

Vec brute_force_sparse_proj(const Vec& x, int r, double bound) {
  const int n = static_cast<int>(x.size());
  if (n < 1 || n > 12) throw std::domain_error("brute_force_sparse_proj: need 1 <= n <= 12");
  if (r < 0) throw std::domain_error("brute_force_sparse_proj: r must be >= 0");
  const int max_size = std::min(r, n);

  Vec best = Vec::Zero(n);
  double best_d = x.squaredNorm();
  std::vector<int> support;
  // Lexicographic enumeration of combinations, size by size.
  for (int size = 1; size <= max_size; ++size) {
    support.resize(static_cast<std::size_t>(size));
    for (int k = 0; k < size; ++k) support[static_cast<std::size_t>(k)] = k;
    while (true) {
      Vec cand = Vec::Zero(n);
      for (int i : support) cand[i] = std::clamp(x[i], -bound, bound);
      const double d = (cand - x).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = cand;
      }
      int k = size - 1;
      while (k >= 0 && support[static_cast<std::size_t>(k)] == n - size + k) --k;
      if (k < 0) break;
      ++support[static_cast<std::size_t>(k)];
      for (int j = k + 1; j < size; ++j) {
        support[static_cast<std::size_t>(j)] = support[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
  }
  return best;
}

std::pair<std::shared_ptr<AffineSet>, std::shared_ptr<AffineSet>> gen_transverse_subspaces(
    int n, int d1, int d2, std::uint64_t seed) {
  if (n < 1) throw std::domain_error("gen_transverse_subspaces: n must be positive");
  if (d1 < 1 || d1 > n || d2 < 1 || d2 > n) {
    throw std::domain_error("gen_transverse_subspaces: dimensions must lie in [1, n]");
  }
  if (d1 + d2 <= n) throw std::domain_error("gen_transverse_subspaces: need d1 + d2 > n");

  auto make = [n](int d, std::uint64_t stream) {
    Rng rng(stream);
    Mat basis(n, d);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < d; ++j) basis(i, j) = rng.normal();
    }
    Eigen::HouseholderQR<Mat> qr(basis);
    const Mat q = qr.householderQ() * Mat::Identity(n, n);
    const Mat complement = q.rightCols(n - d).transpose();
    return std::make_shared<AffineSet>(complement, Vec::Zero(n - d));
  };
  return {make(d1, derive_seed({seed, 1})), make(d2, derive_seed({seed, 2}))};
}

}  // namespace ncdr
