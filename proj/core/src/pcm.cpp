#include "pcmlead/pcm.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

namespace pcmlead {

namespace {

std::atomic<int> g_max_alternatives{kDefaultMaxAlternatives};

void check_square(const Matrix& x, const char* what) {
  if (x.rows() != x.cols()) {
    throw DimensionError(std::string(what) + ": matrix must be square, got " +
                         std::to_string(x.rows()) + "x" +
                         std::to_string(x.cols()));
  }
  const auto n = static_cast<int>(x.rows());
  if (n < kMinAlternatives) {
    throw DomainError(std::string(what) + ": need at least " +
                      std::to_string(kMinAlternatives) +
                      " alternatives, got " + std::to_string(n));
  }
  if (n > max_alternatives()) {
    throw DomainError(std::string(what) + ": " + std::to_string(n) +
                      " alternatives exceeds the cap of " +
                      std::to_string(max_alternatives()));
  }
  if (!x.allFinite()) {
    throw InvariantError(std::string(what) + ": non-finite entry");
  }
}

void check_same_size(const AdditivePcm& a, const AdditivePcm& b) {
  if (a.n() != b.n()) {
    throw DimensionError("matrices of different sizes: " +
                         std::to_string(a.n()) + " and " +
                         std::to_string(b.n()));
  }
}

}  // namespace

int max_alternatives() noexcept { return g_max_alternatives.load(); }

void set_max_alternatives(int cap) {
  if (cap < kMinAlternatives) {
    throw DomainError("alternative cap must be at least " +
                      std::to_string(kMinAlternatives));
  }
  g_max_alternatives.store(cap);
}

AdditivePcm::AdditivePcm(Matrix entries) {
  check_square(entries, "additive PCM");
  const auto n = entries.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      if (std::abs(entries(i, j) + entries(j, i)) > kSkewTolerance) {
        throw InvariantError("additive PCM is not skew-symmetric at (" +
                             std::to_string(i + 1) + "," +
                             std::to_string(j + 1) + ")");
      }
    }
  }
  entries_ = (entries - entries.transpose()) / 2.0;
}

AdditivePcm AdditivePcm::zero(int n) {
  return AdditivePcm(Matrix::Zero(n, n));
}

AdditivePcm skew_part(const Matrix& x) {
  check_square(x, "additive PCM");
  return AdditivePcm(Matrix((x - x.transpose()) / 2.0), AdditivePcm::Trusted{});
}

MultiplicativePcm::MultiplicativePcm(Matrix entries)
    : entries_(std::move(entries)) {
  check_square(entries_, "multiplicative PCM");
  const auto n = entries_.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (entries_(i, i) != 1.0) {
      throw InvariantError("multiplicative PCM diagonal entry (" +
                           std::to_string(i + 1) + "," +
                           std::to_string(i + 1) + ") is not 1");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!(entries_(i, j) > 0.0)) {
        throw InvariantError("multiplicative PCM entry (" +
                             std::to_string(i + 1) + "," +
                             std::to_string(j + 1) + ") is not positive");
      }
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (std::abs(entries_(i, j) * entries_(j, i) - 1.0) >
          kReciprocityTolerance) {
        throw InvariantError("multiplicative PCM is not reciprocal at (" +
                             std::to_string(i + 1) + "," +
                             std::to_string(j + 1) + ")");
      }
    }
  }
}

MultiplicativePcm MultiplicativePcm::ones(int n) {
  return MultiplicativePcm(Matrix::Ones(n, n));
}

Permutation::Permutation(std::vector<int> map) : map_(std::move(map)) {
  std::vector<bool> seen(map_.size(), false);
  for (int v : map_) {
    if (v < 0 || v >= size() || seen[static_cast<std::size_t>(v)]) {
      throw DomainError("not a permutation of 0.." + std::to_string(size() - 1));
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> map(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) map[static_cast<std::size_t>(k)] = k;
  return Permutation(std::move(map));
}

Permutation Permutation::transposition(int n, int a, int b) {
  auto p = identity(n);
  if (a < 0 || a >= n || b < 0 || b >= n) {
    throw DomainError("transposition index out of range");
  }
  std::swap(p.map_[static_cast<std::size_t>(a)],
            p.map_[static_cast<std::size_t>(b)]);
  return p;
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(map_.size());
  for (std::size_t k = 0; k < map_.size(); ++k) {
    inv[static_cast<std::size_t>(map_[k])] = static_cast<int>(k);
  }
  return Permutation(std::move(inv));
}

Permutation Permutation::compose(const Permutation& other) const {
  if (other.size() != size()) {
    throw DimensionError("composing permutations of different sizes");
  }
  std::vector<int> out(map_.size());
  for (std::size_t k = 0; k < map_.size(); ++k) {
    out[k] = (*this)(other(static_cast<int>(k)));
  }
  return Permutation(std::move(out));
}

Matrix Permutation::matrix() const {
  Matrix p = Matrix::Zero(size(), size());
  for (int k = 0; k < size(); ++k) p(k, (*this)(k)) = 1.0;
  return p;
}

AdditivePcm to_additive(const MultiplicativePcm& m) {
  const Matrix logs = m.entries().array().log().matrix();
  return skew_part(logs);
}

MultiplicativePcm to_multiplicative(const AdditivePcm& a) {
  Matrix m = a.entries().array().exp().matrix();
  // exp(-x) and 1/exp(x) can differ in the last bit; pin the lower triangle
  // to the reciprocal of the upper one.
  const auto n = m.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) m(j, i) = 1.0 / m(i, j);
  }
  return MultiplicativePcm(std::move(m));
}

double frobenius_inner(const AdditivePcm& a, const AdditivePcm& b) {
  check_same_size(a, b);
  return a.entries().cwiseProduct(b.entries()).sum();
}

double frobenius_norm(const AdditivePcm& a) {
  return std::sqrt(frobenius_inner(a, a));
}

double frobenius_distance(const AdditivePcm& a, const AdditivePcm& b) {
  check_same_size(a, b);
  return (a.entries() - b.entries()).norm();
}

PriorityVector additive_ranking(const AdditivePcm& a) {
  return PriorityVector(a.entries().rowwise().mean());
}

PriorityVector geometric_ranking(const MultiplicativePcm& m) {
  const Vector mean_logs = m.entries().array().log().matrix().rowwise().mean();
  return PriorityVector(mean_logs.array().exp().matrix());
}

double perron_eigenvalue(const MultiplicativePcm& m) {
  constexpr int kMaxIterations = 10'000;
  constexpr double kRelativeTolerance = 1e-12;

  const Matrix& x = m.entries();
  Vector v = Vector::Constant(x.rows(), 1.0 / static_cast<double>(x.rows()));
  double lambda = 0.0;
  for (int it = 0; it < kMaxIterations; ++it) {
    Vector next = x * v;
    // v is kept at unit 1-norm, so the 1-norm of Mv is the Rayleigh-type
    // estimate that converges to the Perron root for positive M.
    const double estimate = next.sum();
    next /= estimate;
    v = std::move(next);
    if (it > 0 && std::abs(estimate - lambda) <= kRelativeTolerance * estimate) {
      return estimate;
    }
    lambda = estimate;
  }
  throw ConvergenceError("power iteration did not converge for lambda_max");
}

double consistency_index(const MultiplicativePcm& m) {
  const double n = m.n();
  return (perron_eigenvalue(m) - n) / (n - 1.0);
}

int best_alternative(const PriorityVector& w, double tolerance) {
  if (w.size() == 0) throw DomainError("empty priority vector");
  const double top = w.weights().maxCoeff();
  for (int k = 0; k < w.size(); ++k) {
    if (w[k] >= top - tolerance) return k;
  }
  return 0;  // unreachable for finite weights
}

AdditivePcm permute_conjugate(const AdditivePcm& a, const Permutation& p) {
  if (p.size() != a.n()) {
    throw DimensionError("permutation of size " + std::to_string(p.size()) +
                         " applied to a " + std::to_string(a.n()) +
                         "x" + std::to_string(a.n()) + " matrix");
  }
  const int n = a.n();
  Matrix out(n, n);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) out(k, l) = a(p(k), p(l));
  }
  return AdditivePcm(std::move(out));
}

MultiplicativePcm consistent_from_weights(std::span<const double> weights) {
  const auto n = static_cast<Eigen::Index>(weights.size());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(weights[static_cast<std::size_t>(i)] > 0.0)) {
      throw DomainError("weights must be positive");
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      m(i, j) = weights[static_cast<std::size_t>(i)] /
                weights[static_cast<std::size_t>(j)];
      m(j, i) = 1.0 / m(i, j);
    }
  }
  return MultiplicativePcm(std::move(m));
}

}  // namespace pcmlead
