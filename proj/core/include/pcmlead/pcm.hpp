#pragma once

// Pairwise comparison matrices in additive (skew-symmetric, log-preference)
// and multiplicative (positive reciprocal, ratio) form, plus the geometry and
// ranking operations shared by the rest of the library.
//
// Alternatives are indexed from 0 throughout the C++ API. The command-line
// tool translates to and from 1-based numbering.

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <vector>

#include "pcmlead/errors.hpp"

namespace pcmlead {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr int kMinAlternatives = 3;
inline constexpr int kDefaultMaxAlternatives = 64;

/// Tolerance on a_ij + a_ji accepted by AdditivePcm before symmetrizing.
inline constexpr double kSkewTolerance = 1e-12;
/// Relative tolerance on m_ij * m_ji - 1 accepted by MultiplicativePcm.
inline constexpr double kReciprocityTolerance = 1e-12;

/// Upper bound on n enforced by constructors. Defaults to 64.
int max_alternatives() noexcept;
void set_max_alternatives(int cap);

/// Skew-symmetric n x n matrix of log-preferences.
class AdditivePcm {
 public:
  /// Validates a_ij + a_ji = 0 within kSkewTolerance, then stores (X - X^T)/2
  /// so the stored matrix is exactly skew-symmetric.
  explicit AdditivePcm(Matrix entries);

  static AdditivePcm zero(int n);

  int n() const noexcept { return static_cast<int>(entries_.rows()); }
  double operator()(int i, int j) const { return entries_(i, j); }
  const Matrix& entries() const noexcept { return entries_; }

  friend bool operator==(const AdditivePcm& a, const AdditivePcm& b) {
    return a.entries_ == b.entries_;
  }

 private:
  struct Trusted {};
  AdditivePcm(Matrix entries, Trusted) : entries_(std::move(entries)) {}
  friend AdditivePcm skew_part(const Matrix& x);

  Matrix entries_;
};

/// Returns (X - X^T)/2 without the reciprocity check. Used where a result is
/// skew-symmetric by construction up to rounding.
AdditivePcm skew_part(const Matrix& x);

/// Positive reciprocal n x n matrix of ratio judgments.
class MultiplicativePcm {
 public:
  /// Validates m_ij > 0, m_ii = 1 and m_ij * m_ji = 1 (relative 1e-12).
  explicit MultiplicativePcm(Matrix entries);

  static MultiplicativePcm ones(int n);

  int n() const noexcept { return static_cast<int>(entries_.rows()); }
  double operator()(int i, int j) const { return entries_(i, j); }
  const Matrix& entries() const noexcept { return entries_; }

 private:
  Matrix entries_;
};

/// Weights of the alternatives; larger is better.
class PriorityVector {
 public:
  PriorityVector() = default;
  explicit PriorityVector(Vector weights) : weights_(std::move(weights)) {}

  int size() const noexcept { return static_cast<int>(weights_.size()); }
  double operator[](int i) const { return weights_(i); }
  const Vector& weights() const noexcept { return weights_; }

 private:
  Vector weights_;
};

/// Bijection of {0..n-1}. Conjugating a matrix by it relabels alternatives:
/// slot k of the result holds alternative map[k] of the source.
class Permutation {
 public:
  explicit Permutation(std::vector<int> map);

  static Permutation identity(int n);
  static Permutation transposition(int n, int a, int b);

  int size() const noexcept { return static_cast<int>(map_.size()); }
  int operator()(int k) const { return map_[static_cast<std::size_t>(k)]; }
  std::span<const int> map() const noexcept { return map_; }

  Permutation inverse() const;
  /// (this * other)(k) = this(other(k)).
  Permutation compose(const Permutation& other) const;
  /// Dense permutation matrix P with P(k, map[k]) = 1, so that conjugation
  /// equals P A P^T.
  Matrix matrix() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> map_;
};

AdditivePcm to_additive(const MultiplicativePcm& m);
MultiplicativePcm to_multiplicative(const AdditivePcm& a);

double frobenius_inner(const AdditivePcm& a, const AdditivePcm& b);
double frobenius_norm(const AdditivePcm& a);
double frobenius_distance(const AdditivePcm& a, const AdditivePcm& b);

/// Row arithmetic means.
PriorityVector additive_ranking(const AdditivePcm& a);
/// Row geometric means.
PriorityVector geometric_ranking(const MultiplicativePcm& m);

/// Saaty's (lambda_max - n) / (n - 1), with the Perron root found by power
/// iteration from the all-ones vector. Throws ConvergenceError after
/// 10'000 iterations without reaching relative change 1e-12.
double consistency_index(const MultiplicativePcm& m);
double perron_eigenvalue(const MultiplicativePcm& m);

/// Index of the largest weight. Weights within `tolerance` of the maximum
/// count as tied, and ties go to the smallest index.
int best_alternative(const PriorityVector& w, double tolerance = 0.0);

/// result(k, l) = a(p(k), p(l)).
AdditivePcm permute_conjugate(const AdditivePcm& a, const Permutation& p);

/// Consistent multiplicative matrix m_ij = v_i / v_j.
MultiplicativePcm consistent_from_weights(std::span<const double> weights);

}  // namespace pcmlead
