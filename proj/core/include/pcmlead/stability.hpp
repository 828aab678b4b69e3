#pragma once

// Ranking stability indices. For a scale bound M on the entries,
//
//   RSI_ij  = |sum_k (a_ik - a_jk)| / (2M)             in [0, n-1]
//   RSI_min = min over i < j of RSI_ij
//   ARSI    = 2 / (n (n-1)^2) * sum over i <= j of RSI_ij   in [0, 1]
//
// Small values mean that a small change of the matrix is enough to swap
// alternatives in the ranking.

#include "pcmlead/pcm.hpp"

namespace pcmlead {

/// Symmetric bound [-M, M] on additive entries, M > 0.
class ScaleBound {
 public:
  explicit ScaleBound(double m);

  /// ln 9, the additive image of Saaty's 1/9..9 scale.
  static ScaleBound saaty();

  double value() const noexcept { return m_; }

 private:
  double m_;
};

/// Slack on |a_ij| <= M accepted by the index functions.
inline constexpr double kScaleSlack = 1e-9;

/// Throws InvariantError naming the first entry outside [-M - slack, M + slack].
void check_within_bound(const AdditivePcm& a, const ScaleBound& bound);

double rsi(const AdditivePcm& a, int i, int j, const ScaleBound& bound);

/// Minimum over distinct pairs. The i = j terms are always zero and are left
/// out so the minimum carries information.
double rsi_min(const AdditivePcm& a, const ScaleBound& bound);

/// Normalized sum over 1 <= i <= j <= n (diagonal terms contribute zero).
double arsi(const AdditivePcm& a, const ScaleBound& bound);

/// Full n x n table of RSI_ij.
Matrix rsi_matrix(const AdditivePcm& a, const ScaleBound& bound);

}  // namespace pcmlead
