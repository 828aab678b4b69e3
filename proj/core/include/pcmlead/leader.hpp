#pragma once

// Promoting a chosen alternative to the top of the ranking by repeated
// pairwise ties (eq()).
//
// greedy: tie the target with the current leader until the target leads.
// bubble: tie the target with the alternative directly above it until the
//         target leads; alternatives that are never tied keep their order.
//
// Both stop with the target's weight equal to the maximum (usually shared
// with the last alternative it was tied with); nudge_leader() breaks that tie.

#include <optional>
#include <string_view>
#include <vector>

#include "pcmlead/pcm.hpp"
#include "pcmlead/stability.hpp"
#include "pcmlead/tie_projection.hpp"

namespace pcmlead {

enum class Algorithm { greedy, bubble };

std::string_view to_string(Algorithm a) noexcept;
std::optional<Algorithm> parse_algorithm(std::string_view s) noexcept;

/// Weights closer than this are treated as equal by the promotion loops.
inline constexpr double kWeightTolerance = 1e-9;

struct PromotionOptions {
  /// When set, every step records ARSI under this bound.
  std::optional<ScaleBound> bound;
  double tolerance = kWeightTolerance;
};

struct PromotionStep {
  int equated = 0;  ///< alternative tied with the target in this step
  AdditivePcm matrix_after;
  PriorityVector ranking;
  double frobenius_from_input = 0.0;
  std::optional<double> arsi;
};

struct PromotionTrace {
  Algorithm algorithm = Algorithm::greedy;
  int target = 0;
  std::vector<PromotionStep> steps;

  int iterations() const noexcept { return static_cast<int>(steps.size()); }
};

struct PromotionResult {
  AdditivePcm matrix;
  PromotionTrace trace;
};

PromotionResult greedy_promote(const AdditivePcm& a, int target,
                               const OrthogonalTieBasis& basis,
                               const PromotionOptions& options = {});

PromotionResult bubble_promote(const AdditivePcm& a, int target,
                               const OrthogonalTieBasis& basis,
                               const PromotionOptions& options = {});

PromotionResult promote(Algorithm algorithm, const AdditivePcm& a, int target,
                        const OrthogonalTieBasis& basis,
                        const PromotionOptions& options = {});

/// True if w[p] is within `tolerance` of the largest weight.
bool leads(const PriorityVector& w, int p, double tolerance = kWeightTolerance);

/// Smallest index other than p that shares the top weight with p, if any.
std::optional<int> tied_leader(const PriorityVector& w, int p,
                               double tolerance = kWeightTolerance);

/// Adds delta to a_pq (and subtracts it from a_qp). Requires p and q to be
/// tied at the top of the row-mean ranking and delta >= 0.
AdditivePcm nudge_leader(const AdditivePcm& a, int p, int q, double delta,
                         double tolerance = kWeightTolerance);

}  // namespace pcmlead
