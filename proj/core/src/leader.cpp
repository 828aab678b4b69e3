#include "pcmlead/leader.hpp"

#include <algorithm>
#include <string>

#include "pcmlead/matrix_io.hpp"

namespace pcmlead {

namespace {

void check_target(const AdditivePcm& a, int p) {
  if (p < 0 || p >= a.n()) {
    throw DomainError("target " + std::to_string(p) +
                      " out of range for n=" + std::to_string(a.n()));
  }
}

// Alternative immediately above p: the smallest weight strictly greater than
// w[p], ties among those going to the smallest index.
std::optional<int> directly_ahead(const PriorityVector& w, int p, double tol) {
  std::optional<int> best;
  for (int k = 0; k < w.size(); ++k) {
    if (w[k] <= w[p] + tol) continue;
    if (!best || w[k] < w[*best] - tol) best = k;
  }
  return best;
}

template <typename ChooseNext>
PromotionResult run(Algorithm algorithm, const AdditivePcm& input, int target,
                    const OrthogonalTieBasis& basis,
                    const PromotionOptions& options, ChooseNext choose_next) {
  check_target(input, target);
  if (basis.n != input.n()) {
    throw DimensionError("basis built for n=" + std::to_string(basis.n) +
                         " used on a matrix with n=" +
                         std::to_string(input.n()));
  }

  PromotionResult result{input, {algorithm, target, {}}};
  PriorityVector w = additive_ranking(input);
  while (!leads(w, target, options.tolerance)) {
    if (result.trace.iterations() >= input.n() - 1) {
      throw InvariantError("promotion did not finish within n-1 steps");
    }
    const int q = choose_next(w);
    result.matrix = eq(result.matrix, std::min(target, q),
                       std::max(target, q), basis);
    w = additive_ranking(result.matrix);

    PromotionStep step{q, result.matrix, w,
                       frobenius_distance(input, result.matrix), std::nullopt};
    if (options.bound) step.arsi = arsi(result.matrix, *options.bound);
    result.trace.steps.push_back(std::move(step));
  }
  return result;
}

}  // namespace

std::string_view to_string(Algorithm a) noexcept {
  return a == Algorithm::greedy ? "greedy" : "bubble";
}

std::optional<Algorithm> parse_algorithm(std::string_view s) noexcept {
  if (s == "greedy") return Algorithm::greedy;
  if (s == "bubble") return Algorithm::bubble;
  return std::nullopt;
}

bool leads(const PriorityVector& w, int p, double tolerance) {
  return w[p] >= w.weights().maxCoeff() - tolerance;
}

std::optional<int> tied_leader(const PriorityVector& w, int p,
                               double tolerance) {
  if (!leads(w, p, tolerance)) return std::nullopt;
  const double top = w.weights().maxCoeff();
  for (int k = 0; k < w.size(); ++k) {
    if (k != p && w[k] >= top - tolerance) return k;
  }
  return std::nullopt;
}

PromotionResult greedy_promote(const AdditivePcm& a, int target,
                               const OrthogonalTieBasis& basis,
                               const PromotionOptions& options) {
  return run(Algorithm::greedy, a, target, basis, options,
             [&](const PriorityVector& w) {
               return best_alternative(w, options.tolerance);
             });
}

PromotionResult bubble_promote(const AdditivePcm& a, int target,
                               const OrthogonalTieBasis& basis,
                               const PromotionOptions& options) {
  return run(Algorithm::bubble, a, target, basis, options,
             [&](const PriorityVector& w) {
               // Non-empty: run() only asks while the target does not lead.
               return *directly_ahead(w, target, options.tolerance);
             });
}

PromotionResult promote(Algorithm algorithm, const AdditivePcm& a, int target,
                        const OrthogonalTieBasis& basis,
                        const PromotionOptions& options) {
  return algorithm == Algorithm::greedy
             ? greedy_promote(a, target, basis, options)
             : bubble_promote(a, target, basis, options);
}

AdditivePcm nudge_leader(const AdditivePcm& a, int p, int q, double delta,
                         double tolerance) {
  check_target(a, p);
  check_target(a, q);
  if (p == q) throw DomainError("nudge needs two distinct alternatives");
  if (!(delta >= 0.0)) {
    throw DomainError("nudge delta must be non-negative, got " +
                      format_double(delta));
  }
  const PriorityVector w = additive_ranking(a);
  if (!leads(w, p, tolerance) || !leads(w, q, tolerance)) {
    throw DomainError("alternatives " + std::to_string(p + 1) + " and " +
                      std::to_string(q + 1) + " are not tied at the top");
  }
  Matrix m = a.entries();
  m(p, q) += delta;
  m(q, p) -= delta;
  return AdditivePcm(std::move(m));
}

}  // namespace pcmlead
