#include "pcmlead/stability.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pcmlead/matrix_io.hpp"

namespace pcmlead {

namespace {

void check_index(const AdditivePcm& a, int i) {
  if (i < 0 || i >= a.n()) {
    throw DomainError("alternative index " + std::to_string(i) +
                      " out of range for n=" + std::to_string(a.n()));
  }
}

// Unchecked RSI from precomputed row sums.
double rsi_from_sums(const Vector& sums, int i, int j, double m) {
  return std::abs(sums(i) - sums(j)) / (2.0 * m);
}

}  // namespace

ScaleBound::ScaleBound(double m) : m_(m) {
  if (!(m > 0.0) || !std::isfinite(m)) {
    throw DomainError("scale bound must be a positive finite number, got " +
                      format_double(m));
  }
}

ScaleBound ScaleBound::saaty() { return ScaleBound(std::log(9.0)); }

void check_within_bound(const AdditivePcm& a, const ScaleBound& bound) {
  const double limit = bound.value() + kScaleSlack;
  for (int i = 0; i < a.n(); ++i) {
    for (int j = 0; j < a.n(); ++j) {
      if (std::abs(a(i, j)) > limit) {
        throw InvariantError("entry (" + std::to_string(i + 1) + "," +
                             std::to_string(j + 1) + ") = " +
                             format_double(a(i, j)) + " lies outside [-" +
                             format_double(bound.value()) + ", " +
                             format_double(bound.value()) + "]");
      }
    }
  }
}

double rsi(const AdditivePcm& a, int i, int j, const ScaleBound& bound) {
  check_index(a, i);
  check_index(a, j);
  check_within_bound(a, bound);
  const Vector sums = a.entries().rowwise().sum();
  return rsi_from_sums(sums, i, j, bound.value());
}

double rsi_min(const AdditivePcm& a, const ScaleBound& bound) {
  check_within_bound(a, bound);
  const Vector sums = a.entries().rowwise().sum();
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < a.n(); ++i) {
    for (int j = i + 1; j < a.n(); ++j) {
      best = std::min(best, rsi_from_sums(sums, i, j, bound.value()));
    }
  }
  return best;
}

double arsi(const AdditivePcm& a, const ScaleBound& bound) {
  check_within_bound(a, bound);
  const Vector sums = a.entries().rowwise().sum();
  const double n = a.n();
  double total = 0.0;
  for (int i = 0; i < a.n(); ++i) {
    for (int j = i; j < a.n(); ++j) {
      total += rsi_from_sums(sums, i, j, bound.value());
    }
  }
  return 2.0 / (n * (n - 1.0) * (n - 1.0)) * total;
}

Matrix rsi_matrix(const AdditivePcm& a, const ScaleBound& bound) {
  check_within_bound(a, bound);
  const Vector sums = a.entries().rowwise().sum();
  Matrix out(a.n(), a.n());
  for (int i = 0; i < a.n(); ++i) {
    for (int j = 0; j < a.n(); ++j) {
      out(i, j) = rsi_from_sums(sums, i, j, bound.value());
    }
  }
  return out;
}

}  // namespace pcmlead
