#pragma once

#include <cstddef>
#include <vector>

namespace fracdense {

/// A multi-index alpha = (alpha_1, ..., alpha_n) of nonnegative integers.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);
  /// One-dimensional index (k).
  static MultiIndex scalar(int k) { return MultiIndex({k}); }

  [[nodiscard]] int dimension() const { return static_cast<int>(entries_.size()); }
  [[nodiscard]] int order() const;
  [[nodiscard]] double factorial() const;
  [[nodiscard]] const std::vector<int>& entries() const { return entries_; }
  [[nodiscard]] int operator[](std::size_t i) const { return entries_[i]; }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  /// Graded order: total order first, then reverse lexicographic.
  friend bool operator<(const MultiIndex& a, const MultiIndex& b);

 private:
  std::vector<int> entries_;
};

/// All multi-indices in dimension n with |alpha| <= max_order, graded order.
std::vector<MultiIndex> multi_indices_up_to(int n, int max_order);

/// Number of derivatives D^alpha with |alpha| <= m, counted as n^j per order j
/// (distinct orderings of mixed partials are listed separately).
std::size_t derivative_count(int n, int m);

/// Jet of a function at a point: D^alpha f(x) for |alpha| <= order.
/// Only n = 1 is populated by the pipeline; there index k holds the k-th
/// derivative.
class DerivativeVector {
 public:
  DerivativeVector() = default;
  DerivativeVector(int order, std::vector<double> values);

  [[nodiscard]] int order() const { return order_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] double operator[](std::size_t k) const { return values_[k]; }
  [[nodiscard]] double at(const MultiIndex& alpha) const;
  [[nodiscard]] const std::vector<double>& values() const { return values_; }

  /// Unit vector e_beta of length order + 1.
  static DerivativeVector unit(int order, int beta);

 private:
  int order_ = 0;
  std::vector<double> values_;
};

}  // namespace fracdense
