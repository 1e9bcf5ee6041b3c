#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "svdrank/linalg.hpp"

namespace svdrank {

/// Ranking as order[position] = item, position 0 being the top item.
class Permutation {
 public:
  Permutation() = default;
  /// Throws InvalidParam unless `order` is a bijection on [0, n).
  explicit Permutation(std::vector<std::size_t> order);

  static Permutation identity(std::size_t n);

  /// Stable descending sort of scores; ties go to the smaller item index.
  static Permutation from_scores(std::span<const double> scores);

  std::size_t size() const noexcept { return order_.size(); }
  const std::vector<std::size_t>& order() const noexcept { return order_; }
  std::size_t operator[](std::size_t position) const { return order_[position]; }

  /// rank[item] = position.
  std::vector<std::size_t> ranks() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> order_;
};

/// Number of item pairs ordered oppositely; O(n log n) inversion count.
std::size_t kendall_distance(const Permutation& a, const Permutation& b);

/// kendall_distance / C(n, 2); 0 for n < 2.
double kendall_distance_normalized(const Permutation& a, const Permutation& b);

/// Throws DegenerateVariance if either argument is constant.
double pearson_correlation(std::span<const double> r, std::span<const double> r_hat);

enum class RmseVariant {
  /// sqrt((1/n) * ||c - c_hat||^2)
  Squared,
  /// sqrt((1/n) * ||c - c_hat||)
  Unsquared,
};

/// RMSE between the centered versions of r and r_hat.
double rmse(std::span<const double> r, std::span<const double> r_hat,
            RmseVariant variant = RmseVariant::Squared);

/// Observed pairs i < j with sign(R_ij * (s_i - s_j)) = -1. Zero factors never
/// count as upsets.
std::size_t count_upsets(const SkewSparseMatrix& R, std::span<const double> s);

/// sum over observed i < j of |R_ij - (s_i - s_j)|.
double weighted_upsets(const SkewSparseMatrix& R, std::span<const double> s);

/// max_i of the number of items j placed on the other side of i by pi_hat
/// relative to pi; O(n log n) with a Fenwick tree.
std::size_t max_displacement(const Permutation& pi, const Permutation& pi_hat);

}  // namespace svdrank
