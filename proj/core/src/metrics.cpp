#include "svdrank/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace svdrank {

Permutation::Permutation(std::vector<std::size_t> order) : order_(std::move(order)) {
  std::vector<bool> seen(order_.size(), false);
  for (auto item : order_) {
    if (item >= order_.size() || seen[item]) {
      throw Error(ErrorCode::InvalidParam, "permutation is not a bijection");
    }
    seen[item] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  return Permutation(std::move(order));
}

Permutation Permutation::from_scores(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return Permutation(std::move(order));
}

std::vector<std::size_t> Permutation::ranks() const {
  std::vector<std::size_t> rank(order_.size());
  for (std::size_t pos = 0; pos < order_.size(); ++pos) rank[order_[pos]] = pos;
  return rank;
}

namespace {

std::size_t merge_count(std::vector<std::size_t>& v, std::vector<std::size_t>& tmp, std::size_t lo,
                        std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::size_t count = merge_count(v, tmp, lo, mid) + merge_count(v, tmp, mid, hi);
  std::size_t a = lo, b = mid, k = lo;
  while (a < mid && b < hi) {
    if (v[b] < v[a]) {
      count += mid - a;
      tmp[k++] = v[b++];
    } else {
      tmp[k++] = v[a++];
    }
  }
  while (a < mid) tmp[k++] = v[a++];
  while (b < hi) tmp[k++] = v[b++];
  std::copy(tmp.begin() + static_cast<std::ptrdiff_t>(lo),
            tmp.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return count;
}

class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : tree_(n + 1, 0) {}
  void add(std::size_t idx) {
    for (++idx; idx < tree_.size(); idx += idx & (~idx + 1)) ++tree_[idx];
  }
  // Count of added indices < idx.
  std::size_t prefix(std::size_t idx) const {
    std::size_t s = 0;
    for (; idx > 0; idx -= idx & (~idx + 1)) s += tree_[idx];
    return s;
  }

 private:
  std::vector<std::size_t> tree_;
};

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw Error(ErrorCode::DimensionMismatch, what);
}

Vector centered(std::span<const double> v) {
  Vector c(v.begin(), v.end());
  if (c.empty()) return c;
  const double mean = std::accumulate(c.begin(), c.end(), 0.0) / static_cast<double>(c.size());
  for (auto& x : c) x -= mean;
  return c;
}

}  // namespace

std::size_t kendall_distance(const Permutation& a, const Permutation& b) {
  require_same_size(a.size(), b.size(), "kendall_distance: sizes differ");
  const auto rank_b = b.ranks();
  std::vector<std::size_t> seq(a.size());
  for (std::size_t pos = 0; pos < a.size(); ++pos) seq[pos] = rank_b[a[pos]];
  std::vector<std::size_t> tmp(seq.size());
  return merge_count(seq, tmp, 0, seq.size());
}

double kendall_distance_normalized(const Permutation& a, const Permutation& b) {
  const double n = static_cast<double>(a.size());
  if (a.size() < 2) return 0.0;
  return static_cast<double>(kendall_distance(a, b)) / (n * (n - 1.0) / 2.0);
}

double pearson_correlation(std::span<const double> r, std::span<const double> r_hat) {
  require_same_size(r.size(), r_hat.size(), "pearson_correlation: sizes differ");
  const Vector a = centered(r);
  const Vector b = centered(r_hat);
  const double na = norm2(a);
  const double nb = norm2(b);
  if (na == 0.0 || nb == 0.0) {
    throw Error(ErrorCode::DegenerateVariance, "pearson_correlation: constant input");
  }
  return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

double rmse(std::span<const double> r, std::span<const double> r_hat, RmseVariant variant) {
  require_same_size(r.size(), r_hat.size(), "rmse: sizes differ");
  if (r.empty()) return 0.0;
  const Vector a = centered(r);
  const Vector b = centered(r_hat);
  double sq = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sq += (a[k] - b[k]) * (a[k] - b[k]);
  const double n = static_cast<double>(a.size());
  return variant == RmseVariant::Squared ? std::sqrt(sq / n) : std::sqrt(std::sqrt(sq) / n);
}

std::size_t count_upsets(const SkewSparseMatrix& R, std::span<const double> s) {
  require_same_size(R.n(), s.size(), "count_upsets: sizes differ");
  std::size_t upsets = 0;
  for (const auto& e : R.entries()) {
    const double est = s[e.i] - s[e.j];
    if ((e.value > 0.0 && est < 0.0) || (e.value < 0.0 && est > 0.0)) ++upsets;
  }
  return upsets;
}

double weighted_upsets(const SkewSparseMatrix& R, std::span<const double> s) {
  require_same_size(R.n(), s.size(), "weighted_upsets: sizes differ");
  double total = 0.0;
  for (const auto& e : R.entries()) total += std::abs(e.value - (s[e.i] - s[e.j]));
  return total;
}

std::size_t max_displacement(const Permutation& pi, const Permutation& pi_hat) {
  require_same_size(pi.size(), pi_hat.size(), "max_displacement: sizes differ");
  const std::size_t n = pi.size();
  const auto rank_hat = pi_hat.ranks();
  // Walk items in pi order. For the item at pi-position k, the items above it
  // in pi are exactly those already inserted; the count of them ranked below
  // it by pi_hat is (k - #inserted with smaller rank_hat). Items below it in
  // pi but above it in pi_hat number rank_hat - #(above in both).
  std::size_t worst = 0;
  Fenwick tree(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t item = pi[k];
    const std::size_t h = rank_hat[item];
    const std::size_t above_both = tree.prefix(h);
    const std::size_t above_pi_below_hat = k - above_both;
    const std::size_t below_pi_above_hat = h - above_both;
    worst = std::max(worst, above_pi_below_hat + below_pi_above_hat);
    tree.add(h);
  }
  return worst;
}

}  // namespace svdrank
