#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "oracles.hpp"
#include "svdrank/metrics.hpp"
#include "svdrank/random.hpp"

using namespace svdrank;

namespace {

Permutation shuffled(std::size_t n, std::uint64_t seed) {
  StreamRng rng(seed, 0);
  Vector s(n);
  for (auto& x : s) x = rng.uniform01();
  return Permutation::from_scores(s);
}

Vector random_vector(std::size_t n, std::uint64_t seed) {
  StreamRng rng(seed, 1);
  Vector v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected svdrank::Error");
  return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("permutation construction") {
  CHECK(Permutation::from_scores(Vector{0.5, 2.0, 1.0}).order() == std::vector<std::size_t>{1, 2, 0});
  CHECK(Permutation::from_scores(Vector{1.0, 1.0, 1.0}) == Permutation::identity(3));
  CHECK(Permutation({2, 0, 1}).ranks() == std::vector<std::size_t>{1, 2, 0});
  CHECK(code_of([] { Permutation({0, 0, 1}); }) == ErrorCode::InvalidParam);
  CHECK(code_of([] { Permutation({0, 3}); }) == ErrorCode::InvalidParam);
}

TEST_CASE("kendall distance examples") {
  const Permutation id = Permutation::identity(4);
  CHECK(kendall_distance(id, id) == 0);
  CHECK(kendall_distance(id, Permutation({3, 2, 1, 0})) == 6);
  CHECK(kendall_distance(id, Permutation({1, 0, 2, 3})) == 1);
  CHECK(kendall_distance_normalized(id, Permutation({3, 2, 1, 0})) == 1.0);
  CHECK(kendall_distance_normalized(Permutation::identity(1), Permutation::identity(1)) == 0.0);
  CHECK(code_of([&] { kendall_distance(id, Permutation::identity(3)); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("kendall distance against brute force") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Permutation a = shuffled(30, seed);
    const Permutation b = shuffled(30, seed + 100);
    CHECK(kendall_distance(a, b) == oracle::kendall(a, b));
  }
}

TEST_CASE("kendall distance is a metric") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Permutation a = shuffled(25, seed);
    const Permutation b = shuffled(25, seed + 50);
    const Permutation c = shuffled(25, seed + 90);
    CHECK(kendall_distance(a, b) == kendall_distance(b, a));
    CHECK(kendall_distance(a, c) <= kendall_distance(a, b) + kendall_distance(b, c));
    CHECK(kendall_distance(a, b) <= 25 * 24 / 2);
  }
}

TEST_CASE("pearson correlation") {
  const Vector r{1.0, 4.0, 2.0, 8.0, 5.0};
  Vector affine(r.size());
  Vector neg(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) {
    affine[k] = 3.0 * r[k] - 7.0;
    neg[k] = -r[k];
  }
  CHECK(pearson_correlation(r, affine) == doctest::Approx(1.0));
  CHECK(pearson_correlation(r, neg) == doctest::Approx(-1.0));
  CHECK(code_of([&] { pearson_correlation(r, Vector(5, 2.0)); }) == ErrorCode::DegenerateVariance);
  CHECK(code_of([&] { pearson_correlation(r, Vector(4, 2.0)); }) == ErrorCode::DimensionMismatch);

  const Vector a = random_vector(200, 1);
  const Vector b = random_vector(200, 2);
  const Eigen::VectorXd x = oracle::to_eigen(a).array() - oracle::to_eigen(a).mean();
  const Eigen::VectorXd y = oracle::to_eigen(b).array() - oracle::to_eigen(b).mean();
  const double expected = x.dot(y) / (x.norm() * y.norm());
  const double rho = pearson_correlation(a, b);
  CHECK(rho == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::abs(rho) <= 1.0);
}

TEST_CASE("rmse") {
  const Vector r{1.0, 2.0, 3.0};
  CHECK(rmse(r, Vector{11.0, 12.0, 13.0}) == doctest::Approx(0.0));
  // Centered (-1, 1) vs (1, -1): squared norm 8, divided by 2, root 2.
  CHECK(rmse(Vector{0.0, 2.0}, Vector{2.0, 0.0}) == doctest::Approx(2.0));
  CHECK(rmse(Vector{0.0, 2.0}, Vector{2.0, 0.0}, RmseVariant::Unsquared) ==
        doctest::Approx(std::sqrt(std::sqrt(8.0) / 2.0)));
  CHECK(code_of([&] { rmse(r, Vector{1.0}); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("upsets") {
  const SkewSparseMatrix R(3, {{0, 1, 2.0}, {1, 2, -1.0}, {0, 2, 0.0}});
  CHECK(count_upsets(R, Vector{3.0, 1.0, 2.0}) == 0);
  CHECK(count_upsets(R, Vector{1.0, 3.0, 2.0}) == 2);
  CHECK(count_upsets(R, Vector{1.0, 1.0, 1.0}) == 0);
  CHECK(weighted_upsets(R, Vector{3.0, 1.0, 2.0}) == doctest::Approx(0.0 + 0.0 + 1.0));
  CHECK(code_of([&] { count_upsets(R, Vector{1.0}); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("upsets against brute force and the reversal bound") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SkewSparseMatrix R = oracle::random_dense_skew(20, seed);
    const Vector s = random_vector(20, seed);
    Vector neg(s.size());
    std::transform(s.begin(), s.end(), neg.begin(), [](double x) { return -x; });
    CHECK(count_upsets(R, s) == oracle::upsets(R, s));
    CHECK(weighted_upsets(R, s) == doctest::Approx(oracle::weighted_upsets(R, s)));
    CHECK(count_upsets(R, s) + count_upsets(R, neg) <= R.nnz());
  }
}

TEST_CASE("max displacement") {
  const Permutation id = Permutation::identity(5);
  CHECK(max_displacement(id, id) == 0);
  CHECK(max_displacement(id, Permutation({1, 0, 2, 3, 4})) == 1);
  CHECK(max_displacement(id, Permutation({4, 3, 2, 1, 0})) == 4);
  CHECK(max_displacement(id, Permutation({4, 0, 1, 2, 3})) == 4);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Permutation a = shuffled(15, seed);
    const Permutation b = shuffled(15, seed + 7);
    const std::size_t d = max_displacement(a, b);
    CHECK(d == oracle::max_displacement(a, b));
    CHECK(d <= 14);
    CHECK(d <= kendall_distance(a, b));
  }
}
