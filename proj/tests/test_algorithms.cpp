#include <doctest.h>

#include <cmath>
#include <functional>
#include <numeric>

#include "oracles.hpp"
#include "svdrank/algorithms.hpp"
#include "svdrank/metrics.hpp"
#include "svdrank/model.hpp"

using namespace svdrank;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected svdrank::Error");
  return ErrorCode::IoError;
}

SkewSparseMatrix noiseless(const Vector& r) { return score_difference_matrix(r); }

void check_result_invariants(const RankingResult& res) {
  const std::size_t n = res.score_estimate.size();
  const double mean = std::accumulate(res.score_estimate.begin(), res.score_estimate.end(), 0.0) /
                      static_cast<double>(n);
  double scale = 0.0;
  for (double v : res.score_estimate) scale = std::max(scale, std::abs(v));
  CHECK(std::abs(mean) <= 1e-10 * std::max(1.0, scale));
  CHECK(res.permutation.size() == n);
  for (std::size_t k = 1; k < n; ++k) {
    const double prev = res.score_estimate[res.permutation[k - 1]];
    const double cur = res.score_estimate[res.permutation[k]];
    CHECK(prev >= cur);
    if (prev == cur) CHECK(res.permutation[k - 1] < res.permutation[k]);
  }
}

}  // namespace

TEST_CASE("center") {
  CHECK(center(Vector{1.0, 2.0, 3.0}) == Vector{-1.0, 0.0, 1.0});
  CHECK(center(Vector(4, 0.0)) == Vector(4, 0.0));
  StreamRng rng(3, 3);
  Vector v(37);
  for (auto& x : v) x = rng.normal() * 100.0;
  const Vector c = center(v);
  CHECK(std::abs(std::accumulate(c.begin(), c.end(), 0.0) / 37.0) <= 1e-12);
}

TEST_CASE("svd_rs noiseless r = (3,1,2)") {
  const Vector r{3.0, 1.0, 2.0};
  const RankingResult res = svd_rs(noiseless(r));
  CHECK(res.permutation.order() == std::vector<std::size_t>{0, 2, 1});
  const Vector c = center(r);
  for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(res.score_estimate[k] - c[k]) <= 1e-8);
  CHECK(res.method == Method::SvdRs);
  check_result_invariants(res);
}

TEST_CASE("svd_rs single edge") {
  const RankingResult res = svd_rs(SkewSparseMatrix(2, {{0, 1, 5.0}}));
  CHECK(res.score_estimate[0] == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(res.score_estimate[1] == doctest::Approx(-2.5).epsilon(1e-12));
}

TEST_CASE("svd_rs errors") {
  CHECK(code_of([] { svd_rs(SkewSparseMatrix(4, {{0, 1, 1.0}, {2, 3, 1.0}})); }) ==
        ErrorCode::GraphDisconnected);
  CHECK(code_of([] { svd_rs(SkewSparseMatrix(1)); }) == ErrorCode::InvalidParam);
}

TEST_CASE("svd_rs beats a random permutation on ERO with r_i = i") {
  const std::size_t n = 500;
  const ScoreVector r = generate_scores({ScoreKind::Linear}, n, 0);
  const Permutation truth = Permutation::from_scores(r.r);
  std::size_t better = 0;
  const std::size_t trials = 20;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const RankingResult res = svd_rs(build_H(generate_ero(r, {n, 0.25, 0.9, 100 + t})).H);
    // A uniformly random permutation has expected distance n(n-1)/4.
    better += kendall_distance(truth, res.permutation) < n * (n - 1) / 4 ? 1 : 0;
    check_result_invariants(res);
  }
  CHECK(better == trials);
}

TEST_CASE("svd_nrs noiseless r = (1,2,3)") {
  const SkewSparseMatrix H = noiseless({1.0, 2.0, 3.0});
  CHECK(degree_matrix(H) == Vector{3.0, 2.0, 3.0});
  const RankingResult nrs = svd_nrs(H);
  const RankingResult rs = svd_rs(H);
  CHECK(nrs.permutation == rs.permutation);
  CHECK(nrs.degree == Vector{3.0, 2.0, 3.0});
  check_result_invariants(nrs);
}

TEST_CASE("svd_nrs isolated node") {
  CHECK(code_of([] { svd_nrs(SkewSparseMatrix(3, {{0, 1, 1.0}})); }) == ErrorCode::IsolatedNode);
}

TEST_CASE("noiseless exactness for both pipelines") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ScoreVector r = generate_scores({}, 120, seed);
    const SkewSparseMatrix H = build_H(generate_ero(r, {120, 1.0, 1.0, seed})).H;
    const Vector c = center(r.r);
    const Permutation truth = Permutation::from_scores(r.r);
    for (const RankingResult& res : {svd_rs(H), svd_nrs(H)}) {
      double err = 0.0;
      for (std::size_t k = 0; k < c.size(); ++k) err += std::pow(res.score_estimate[k] - c[k], 2);
      CHECK(std::sqrt(err) <= 1e-6 * norm2(c));
      CHECK(kendall_distance(truth, res.permutation) == 0);
    }
  }
}

TEST_CASE("svd_nrs matches svd_rs on linear complete instance") {
  const ScoreVector r = generate_scores({ScoreKind::Linear}, 40, 0);
  const SkewSparseMatrix H = noiseless(r.r);
  CHECK(svd_nrs(H).permutation == svd_rs(H).permutation);
}

TEST_CASE("ranking is invariant to positive scaling of H") {
  const ScoreVector r = generate_scores({}, 80, 4);
  const SkewSparseMatrix H = build_H(generate_ero(r, {80, 0.3, 0.8, 9})).H;
  for (double c : {0.01, 3.0, 250.0}) {
    CHECK(svd_rs(H.times(c)).permutation == svd_rs(H).permutation);
  }
}

TEST_CASE("outputs are invariant to shifting the scores") {
  const ScoreVector r = generate_scores({}, 60, 4);
  Vector shifted = r.r;
  for (auto& x : shifted) x += 10.0;
  const SkewSparseMatrix a = noiseless(r.r);
  const SkewSparseMatrix b = noiseless(shifted);
  const RankingResult ra = svd_rs(a);
  const RankingResult rb = svd_rs(b);
  CHECK(ra.permutation == rb.permutation);
  for (std::size_t k = 0; k < 60; ++k) CHECK(ra.score_estimate[k] == doctest::Approx(rb.score_estimate[k]));
}

TEST_CASE("kendall distance grows with noise on average") {
  const std::size_t n = 300;
  const std::vector<double> gammas{0.0, 0.2, 0.4, 0.6};
  std::vector<double> mean(gammas.size(), 0.0);
  for (std::uint64_t t = 0; t < 20; ++t) {
    const ScoreVector r = generate_scores({}, n, 500 + t);
    const Permutation truth = Permutation::from_scores(r.r);
    for (std::size_t g = 0; g < gammas.size(); ++g) {
      const RankingResult res =
          svd_rs(build_H(generate_ero(r, {n, 0.25, 1.0 - gammas[g], 900 + t})).H);
      mean[g] += static_cast<double>(kendall_distance(truth, res.permutation)) / 20.0;
    }
  }
  for (std::size_t g = 1; g < gammas.size(); ++g) CHECK(mean[g] >= mean[g - 1]);
}

TEST_CASE("compute_ratio_entries") {
  const Vector r{1.0, 4.0, 2.0, 7.0};
  const SkewSparseMatrix H = noiseless(r);
  SUBCASE("proportional s gives constant ratios") {
    Vector s = center(r);
    for (auto& x : s) x *= 0.25;
    for (double ratio : compute_ratio_entries(H, s)) CHECK(ratio == doctest::Approx(4.0));
  }
  SUBCASE("constant s") {
    CHECK(code_of([&] { compute_ratio_entries(H, Vector(4, 1.0)); }) == ErrorCode::EmptyRatios);
  }
  SUBCASE("hand enumeration with an excluded pair") {
    const SkewSparseMatrix h(3, {{0, 1, 2.0}, {0, 2, -1.0}, {1, 2, 3.0}});
    const Vector s{1.0, 1.0, 3.0};
    const Vector ratios = compute_ratio_entries(h, s);
    REQUIRE(ratios.size() == 2);
    CHECK(ratios[0] == doctest::Approx(-1.0 / -2.0));
    CHECK(ratios[1] == doctest::Approx(3.0 / -2.0));
  }
  SUBCASE("dimension mismatch") {
    CHECK(code_of([&] { compute_ratio_entries(H, Vector{1.0}); }) == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("recover_scale_median") {
  CHECK(recover_scale_median(Vector{1, 1, 1, 100, -50}) == 1.0);
  CHECK(recover_scale_median(Vector{-2, -2, -2}) == -2.0);
  CHECK(recover_scale_median(Vector{1, 3}) == 2.0);
  CHECK(recover_scale_median(Vector{4, 1, 3, 2}) == 2.5);
  CHECK(code_of([] { recover_scale_median(Vector{}); }) == ErrorCode::EmptyRatios);
}

TEST_CASE("recover_scale_ls") {
  // Numerator sum 10, denominator sum 2.
  const SkewSparseMatrix H(3, {{0, 1, 4.0}, {1, 2, 6.0}});
  CHECK(recover_scale_ls(H, Vector{2.0, 1.0, 0.0}) == doctest::Approx(5.0));
  const Vector r{1.0, 4.0, 2.0, 7.0};
  Vector s = center(r);
  for (auto& x : s) x *= 0.5;
  CHECK(recover_scale_ls(noiseless(r), s) == doctest::Approx(2.0));
  CHECK(code_of([&] { recover_scale_ls(H, Vector(3, 1.0)); }) == ErrorCode::ZeroDenominator);
}

TEST_CASE("reconcile_sign") {
  const Vector r{1.0, 4.0, 2.0, 7.0};
  const SkewSparseMatrix H = noiseless(r);
  Vector s = center(r);
  CHECK(reconcile_sign(s, H) == 1);
  for (auto& x : s) x = -x;
  CHECK(reconcile_sign(s, H) == -1);
  CHECK(reconcile_sign(Vector(4, 0.0), SkewSparseMatrix(4)) == 1);
}

TEST_CASE("median scale carries the orientation") {
  // A negative scale flips the direction back to the true order.
  const ScoreVector r = generate_scores({}, 50, 1);
  const SkewSparseMatrix H = noiseless(r.r);
  const RankingResult res = svd_rs(H);
  CHECK(res.tau * res.beta * dot(res.direction, center(r.r)) > 0.0);
}

TEST_CASE("least-squares scale option and observed reference") {
  const ScoreVector r = generate_scores({}, 40, 2);
  const SkewSparseMatrix H = noiseless(r.r);
  RankOptions opts;
  opts.scale = ScaleEstimator::LeastSquares;
  const RankingResult res = svd_rs(H, opts);
  const Vector c = center(r.r);
  for (std::size_t k = 0; k < 40; ++k) CHECK(res.score_estimate[k] == doctest::Approx(c[k]).epsilon(1e-8));

  const SkewSparseMatrix small(3);
  opts.observed = &small;
  CHECK(code_of([&] { svd_rs(H, opts); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("method names") {
  CHECK(to_string(Method::SvdRs) == "svd_rs");
  CHECK(to_string(Method::SvdNrs) == "svd_nrs");
  CHECK(to_string(Method::RowSum) == "rowsum");
  CHECK(to_string(Method::LeastSquares) == "least_squares");
  CHECK(to_string(Method::Random) == "random");
}
