#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "oracles.hpp"
#include "svdrank/theory.hpp"

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

ModelStats stats_of(std::size_t n, double p, double eta, double M, double alpha, double dev,
                    double rho = 1.0) {
  ModelStats s;
  s.n = n;
  s.p = p;
  s.eta = eta;
  s.M = M;
  s.alpha = alpha;
  s.dev_norm = dev;
  s.rho = rho;
  return s;
}

}  // namespace

TEST_CASE("model stats for linear scores") {
  const ScoreVector r = generate_scores({ScoreKind::Linear}, 10, 0);
  const ModelStats s = ModelStats::for_svd_rs(r, 0.5, 0.9);
  CHECK(s.alpha == doctest::Approx(5.5));
  CHECK(s.dev_norm == doctest::Approx(std::sqrt(82.5)));
  CHECK(s.rho == 1.0);
  CHECK(s.M == 10.0);
  CHECK(code_of([] { ModelStats::for_svd_rs(ScoreVector::from({1.0, 1.0}), 0.5, 0.9); }) ==
        ErrorCode::DegenerateScores);
}

TEST_CASE("delta_spectral") {
  const BoundParams b;
  CHECK(delta_spectral(stats_of(100, 1.0, 1.0, 1.0, 0.5, 1.0), b) ==
        doctest::Approx(258.199).epsilon(1e-5));
  CHECK(delta_spectral(stats_of(100, 0.0, 1.0, 1.0, 0.5, 1.0), b) == 0.0);
  // Scales as sqrt(p n) and linearly in M.
  const double a = delta_spectral(stats_of(100, 0.25, 1.0, 2.0, 0.5, 1.0), b);
  const double c = delta_spectral(stats_of(400, 0.25, 1.0, 1.0, 0.5, 1.0), b);
  CHECK(a == doctest::Approx(c));
}

TEST_CASE("wedin_delta") {
  const ModelStats s = stats_of(100, 0.5, 0.8, 1.0, 0.5, 4.0);
  const double base = 0.8 * 0.5 * 4.0 * 10.0;
  CHECK(wedin_delta(0.0, s) == 0.0);
  CHECK(wedin_delta(base / 3.0, s) == doctest::Approx(0.5));
  CHECK(code_of([&] { wedin_delta(base, s); }) == ErrorCode::PreconditionViolated);
  CHECK(code_of([&] { wedin_delta(2.0 * base, s); }) == ErrorCode::PreconditionViolated);
}

TEST_CASE("l2 direction bound for SVD-RS") {
  const BoundParams b;
  const ModelStats probe = stats_of(1000, 0.3, 0.7, 2.0, 1.0, 1.0);
  const double threshold = l2_precondition_threshold(probe, b);
  CHECK(threshold == doctest::Approx(24.0 * 2.0 / 0.7 * std::sqrt(5.0 / 0.9) * 2.5));

  SUBCASE("at the threshold") {
    const ModelStats s = stats_of(1000, 0.3, 0.7, 2.0, 1.0, threshold);
    CHECK(l2_bound_svd_rs(s, b) == doctest::Approx(5.0));
  }
  SUBCASE("decreases as the deviation grows") {
    const double at2 = l2_bound_svd_rs(stats_of(1000, 0.3, 0.7, 2.0, 1.0, 2.0 * threshold), b);
    const double at4 = l2_bound_svd_rs(stats_of(1000, 0.3, 0.7, 2.0, 1.0, 4.0 * threshold), b);
    CHECK(at2 == doctest::Approx(2.0 * at4));
  }
  SUBCASE("below the threshold") {
    const ModelStats s = stats_of(1000, 0.3, 0.7, 2.0, 1.0, 0.99 * threshold);
    CHECK(code_of([&] { l2_bound_svd_rs(s, b); }) == ErrorCode::PreconditionViolated);
  }
  SUBCASE("p = 0") {
    const ModelStats s = stats_of(1000, 0.0, 0.7, 2.0, 1.0, 1e9);
    CHECK(code_of([&] { l2_bound_svd_rs(s, b); }) == ErrorCode::PreconditionViolated);
  }
}

TEST_CASE("l-infinity C for SVD-RS") {
  const ScoreVector r = generate_scores({}, 1000, 3);
  const BoundParams b;
  const ModelStats s = ModelStats::for_svd_rs(r, 0.5, 0.9);
  const LinfBound out = linf_C_svd_rs(s, b);

  // Independent evaluation of the closed form.
  const double n = 1000.0;
  const double L = std::log(n);
  const double M = s.M;
  const double dev = s.dev_norm;
  const double first = M * std::sqrt(L) / (0.9 * std::sqrt(0.5) * dev) +
                       M * M * L * L * L * L / (0.81 * 0.5 * dev * dev);
  const double C = first * (1.0 / std::sqrt(n) + (M - s.alpha) / dev) +
                   M * M * M / (0.729 * std::pow(0.5, 1.5) * dev * dev * dev);
  CHECK(std::isfinite(out.C));
  CHECK(out.C == doctest::Approx(C).epsilon(1e-12));
  CHECK(out.bound == doctest::Approx(4.0 * (2.0 + std::sqrt(2.0)) * C + 4.0 * std::sqrt(n) * C * C));

  const LinfBound denser = linf_C_svd_rs(ModelStats::for_svd_rs(r, 0.9, 0.9), b);
  CHECK(denser.C < out.C);

  CHECK(code_of([&] { linf_C_svd_rs(ModelStats::for_svd_rs(r, 1e-4, 0.9), b); }) ==
        ErrorCode::PreconditionViolated);
  // (log 20)^2 < 16 / 0.5.
  const ScoreVector small = generate_scores({}, 20, 3);
  CHECK(code_of([&] { linf_C_svd_rs(ModelStats::for_svd_rs(small, 1.0, 0.9), b); }) ==
        ErrorCode::PreconditionViolated);
}

TEST_CASE("rank displacement bound") {
  const BoundParams b;
  const ModelStats s = stats_of(10, 0.5, 0.9, 10.0, 5.5, 3.0, 1.0);
  CHECK(rank_displacement_bound(s, b, 0.0) == 0.0);
  CHECK(rank_displacement_bound(s, b, 0.25) == doctest::Approx(3.0));
  const ModelStats tied = stats_of(10, 0.5, 0.9, 10.0, 5.5, 3.0, 0.0);
  CHECK(code_of([&] { rank_displacement_bound(tied, b, 0.1); }) == ErrorCode::ZeroGap);
}

TEST_CASE("absolute deviation sums") {
  CHECK(absolute_deviation_sums(Vector{1.0, 2.0, 3.0}) == Vector{3.0, 2.0, 3.0});
  SUBCASE("closed form for r_i = i") {
    const std::size_t n = 57;
    const Vector S = absolute_deviation_sums(generate_scores({ScoreKind::Linear}, n, 0).r);
    const double nd = static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double i = static_cast<double>(k + 1);
      CHECK(S[k] == doctest::Approx(i * i - i * (nd + 1.0) + (nd * nd + nd) / 2.0));
    }
  }
  SUBCASE("brute force with ties") {
    const Vector r{0.3, 1.2, 0.3, 5.0, 2.2, 1.2};
    const Vector S = absolute_deviation_sums(r);
    for (std::size_t i = 0; i < r.size(); ++i) {
      double expected = 0.0;
      for (double v : r) expected += std::abs(r[i] - v);
      CHECK(S[i] == doctest::Approx(expected));
    }
  }
}

TEST_CASE("normalized analysis stats") {
  const ScoreVector r = generate_scores({}, 200, 4);
  const NRSStats nrs = nrs_stats(r, 0.5, 0.8);
  CHECK(nrs.lambda_min <= nrs.lambda_max);
  CHECK(nrs.sigma_min <= nrs.sigma_max);
  CHECK(nrs.Delta_tilde > 0.0);
  CHECK(nrs.A == doctest::Approx(0.8 * r.M * r.M + 0.2 * r.M / 2.0));
  // alpha is the weighted mean, so it lies inside the score range.
  CHECK(nrs.stats.alpha >= 0.0);
  CHECK(nrs.stats.alpha <= r.M);
  CHECK(std::isinf(nrs_stats(r, 0.0, 0.8).Delta_tilde));
  CHECK(code_of([] { nrs_stats(ScoreVector::from({2.0, 2.0, 2.0}), 0.5, 0.8); }) ==
        ErrorCode::DegenerateScores);
  if (!nrs.preconditions_hold()) {
    CHECK(code_of([&] { l2_bound_svd_nrs(nrs); }) == ErrorCode::PreconditionViolated);
    CHECK(code_of([&] { score_l2_bound_svd_nrs(nrs); }) == ErrorCode::PreconditionViolated);
  }
}

TEST_CASE("true directions are unit and centered") {
  const ScoreVector r = generate_scores({}, 80, 5);
  const Vector u = true_direction_svd_rs(r);
  CHECK(norm2(u) == doctest::Approx(1.0));
  CHECK(std::abs(std::accumulate(u.begin(), u.end(), 0.0)) <= 1e-12);
  const Vector v = true_direction_svd_nrs(r, 0.5, 0.8);
  CHECK(norm2(v) == doctest::Approx(1.0));
}

TEST_CASE("aligned error") {
  const Vector a{1.0, 0.0};
  CHECK(aligned_error_sq(a, Vector{-1.0, 0.0}) == 0.0);
  CHECK(aligned_error_sq(a, Vector{0.0, 1.0}) == doctest::Approx(2.0));
  CHECK(aligned_error(a, Vector{0.5, 0.0}) == doctest::Approx(0.5));
  CHECK(code_of([&] { aligned_error(a, Vector{1.0}); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("ideal-scale scores") {
  SUBCASE("noiseless recovers the centered scores up to sign") {
    const ScoreVector r = generate_scores({}, 60, 6);
    const SkewSparseMatrix H = score_difference_matrix(r.r);
    const Vector c = center(r.r);
    for (const RankingResult& res : {svd_rs(H), svd_nrs(H)}) {
      const Vector w = ideal_scale_scores(res, 1.0, 1.0);
      CHECK(aligned_error(w, c) <= 1e-8 * norm2(c));
    }
  }
  SUBCASE("zero spectrum gives zero") {
    RankingResult res;
    res.direction = Vector(4, 0.5);
    res.spectral.sigma1 = 0.0;
    CHECK(ideal_scale_scores(res, 0.9, 0.5) == Vector(4, 0.0));
  }
}

TEST_CASE("bounds are monotone in p and eta") {
  const ScoreVector r = generate_scores({ScoreKind::Linear}, 2000, 0);
  double prev_p = std::numeric_limits<double>::infinity();
  for (double p : {0.1, 0.2, 0.4, 0.8}) {
    const BoundReport rep = evaluate_bounds(r, p, 0.9);
    CHECK(rep.l2_direction_svd_rs.value >= 0.0);
    CHECK(rep.linf_direction_svd_rs.value >= 0.0);
    CHECK(rep.score_l2_svd_rs.value >= 0.0);
    CHECK(rep.l2_direction_svd_rs.value < prev_p);
    prev_p = rep.l2_direction_svd_rs.value;
  }
  double prev_eta = std::numeric_limits<double>::infinity();
  for (double eta : {0.3, 0.5, 0.7, 0.9}) {
    const BoundReport rep = evaluate_bounds(r, 0.5, eta);
    CHECK(rep.l2_direction_svd_rs.value < prev_eta);
    prev_eta = rep.l2_direction_svd_rs.value;
  }
}

TEST_CASE("evaluate_bounds flags hypotheses") {
  const ScoreVector r = generate_scores({ScoreKind::Linear}, 500, 0);
  const BoundReport rep = evaluate_bounds(r, 1.0, 0.8);
  CHECK(rep.l2_threshold == doctest::Approx(l2_precondition_threshold(rep.stats, rep.params)));
  CHECK(rep.l2_direction_svd_rs.precondition_holds == (rep.stats.dev_norm >= rep.l2_threshold));
  CHECK_FALSE(rep.l2_direction_svd_rs.uses_placeholder_constant);
  CHECK(rep.linf_direction_svd_rs.uses_placeholder_constant);
  CHECK(rep.placeholder_warning);

  const BoundReport empty = evaluate_bounds(r, 0.0, 0.8);
  CHECK(empty.Delta == 0.0);
  CHECK_FALSE(empty.l2_direction_svd_rs.precondition_holds);
}

TEST_CASE("bound parameters are validated") {
  BoundParams b;
  CHECK_NOTHROW(b.validate());
  CHECK(b.mu() == doctest::Approx(2.0 / 1.5));
  b.epsilon = 0.6;
  CHECK(code_of([&] { b.validate(); }) == ErrorCode::InvalidParam);
  b = {};
  b.xi = 1.0;
  CHECK(code_of([&] { b.validate(); }) == ErrorCode::InvalidParam);
  b = {};
  b.kappa = 1.0;
  CHECK(code_of([&] { b.validate(); }) == ErrorCode::InvalidParam);
  b = {};
  b.universal_constant = 0.0;
  CHECK(code_of([&] { b.validate(); }) == ErrorCode::InvalidParam);
}
