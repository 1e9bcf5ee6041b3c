#include "svdrank/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace svdrank {

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::SvdRs: return "svd_rs";
    case Method::SvdNrs: return "svd_nrs";
    case Method::RowSum: return "rowsum";
    case Method::LeastSquares: return "least_squares";
    case Method::Random: return "random";
  }
  return "unknown";
}

Vector center(std::span<const double> v) {
  Vector out(v.begin(), v.end());
  if (out.empty()) return out;
  const double mean = std::accumulate(out.begin(), out.end(), 0.0) / static_cast<double>(out.size());
  for (auto& x : out) x -= mean;
  return out;
}

Vector degree_matrix(const SkewSparseMatrix& H) { return H.abs_row_sums(); }

Vector compute_ratio_entries(const SkewSparseMatrix& H, std::span<const double> s) {
  if (s.size() != H.n()) throw Error(ErrorCode::DimensionMismatch, "ratio entries: dim(s) != n");
  Vector ratios;
  if (!s.empty()) {
    const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
    const double zeta = 1e-12 * (*hi - *lo);
    ratios.reserve(H.nnz());
    for (const auto& e : H.entries()) {
      const double diff = s[e.i] - s[e.j];
      if (std::abs(diff) > zeta) ratios.push_back(e.value / diff);
    }
  }
  if (ratios.empty()) throw Error(ErrorCode::EmptyRatios, "no pair with distinct estimated scores");
  return ratios;
}

double recover_scale_median(std::span<const double> ratios) {
  if (ratios.empty()) throw Error(ErrorCode::EmptyRatios, "median of an empty list");
  Vector v(ratios.begin(), ratios.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double recover_scale_ls(const SkewSparseMatrix& H, std::span<const double> s) {
  if (s.size() != H.n()) throw Error(ErrorCode::DimensionMismatch, "recover_scale_ls: dim(s) != n");
  double num = 0.0;
  double den = 0.0;
  for (const auto& e : H.entries()) {
    num += e.value;
    den += s[e.i] - s[e.j];
  }
  if (den == 0.0) throw Error(ErrorCode::ZeroDenominator, "sum of estimated offsets is zero");
  return num / den;
}

int reconcile_sign(std::span<const double> s, const SkewSparseMatrix& H) {
  const std::size_t plus = count_upsets(H, s);
  Vector neg(s.begin(), s.end());
  for (auto& x : neg) x = -x;
  const std::size_t minus = count_upsets(H, neg);
  return minus < plus ? -1 : 1;
}

namespace {

const SkewSparseMatrix& reference(const SkewSparseMatrix& H, const RankOptions& opts) {
  if (opts.observed == nullptr) return H;
  if (opts.observed->n() != H.n()) {
    throw Error(ErrorCode::DimensionMismatch, "observed matrix size differs from H");
  }
  return *opts.observed;
}

// Sign reconciliation, scale recovery and centering shared by both SVD
// pipelines. `s` is the unsigned direction in measurement space.
void finish(RankingResult& out, std::span<const double> s, const SkewSparseMatrix& ref,
            ScaleEstimator estimator) {
  out.beta = reconcile_sign(s, ref);
  Vector oriented(s.begin(), s.end());
  for (auto& x : oriented) x *= out.beta;
  out.tau = estimator == ScaleEstimator::Median
                ? recover_scale_median(compute_ratio_entries(ref, oriented))
                : recover_scale_ls(ref, oriented);
  for (auto& x : oriented) x *= out.tau;
  out.score_estimate = center(oriented);
  out.permutation = Permutation::from_scores(out.score_estimate);
}

}  // namespace

RankingResult svd_rs(const SkewSparseMatrix& H, const RankOptions& opts) {
  const std::size_t n = H.n();
  if (n < 2) throw Error(ErrorCode::InvalidParam, "svd_rs requires n >= 2");
  if (!is_connected(H)) throw Error(ErrorCode::GraphDisconnected, "measurement graph");
  const SkewSparseMatrix& ref = reference(H, opts);

  RankingResult out;
  out.method = Method::SvdRs;
  out.spectral = compute_top2(H, opts.spectral);
  const Vector ones(n, 1.0 / std::sqrt(static_cast<double>(n)));
  const Vector u_bar = project_onto_span(ones, out.spectral);
  out.direction = orthonormal_complement_in_span(u_bar, out.spectral);
  finish(out, out.direction, ref, opts.scale);
  return out;
}

RankingResult svd_nrs(const SkewSparseMatrix& H, const RankOptions& opts) {
  const std::size_t n = H.n();
  if (n < 2) throw Error(ErrorCode::InvalidParam, "svd_nrs requires n >= 2");
  Vector degree = degree_matrix(H);
  for (std::size_t i = 0; i < n; ++i) {
    if (degree[i] == 0.0) {
      throw Error(ErrorCode::IsolatedNode, "node " + std::to_string(i) + " has zero degree");
    }
  }
  if (!is_connected(H)) throw Error(ErrorCode::GraphDisconnected, "measurement graph");
  const SkewSparseMatrix& ref = reference(H, opts);

  Vector inv_sqrt(n);
  for (std::size_t i = 0; i < n; ++i) inv_sqrt[i] = 1.0 / std::sqrt(degree[i]);

  RankingResult out;
  out.method = Method::SvdNrs;
  out.spectral = compute_top2(H.scaled(inv_sqrt), opts.spectral);
  Vector u1 = inv_sqrt;
  const double len = norm2(u1);
  for (auto& x : u1) x /= len;
  const Vector u_bar = project_onto_span(u1, out.spectral);
  out.direction = orthonormal_complement_in_span(u_bar, out.spectral);

  Vector s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = std::sqrt(degree[i]) * out.direction[i];
  out.degree = std::move(degree);
  finish(out, s, ref, opts.scale);
  return out;
}

}  // namespace svdrank
