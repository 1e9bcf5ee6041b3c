#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "svdrank/linalg.hpp"
#include "svdrank/metrics.hpp"

namespace svdrank {

enum class Method { SvdRs, SvdNrs, RowSum, LeastSquares, Random };

std::string_view to_string(Method m) noexcept;

/// Output of every ranking pipeline.
struct RankingResult {
  Method method = Method::SvdRs;
  /// Descending order of score_estimate, ties to the smaller index.
  Permutation permutation;
  /// Centered score estimate in measurement units.
  Vector score_estimate;
  /// Sign chosen by upset minimization (diagnostic; tau carries the final
  /// orientation).
  int beta = 1;
  /// Scale applied to the beta-oriented direction.
  double tau = 1.0;
  /// Spectral diagnostics (SVD methods only).
  SpectralPair spectral;
  /// Unit vector u~2 in the recovered span, orthogonal to the projected
  /// all-ones direction, before sign and scale (SVD methods only).
  Vector direction;
  /// Absolute row sums D_ii of H (SVD-NRS only).
  Vector degree;
};

enum class ScaleEstimator { Median, LeastSquares };

struct RankOptions {
  SpectralOptions spectral;
  ScaleEstimator scale = ScaleEstimator::Median;
  /// When set, sign reconciliation and scale recovery use only this matrix's
  /// observed pairs (the original measurements before matrix completion).
  /// Must outlive the call.
  const SkewSparseMatrix* observed = nullptr;
};

/// SVD ranking and synchronization on the raw measurement matrix.
/// Throws GraphDisconnected, DegenerateSpectrum, ZeroProjection, EmptyRatios.
RankingResult svd_rs(const SkewSparseMatrix& H, const RankOptions& opts = {});

/// Normalized variant on D^{-1/2} H D^{-1/2} with D_ii = sum_j |H_ij|.
/// Additionally throws IsolatedNode if some D_ii = 0.
RankingResult svd_nrs(const SkewSparseMatrix& H, const RankOptions& opts = {});

/// D_ii = sum_j |H_ij|.
Vector degree_matrix(const SkewSparseMatrix& H);

/// H_ij / (s_i - s_j) over observed pairs with |s_i - s_j| > 1e-12 * range(s).
/// Throws EmptyRatios if no pair survives.
Vector compute_ratio_entries(const SkewSparseMatrix& H, std::span<const double> s);

/// Median; the mean of the two central order statistics for even length.
double recover_scale_median(std::span<const double> ratios);

/// sum H_ij / sum (s_i - s_j) over observed i < j. Throws ZeroDenominator.
double recover_scale_ls(const SkewSparseMatrix& H, std::span<const double> s);

/// +1 or -1, whichever orientation of s has fewer upsets against H; +1 on a tie.
int reconcile_sign(std::span<const double> s, const SkewSparseMatrix& H);

/// v - mean(v) e.
Vector center(std::span<const double> v);

}  // namespace svdrank
