#pragma once

#include <cstddef>
#include <vector>

#include "svdrank/algorithms.hpp"
#include "svdrank/model.hpp"

namespace svdrank {

/// One row of the edge-vertex incidence matrix B (+1 at i, -1 at j) with its
/// right-hand side w = R_ij.
struct IncidenceRow {
  std::size_t i = 0;
  std::size_t j = 0;
  double w = 0.0;
};

struct IncidenceSystem {
  std::vector<IncidenceRow> rows;

  std::size_t m() const noexcept { return rows.size(); }

  static IncidenceSystem from(const MeasurementSet& m);
  static IncidenceSystem from(const SkewSparseMatrix& H);
};

/// H e.
Vector row_sums(const SkewSparseMatrix& H);

/// Ranks by centered row sums of H. The scores are rescaled by the median
/// ratio estimator when it yields a positive scale, so that they are in
/// measurement units like the other pipelines.
RankingResult rowsum_rank(const SkewSparseMatrix& H);

/// Minimum-norm least-squares scores: conjugate gradient on B^T B x = B^T w
/// from x = 0, stopping at ||B^T(w - Bx)|| <= tol * ||B^T w||.
/// max_iter = 0 selects 10 n + 100. Throws GraphDisconnected, NotConverged.
RankingResult least_squares_rank(const IncidenceSystem& sys, std::size_t n, double tol = 1e-10,
                                 std::size_t max_iter = 0);

/// Knobs of the nuclear-norm completion solver (accelerated proximal gradient
/// with singular-value soft-thresholding and threshold continuation).
struct CompletionConfig {
  double step = 1.0;
  /// Initial threshold = threshold_scale * sqrt(n * p_hat) * rms(observed).
  double threshold_scale = 2.5;
  /// Per-iteration multiplicative decay of the threshold.
  double threshold_decay = 0.9;
  /// The threshold stops decaying at threshold_floor * initial threshold.
  double threshold_floor = 1e-4;
  std::size_t max_iter = 500;
  /// Stop once the threshold is at its floor and the relative Frobenius
  /// change of the iterate is <= tol.
  double tol = 1e-6;
  /// Reported only; the solver does not truncate the rank.
  std::size_t target_rank_hint = 2;
  /// Largest n accepted; storage and per-iteration SVD are dense.
  std::size_t dense_limit = 2000;
};

struct CompletionResult {
  /// (C_hat - C_hat^T) / 2 with every off-diagonal pair stored.
  SkewSparseMatrix matrix;
  std::size_t iterations = 0;
  double relative_change = 0.0;
  /// Numerical rank of the final low-rank iterate.
  std::size_t rank = 0;
  /// false flags NotConverged; `matrix` then holds the last iterate.
  bool converged = false;
};

/// Throws InvalidParam when n exceeds cfg.dense_limit or a knob is invalid.
CompletionResult complete_matrix(const MeasurementSet& m, const CompletionConfig& cfg = {});

/// max{(M - alpha) sqrt(n) / ||r - alpha e||, 1}, alpha = mean(r).
/// Throws DegenerateScores for constant r.
double coherence(const ScoreVector& r);

}  // namespace svdrank
