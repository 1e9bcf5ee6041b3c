#pragma once

#include <cstddef>
#include <span>

#include "svdrank/algorithms.hpp"
#include "svdrank/model.hpp"

namespace svdrank {

/// Model quantities entering the error bounds.
struct ModelStats {
  std::size_t n = 0;
  double p = 0.0;
  double eta = 0.0;
  double M = 0.0;
  /// Centering constant: mean(r) for SVD-RS; the E[D]^{-1}-weighted mean for
  /// SVD-NRS.
  double alpha = 0.0;
  /// ||r - alpha e||_2
  double dev_norm = 0.0;
  /// min_{i != j} |r_i - r_j|
  double rho = 0.0;

  static ModelStats for_svd_rs(const ScoreVector& r, double p, double eta);
  static ModelStats for_svd_nrs(const ScoreVector& r, double p, double eta);
};

struct BoundParams {
  double epsilon = 0.5;  // (0, 1/2]
  double xi = 2.0;       // > 1
  double kappa = 0.5;    // (0, 1)
  /// Stand-in for the unspecified universal constants c_eps and C_eps.
  double universal_constant = 1.0;

  double mu() const noexcept { return 2.0 / (kappa + 1.0); }
  /// Throws InvalidParam when a parameter is outside its range.
  void validate() const;
};

/// 8 M sqrt((5/3) p n) (2 + eps): high-probability bound on ||H - eta p C||_2.
double delta_spectral(const ModelStats& stats, const BoundParams& params);

/// Delta / (eta p ||r - alpha e|| sqrt(n) - Delta). Throws PreconditionViolated.
double wedin_delta(double Delta, const ModelStats& stats);

/// Smallest ||r - alpha e|| for which the l2 direction bound applies:
/// (24 M / eta) sqrt(5 / (3p)) (2 + eps).
double l2_precondition_threshold(const ModelStats& stats, const BoundParams& params);

/// Bound on min_beta ||u~2 - beta u2||^2 for SVD-RS. Throws PreconditionViolated.
double l2_bound_svd_rs(const ModelStats& stats, const BoundParams& params);

struct LinfBound {
  /// C(n, M, eta, p, eps, r) with the universal constant placeholder.
  double C = 0.0;
  /// 4 (2 + sqrt 2) C + 4 sqrt(n) C^2
  double bound = 0.0;
};

/// l-infinity direction bound for SVD-RS. Checks p >= max{1/(2n), 2 log n/(15n)}
/// and 16/kappa <= (log n)^xi; throws PreconditionViolated otherwise and
/// DegenerateScores when M == alpha.
LinfBound linf_C_svd_rs(const ModelStats& stats, const BoundParams& params);

/// 4 ||r - alpha e|| Upsilon / rho. Throws ZeroGap when rho == 0.
double rank_displacement_bound(const ModelStats& stats, const BoundParams& params, double upsilon);

struct ScoreBounds {
  double l2 = 0.0;
  double linf = 0.0;
};

/// Score-recovery bounds for the ideal-scale SVD-RS estimate. The l2 part
/// requires the l2 direction precondition; the linf part the l-infinity
/// preconditions. Throws PreconditionViolated.
ScoreBounds score_bounds_svd_rs(const ModelStats& stats, const BoundParams& params);

/// Quantities of the normalized analysis.
struct NRSStats {
  ModelStats stats;  // alpha and dev_norm use the E[D]^{-1} weighting
  Vector S;          // S_i = sum_j |r_i - r_j|
  double lambda_max = 0.0;
  double lambda_min = 0.0;
  double A = 0.0;  // eta M^2 + (1 - eta) M / 2
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double Delta_tilde = 0.0;
  /// The three conditions under which the normalized bounds apply.
  bool p_condition_1 = false;
  bool p_condition_2 = false;
  bool delta_condition = false;

  bool preconditions_hold() const noexcept {
    return p_condition_1 && p_condition_2 && delta_condition;
  }
};

/// S_i = sum_j |r_i - r_j| in O(n log n).
Vector absolute_deviation_sums(std::span<const double> r);

/// Throws DegenerateScores for constant r.
NRSStats nrs_stats(const ScoreVector& r, double p, double eta, const BoundParams& params = {});

/// 15 Delta~ / sigma_min. Throws PreconditionViolated.
double l2_bound_svd_nrs(const NRSStats& nrs);

/// Score-recovery l2 bound for the ideal-scale SVD-NRS estimate.
/// Throws PreconditionViolated.
double score_l2_bound_svd_nrs(const NRSStats& nrs);

/// Score estimate with the scale fixed by known eta and p:
/// SVD-RS: center(sigma1 / (eta p sqrt n) u~2);
/// SVD-NRS: center(sigma1 / (eta p ||D^{-1/2} e||) D^{1/2} u~2).
/// Returns the zero vector when sigma1 == 0.
Vector ideal_scale_scores(const RankingResult& result, double eta, double p);

/// (r - alpha e) / ||r - alpha e|| with alpha = mean(r).
Vector true_direction_svd_rs(const ScoreVector& r);

/// E[D]^{-1/2} (r - alpha e) normalized, alpha the E[D]^{-1}-weighted mean.
Vector true_direction_svd_nrs(const ScoreVector& r, double p, double eta);

/// min over beta in {-1, +1} of ||a - beta b||^2.
double aligned_error_sq(std::span<const double> a, std::span<const double> b);

/// min over beta in {-1, +1} of ||a - beta b||_2.
double aligned_error(std::span<const double> a, std::span<const double> b);

/// A bound together with whether its hypotheses are met.
struct BoundValue {
  double value = 0.0;
  bool precondition_holds = false;
  /// The value depends on an unspecified universal constant (placeholder).
  bool uses_placeholder_constant = false;
};

/// Every bound evaluated without throwing; values are computed from the
/// closed forms even when the hypotheses fail, and flagged accordingly.
struct BoundReport {
  ModelStats stats;
  BoundParams params;
  double Delta = 0.0;
  BoundValue wedin;
  double l2_threshold = 0.0;
  BoundValue l2_direction_svd_rs;
  BoundValue linf_C_svd_rs;
  BoundValue linf_direction_svd_rs;
  BoundValue rank_displacement_svd_rs;
  BoundValue score_l2_svd_rs;
  BoundValue score_linf_svd_rs;
  NRSStats nrs;
  BoundValue l2_direction_svd_nrs;
  BoundValue score_l2_svd_nrs;
  double coherence = 0.0;
  /// Set whenever any reported value depends on the placeholder constant.
  bool placeholder_warning = true;
};

BoundReport evaluate_bounds(const ScoreVector& r, double p, double eta,
                            const BoundParams& params = {});

}  // namespace svdrank
