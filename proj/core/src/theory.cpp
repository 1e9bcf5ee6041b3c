#include "svdrank/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "svdrank/baselines.hpp"

namespace svdrank {

namespace {

using std::numbers::sqrt2;

double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double deviation_norm(std::span<const double> r, double alpha) {
  double s = 0.0;
  for (double v : r) s += (v - alpha) * (v - alpha);
  return std::sqrt(s);
}

double min_gap(std::span<const double> r) {
  Vector sorted(r.begin(), r.end());
  std::sort(sorted.begin(), sorted.end());
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < sorted.size(); ++k) gap = std::min(gap, sorted[k] - sorted[k - 1]);
  return sorted.size() < 2 ? 0.0 : gap;
}

void require_nonconstant(const ScoreVector& r) {
  if (r.r.size() < 2) throw Error(ErrorCode::DegenerateScores, "need at least two scores");
  const auto [lo, hi] = std::minmax_element(r.r.begin(), r.r.end());
  if (!(*hi > *lo)) throw Error(ErrorCode::DegenerateScores, "constant score vector");
}

// Expected absolute row sums (up to the factor p), per the normalized analysis:
// eta S_i + (1 - eta) M / 2.
Vector expected_degree_over_p(const Vector& S, double eta, double M) {
  Vector d(S.size());
  for (std::size_t i = 0; i < S.size(); ++i) d[i] = eta * S[i] + (1.0 - eta) * M / 2.0;
  return d;
}

double nrs_alpha(const ScoreVector& r, const Vector& S, double eta) {
  const Vector d = expected_degree_over_p(S, eta, r.M);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0)) throw Error(ErrorCode::DegenerateScores, "zero expected degree");
    num += r.r[i] / d[i];
    den += 1.0 / d[i];
  }
  return num / den;
}

double sqrt53p(double p) { return std::sqrt(5.0 / (3.0 * p)); }

// Unchecked closed forms.

double l2_direction_value(const ModelStats& s, const BoundParams& b) {
  return (120.0 * s.M / s.eta) * sqrt53p(s.p) * (2.0 + b.epsilon) / s.dev_norm;
}

LinfBound linf_value(const ModelStats& s, const BoundParams& b) {
  const double n = static_cast<double>(s.n);
  const double logn = std::log(n);
  const double dev = s.dev_norm;
  const double spread = 1.0 / std::sqrt(n) + (s.M - s.alpha) / dev;
  const double first = s.M * std::sqrt(logn) / (s.eta * std::sqrt(s.p) * dev) +
                       s.M * s.M * std::pow(logn, 2.0 * b.xi) / (s.eta * s.eta * s.p * dev * dev);
  const double third = std::pow(s.M, 3) / (std::pow(s.eta, 3) * std::pow(s.p, 1.5) * std::pow(dev, 3));
  LinfBound out;
  out.C = b.universal_constant * (first * spread + third);
  out.bound = 4.0 * (2.0 + sqrt2) * out.C + 4.0 * std::sqrt(n) * out.C * out.C;
  return out;
}

double score_l2_value(const ModelStats& s, const BoundParams& b) {
  const double first = (8.0 * s.M / s.eta) * sqrt53p(s.p) * (2.0 + b.epsilon);
  const double second = std::sqrt(120.0 * s.M * (2.0 + b.epsilon) * s.dev_norm /
                                  (s.eta * std::sqrt(s.p))) *
                        std::pow(5.0 / 3.0, 0.25);
  return first + second;
}

double score_linf_value(const ModelStats& s, const BoundParams& b, const LinfBound& linf) {
  const double n = static_cast<double>(s.n);
  return (16.0 / 3.0) * s.dev_norm * ((2.0 + sqrt2) * linf.C + std::sqrt(n) * linf.C * linf.C) +
         8.0 * std::sqrt(5.0 / 3.0) * (2.0 + b.epsilon) * s.M * (s.M - s.alpha) /
             (s.eta * std::sqrt(s.p) * s.dev_norm);
}

double nrs_l2_value(const NRSStats& r) { return 15.0 * r.Delta_tilde / r.sigma_min; }

double nrs_score_value(const NRSStats& r) {
  const ModelStats& s = r.stats;
  const double n = static_cast<double>(s.n);
  const double p = s.p;
  const double logn = std::log(n);
  const double t1 = std::sqrt(3.0 / n) * (r.sigma_max + r.Delta_tilde) *
                    std::sqrt(2.0 * sqrt2 + 1.0) * std::pow(r.A * n * p * logn, 0.25) *
                    (std::sqrt(p * r.lambda_max) + r.lambda_max / r.lambda_min);
  const double t2 = r.Delta_tilde * p * r.lambda_max / std::sqrt(n);
  const double t3 =
      std::sqrt(15.0 * r.Delta_tilde / (r.sigma_min * n)) * r.sigma_max * p * r.lambda_max;
  return 2.0 / (s.eta * p) * (t1 + t2 + t3);
}

bool l2_precondition(const ModelStats& s, const BoundParams& b) {
  return s.p > 0.0 && s.eta > 0.0 && s.dev_norm >= l2_precondition_threshold(s, b);
}

bool linf_precondition(const ModelStats& s, const BoundParams& b) {
  const double n = static_cast<double>(s.n);
  const double logn = std::log(n);
  return s.p > 0.0 && s.eta > 0.0 && s.p >= std::max(1.0 / (2.0 * n), 2.0 * logn / (15.0 * n)) &&
         16.0 / b.kappa <= std::pow(logn, b.xi);
}

void require_positive_model(const ModelStats& s) {
  if (!(s.p > 0.0) || !(s.eta > 0.0)) {
    throw Error(ErrorCode::PreconditionViolated, "bound requires p > 0 and eta > 0");
  }
  if (!(s.dev_norm > 0.0)) throw Error(ErrorCode::DegenerateScores, "constant scores");
}

}  // namespace

ModelStats ModelStats::for_svd_rs(const ScoreVector& r, double p, double eta) {
  require_nonconstant(r);
  ModelStats s;
  s.n = r.r.size();
  s.p = p;
  s.eta = eta;
  s.M = r.M;
  s.alpha = mean(r.r);
  s.dev_norm = deviation_norm(r.r, s.alpha);
  s.rho = min_gap(r.r);
  return s;
}

ModelStats ModelStats::for_svd_nrs(const ScoreVector& r, double p, double eta) {
  ModelStats s = for_svd_rs(r, p, eta);
  s.alpha = nrs_alpha(r, absolute_deviation_sums(r.r), eta);
  s.dev_norm = deviation_norm(r.r, s.alpha);
  return s;
}

void BoundParams::validate() const {
  if (!(epsilon > 0.0 && epsilon <= 0.5)) throw Error(ErrorCode::InvalidParam, "epsilon not in (0, 1/2]");
  if (!(xi > 1.0)) throw Error(ErrorCode::InvalidParam, "xi must exceed 1");
  if (!(kappa > 0.0 && kappa < 1.0)) throw Error(ErrorCode::InvalidParam, "kappa not in (0, 1)");
  if (!(universal_constant > 0.0)) throw Error(ErrorCode::InvalidParam, "constant must be positive");
}

double delta_spectral(const ModelStats& stats, const BoundParams& params) {
  return 8.0 * stats.M * std::sqrt(5.0 / 3.0 * stats.p * static_cast<double>(stats.n)) *
         (2.0 + params.epsilon);
}

double wedin_delta(double Delta, const ModelStats& stats) {
  const double base = stats.eta * stats.p * stats.dev_norm * std::sqrt(static_cast<double>(stats.n));
  if (!(Delta < base)) {
    throw Error(ErrorCode::PreconditionViolated, "Delta >= eta p ||r - alpha e|| sqrt(n)");
  }
  return Delta / (base - Delta);
}

double l2_precondition_threshold(const ModelStats& stats, const BoundParams& params) {
  return (24.0 * stats.M / stats.eta) * sqrt53p(stats.p) * (2.0 + params.epsilon);
}

double l2_bound_svd_rs(const ModelStats& stats, const BoundParams& params) {
  require_positive_model(stats);
  if (!l2_precondition(stats, params)) {
    throw Error(ErrorCode::PreconditionViolated, "||r - alpha e|| below the l2 threshold");
  }
  return l2_direction_value(stats, params);
}

LinfBound linf_C_svd_rs(const ModelStats& stats, const BoundParams& params) {
  require_positive_model(stats);
  if (!(stats.M > stats.alpha)) throw Error(ErrorCode::DegenerateScores, "M equals alpha");
  if (!linf_precondition(stats, params)) {
    throw Error(ErrorCode::PreconditionViolated, "l-infinity conditions on p or n fail");
  }
  return linf_value(stats, params);
}

double rank_displacement_bound(const ModelStats& stats, const BoundParams&, double upsilon) {
  if (!(stats.rho > 0.0)) throw Error(ErrorCode::ZeroGap, "scores are not pairwise distinct");
  return 4.0 * stats.dev_norm * upsilon / stats.rho;
}

ScoreBounds score_bounds_svd_rs(const ModelStats& stats, const BoundParams& params) {
  require_positive_model(stats);
  if (!l2_precondition(stats, params)) {
    throw Error(ErrorCode::PreconditionViolated, "||r - alpha e|| below the l2 threshold");
  }
  const LinfBound linf = linf_C_svd_rs(stats, params);
  return {score_l2_value(stats, params), score_linf_value(stats, params, linf)};
}

Vector absolute_deviation_sums(std::span<const double> r) {
  const std::size_t n = r.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return r[a] < r[b]; });
  double total = 0.0;
  for (double v : r) total += v;
  Vector S(n);
  double below = 0.0;  // sum of values before position k
  for (std::size_t k = 0; k < n; ++k) {
    const double v = r[idx[k]];
    const double above = total - below - v;
    const double kd = static_cast<double>(k);
    const double rest = static_cast<double>(n - k - 1);
    S[idx[k]] = (v * kd - below) + (above - v * rest);
    below += v;
  }
  return S;
}

NRSStats nrs_stats(const ScoreVector& r, double p, double eta, const BoundParams& params) {
  require_nonconstant(r);
  NRSStats out;
  out.S = absolute_deviation_sums(r.r);
  out.stats = ModelStats::for_svd_nrs(r, p, eta);
  const double M = r.M;
  const auto [s_min, s_max] = std::minmax_element(out.S.begin(), out.S.end());
  out.lambda_max = eta * *s_max + (1.0 - eta) * M / 2.0;
  out.lambda_min = eta * *s_min + (1.0 - eta) * M / 2.0;
  out.A = eta * M * M + (1.0 - eta) * M / 2.0;

  const double n = static_cast<double>(r.r.size());
  const double logn = std::log(n);
  const double signal = eta * out.stats.dev_norm * std::sqrt(n);
  out.sigma_min = signal / out.lambda_max;
  out.sigma_max = signal / out.lambda_min;

  if (p > 0.0) {
    const double c1 = 4.0 * std::pow(out.A, 0.25);
    const double fourth = std::pow(n * p * logn, 0.25);
    const double plmin = p * out.lambda_min;
    out.Delta_tilde = 16.0 * M * std::sqrt(5.0 / 3.0 * p * n) * (2.0 + params.epsilon) / plmin +
                      c1 * fourth * out.sigma_max / std::pow(plmin, 1.5) *
                          (c1 * fourth / std::sqrt(plmin) + 2.0 * sqrt2);
    out.p_condition_1 = p >= M * M / (9.0 * out.A) * logn / n;
    out.p_condition_2 = p >= 16.0 * (sqrt2 + 1.0) * (sqrt2 + 1.0) * out.A * n * logn /
                                 (out.lambda_min * out.lambda_min);
    out.delta_condition = out.Delta_tilde <= out.sigma_min / 3.0;
  } else {
    out.Delta_tilde = std::numeric_limits<double>::infinity();
  }
  return out;
}

double l2_bound_svd_nrs(const NRSStats& nrs) {
  if (!nrs.preconditions_hold()) {
    throw Error(ErrorCode::PreconditionViolated, "normalized-analysis conditions fail");
  }
  return nrs_l2_value(nrs);
}

double score_l2_bound_svd_nrs(const NRSStats& nrs) {
  if (!nrs.preconditions_hold()) {
    throw Error(ErrorCode::PreconditionViolated, "normalized-analysis conditions fail");
  }
  return nrs_score_value(nrs);
}

Vector ideal_scale_scores(const RankingResult& result, double eta, double p) {
  const std::size_t n = result.direction.size();
  Vector w(n, 0.0);
  if (n == 0 || result.spectral.sigma1 == 0.0) return w;
  if (result.method == Method::SvdNrs) {
    if (result.degree.size() != n) {
      throw Error(ErrorCode::DimensionMismatch, "ideal_scale_scores: missing degrees");
    }
    double inv_norm = 0.0;
    for (double d : result.degree) inv_norm += 1.0 / d;
    const double c = result.spectral.sigma1 / (eta * p * std::sqrt(inv_norm));
    for (std::size_t i = 0; i < n; ++i) w[i] = c * std::sqrt(result.degree[i]) * result.direction[i];
  } else {
    const double c = result.spectral.sigma1 / (eta * p * std::sqrt(static_cast<double>(n)));
    for (std::size_t i = 0; i < n; ++i) w[i] = c * result.direction[i];
  }
  return center(w);
}

Vector true_direction_svd_rs(const ScoreVector& r) {
  require_nonconstant(r);
  const double alpha = mean(r.r);
  const double dev = deviation_norm(r.r, alpha);
  Vector u(r.r.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = (r.r[i] - alpha) / dev;
  return u;
}

Vector true_direction_svd_nrs(const ScoreVector& r, double p, double eta) {
  require_nonconstant(r);
  const Vector S = absolute_deviation_sums(r.r);
  const Vector d = expected_degree_over_p(S, eta, r.M);
  const double alpha = nrs_alpha(r, S, eta);
  Vector u(r.r.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = (r.r[i] - alpha) / std::sqrt(p * d[i]);
  const double len = norm2(u);
  for (auto& x : u) x /= len;
  return u;
}

double aligned_error_sq(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "aligned_error: sizes");
  double plus = 0.0;
  double minus = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    plus += (a[k] - b[k]) * (a[k] - b[k]);
    minus += (a[k] + b[k]) * (a[k] + b[k]);
  }
  return std::min(plus, minus);
}

double aligned_error(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(aligned_error_sq(a, b));
}

BoundReport evaluate_bounds(const ScoreVector& r, double p, double eta, const BoundParams& params) {
  params.validate();
  BoundReport rep;
  rep.params = params;
  rep.stats = ModelStats::for_svd_rs(r, p, eta);
  const ModelStats& s = rep.stats;
  rep.coherence = coherence(r);
  rep.Delta = delta_spectral(s, params);

  const double base = s.eta * s.p * s.dev_norm * std::sqrt(static_cast<double>(s.n));
  rep.wedin.precondition_holds = rep.Delta < base;
  rep.wedin.value = rep.wedin.precondition_holds ? rep.Delta / (base - rep.Delta)
                                                 : std::numeric_limits<double>::infinity();

  if (!(p > 0.0) || !(eta > 0.0)) return rep;

  const bool l2_ok = l2_precondition(s, params);
  const bool linf_ok = linf_precondition(s, params) && l2_ok;
  rep.l2_threshold = l2_precondition_threshold(s, params);
  rep.l2_direction_svd_rs = {l2_direction_value(s, params), l2_ok, false};

  const LinfBound linf = linf_value(s, params);
  rep.linf_C_svd_rs = {linf.C, linf_precondition(s, params), true};
  rep.linf_direction_svd_rs = {linf.bound, linf_ok, true};
  if (s.rho > 0.0) {
    rep.rank_displacement_svd_rs = {4.0 * s.dev_norm * linf.bound / s.rho, linf_ok, true};
  }
  rep.score_l2_svd_rs = {score_l2_value(s, params), l2_ok, false};
  rep.score_linf_svd_rs = {score_linf_value(s, params, linf), linf_ok, true};

  rep.nrs = nrs_stats(r, p, eta, params);
  const bool nrs_ok = rep.nrs.preconditions_hold();
  rep.l2_direction_svd_nrs = {nrs_l2_value(rep.nrs), nrs_ok, false};
  rep.score_l2_svd_nrs = {nrs_score_value(rep.nrs), nrs_ok, false};
  return rep;
}

}  // namespace svdrank
