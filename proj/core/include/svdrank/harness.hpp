#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "svdrank/algorithms.hpp"
#include "svdrank/baselines.hpp"
#include "svdrank/metrics.hpp"
#include "svdrank/model.hpp"

namespace svdrank {

enum class Metric { Kendall, Correlation, Rmse, Upsets, WeightedUpsets, MaxDisplacement };

std::string_view to_string(Metric m) noexcept;
std::optional<Method> parse_method(std::string_view name);
std::optional<Metric> parse_metric(std::string_view name);

struct ExperimentConfig {
  ScoreDistribution scores;
  std::size_t n = 100;
  std::vector<double> p_grid{1.0};
  /// Noise levels; eta = 1 - gamma.
  std::vector<double> gamma_grid{0.0};
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  std::vector<Method> algorithms{Method::SvdRs, Method::SvdNrs, Method::RowSum,
                                 Method::LeastSquares};
  bool completion = false;
  CompletionConfig completion_config;
  std::vector<Metric> metrics{Metric::Kendall, Metric::Correlation, Metric::Rmse,
                              Metric::Upsets,  Metric::WeightedUpsets};
  ScaleEstimator scale = ScaleEstimator::Median;
  RmseVariant rmse_variant = RmseVariant::Squared;
  /// Evaluate direction bounds and containment for the SVD methods.
  bool theory = false;
  /// Adds a runtime_ms column. Off by default so output bytes are reproducible.
  bool timing = false;
  /// 0 picks std::thread::hardware_concurrency().
  std::size_t threads = 0;
  std::string out;

  /// Throws ConfigError.
  void validate() const;
};

/// Parses the flat `key = value` format. Lists are comma separated, `#` starts
/// a comment. Unknown keys are collected and reported together in one
/// ConfigError; malformed values raise ConfigError with the line number.
ExperimentConfig parse_config(std::string_view text);

/// Throws IoError when the file cannot be read.
ExperimentConfig load_config(const std::string& path);

/// Keys accepted by parse_config, in documentation order.
const std::vector<std::string_view>& config_keys();

struct ResultRow {
  bool agg = false;
  /// "mean" or "std" on aggregate rows; empty otherwise.
  std::string stat;
  Method algorithm = Method::SvdRs;
  std::size_t n = 0;
  double p = 0.0;
  double gamma = 0.0;
  /// Trial index; on aggregate rows the number of successful trials.
  std::size_t trial = 0;
  /// "ok", or the error code name of the failure.
  std::string status = "ok";
  std::string message;

  double kendall = 0.0;
  double kendall_norm = 0.0;
  double correlation = 0.0;
  double rmse = 0.0;
  double upsets = 0.0;
  double weighted_upsets = 0.0;
  double max_displacement = 0.0;
  double tau = 0.0;
  double runtime_ms = 0.0;

  bool has_bound = false;
  /// min over sign of ||u~2 - beta u2||^2 against the model's direction.
  double u2_err2 = 0.0;
  double l2_bound = 0.0;
  /// 1 or 0 on raw rows; the fraction of successful trials on aggregate rows.
  double precondition = 0.0;
  double contained = 0.0;

  bool ok() const noexcept { return status == "ok"; }
};

/// Runs every (p, gamma, trial, algorithm) cell. Scores of trial t and the
/// ERO stream of trial t are shared across the grid, so neighbouring grid
/// points differ only in p or gamma. Raw rows come in grid order followed by
/// per-(algorithm, p, gamma) mean and std rows. Cell failures are recorded in
/// the row status.
std::vector<ResultRow> run_sweep(const ExperimentConfig& cfg);

/// Headered CSV; the columns depend only on cfg (metrics, timing, theory).
void write_csv(std::ostream& os, const std::vector<ResultRow>& rows, const ExperimentConfig& cfg);
std::string to_csv(const std::vector<ResultRow>& rows, const ExperimentConfig& cfg);

/// Reads `i,j,value` rows. Duplicate pairs are summed, (j, i, v) counts as
/// (i, j, -v). Blank lines and lines starting with `#` are skipped, as is a
/// first line whose fields are not numeric. Throws ParseError (with the line
/// number), SelfLoop, IoError.
MeasurementSet ingest_edge_list(const std::string& path, bool one_indexed = false,
                                std::optional<std::size_t> n = std::nullopt);
MeasurementSet parse_edge_list(std::istream& in, bool one_indexed = false,
                               std::optional<std::size_t> n = std::nullopt);

/// Subgraph kept for ranking; `kept[k]` is the original index of new item k.
struct PrunedSet {
  MeasurementSet set;
  std::vector<std::size_t> kept;
  std::vector<std::string> warnings;
};

/// Drops items with degree < min_degree (one pass on the input degrees), then
/// keeps the largest connected component.
PrunedSet prune(const MeasurementSet& m, std::size_t min_degree);

struct RealEvalOptions {
  std::vector<Method> algorithms{Method::SvdRs, Method::SvdNrs, Method::RowSum,
                                 Method::LeastSquares};
  bool completion = false;
  CompletionConfig completion_config;
  ScaleEstimator scale = ScaleEstimator::Median;
  std::size_t min_degree = 0;
  std::uint64_t seed = 1;
};

struct RealEvaluation {
  PrunedSet pruned;
  /// One row per algorithm plus a final seeded random-scores baseline. Only
  /// upsets and weighted_upsets are filled.
  std::vector<ResultRow> rows;
  /// Score estimates on the pruned items, aligned with rows.
  std::vector<Vector> scores;
};

RealEvaluation evaluate_real(const MeasurementSet& m, const RealEvalOptions& opts);

/// Runs one ranking method on an assembled matrix. `observed` is forwarded to
/// the SVD methods (see RankOptions). Random draws U[0,1) scores from `seed`.
RankingResult run_method(Method method, const SkewSparseMatrix& H, ScaleEstimator scale,
                         std::uint64_t seed, const SkewSparseMatrix* observed = nullptr);

/// Built-in example checks. Prints one line per check; returns the number of
/// failures.
int run_selftest(std::ostream& os);

}  // namespace svdrank
