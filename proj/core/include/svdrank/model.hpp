#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "svdrank/linalg.hpp"

namespace svdrank {

/// Latent scores r with r_i in [0, M] and M = max_i r_i.
struct ScoreVector {
  Vector r;
  double M = 0.0;

  /// Validates nonnegativity and sets M to the maximum entry.
  static ScoreVector from(Vector r);
};

enum class ScoreKind { Uniform01, Gamma, Linear };

struct ScoreDistribution {
  ScoreKind kind = ScoreKind::Uniform01;
  double shape = 0.5;  // gamma only
  double scale = 1.0;  // gamma only
};

/// uniform01: iid U[0,1]; gamma: iid Gamma(shape, scale); linear: r_i = i + 1.
/// Throws InvalidParam for n < 2 or a nonpositive gamma parameter.
ScoreVector generate_scores(const ScoreDistribution& dist, std::size_t n, std::uint64_t seed);

/// Erdos-Renyi outliers model parameters. gamma = 1 - eta is the noise level.
struct EROParams {
  std::size_t n = 0;
  double p = 1.0;
  double eta = 1.0;
  std::uint64_t seed = 0;
};

struct Measurement {
  std::size_t i = 0;  // i < j
  std::size_t j = 0;
  double value = 0.0;
};

/// Raw comparisons {i < j, R_ij} over n items.
struct MeasurementSet {
  std::size_t n = 0;
  std::vector<Measurement> edges;
  bool connected = false;

  /// Validates indices and uniqueness, orients pairs as i < j (negating the
  /// value when swapped) and records connectivity. Throws InvalidParam.
  static MeasurementSet from(std::size_t n, std::vector<Measurement> edges);
};

/// Each pair {i, j} is an edge with probability p; an edge carries r_i - r_j
/// with probability eta and a U[-M, M] outlier otherwise. Pair {i, j} draws
/// from its own stream, so the result depends only on (r, params).
MeasurementSet generate_ero(const ScoreVector& r, const EROParams& params);

struct AssembledMatrix {
  SkewSparseMatrix H;
  /// false flags GraphDisconnected: recovery across components is impossible.
  bool connected = false;
};

/// H_ij = R_ij, H_ji = -R_ij on observed pairs; zero elsewhere.
AssembledMatrix build_H(const MeasurementSet& m);

/// Dense C = r e^T - e r^T as a fully populated skew matrix.
SkewSparseMatrix score_difference_matrix(std::span<const double> r);

}  // namespace svdrank
