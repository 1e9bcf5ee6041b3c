#include "svdrank/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "svdrank/random.hpp"
#include "union_find.hpp"

namespace svdrank {

namespace {

constexpr std::uint64_t kScoreStream = 0x73636f7265ULL;  // "score"
constexpr std::uint64_t kPairDomain = 0x70616972ULL;     // "pair"

bool edges_connected(std::size_t n, const std::vector<Measurement>& edges) {
  if (n <= 1) return true;
  detail::UnionFind uf(n);
  for (const auto& e : edges) uf.unite(e.i, e.j);
  return uf.components() == 1;
}

}  // namespace

ScoreVector ScoreVector::from(Vector r) {
  ScoreVector s;
  for (double v : r) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidParam, "scores must be finite and nonnegative");
    }
    s.M = std::max(s.M, v);
  }
  s.r = std::move(r);
  return s;
}

ScoreVector generate_scores(const ScoreDistribution& dist, std::size_t n, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorCode::InvalidParam, "need n >= 2");
  Vector r(n);
  StreamRng rng(seed, kScoreStream);
  switch (dist.kind) {
    case ScoreKind::Uniform01:
      for (auto& v : r) v = rng.uniform01();
      break;
    case ScoreKind::Gamma:
      if (!(dist.shape > 0.0) || !(dist.scale > 0.0)) {
        throw Error(ErrorCode::InvalidParam, "gamma shape and scale must be positive");
      }
      for (auto& v : r) v = rng.gamma(dist.shape, dist.scale);
      break;
    case ScoreKind::Linear:
      for (std::size_t i = 0; i < n; ++i) r[i] = static_cast<double>(i + 1);
      break;
  }
  return ScoreVector::from(std::move(r));
}

MeasurementSet MeasurementSet::from(std::size_t n, std::vector<Measurement> edges) {
  for (auto& e : edges) {
    if (e.i >= n || e.j >= n) throw Error(ErrorCode::InvalidParam, "edge index out of range");
    if (e.i == e.j) throw Error(ErrorCode::SelfLoop, "self-loop at " + std::to_string(e.i));
    if (e.i > e.j) {
      std::swap(e.i, e.j);
      e.value = -e.value;
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Measurement& a, const Measurement& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  for (std::size_t k = 1; k < edges.size(); ++k) {
    if (edges[k].i == edges[k - 1].i && edges[k].j == edges[k - 1].j) {
      throw Error(ErrorCode::InvalidParam, "duplicate pair in measurement set");
    }
  }
  MeasurementSet m;
  m.n = n;
  m.connected = edges_connected(n, edges);
  m.edges = std::move(edges);
  return m;
}

MeasurementSet generate_ero(const ScoreVector& r, const EROParams& params) {
  const std::size_t n = params.n;
  if (r.r.size() != n) throw Error(ErrorCode::DimensionMismatch, "score length != n");
  if (n < 2) throw Error(ErrorCode::InvalidParam, "need n >= 2");
  if (!(params.p >= 0.0 && params.p <= 1.0)) throw Error(ErrorCode::InvalidParam, "p not in [0,1]");
  if (!(params.eta >= 0.0 && params.eta <= 1.0)) {
    throw Error(ErrorCode::InvalidParam, "eta not in [0,1]");
  }
  const std::uint64_t pair_seed = derive_seed(params.seed, kPairDomain);
  std::vector<Measurement> edges;
  edges.reserve(static_cast<std::size_t>(params.p * static_cast<double>(n) *
                                         static_cast<double>(n - 1) / 2.0 * 1.05) +
                16);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      StreamRng rng(pair_seed, static_cast<std::uint64_t>(i) * n + j);
      if (!(rng.uniform01() < params.p)) continue;
      const double u = rng.uniform01();
      const double value = u < params.eta ? r.r[i] - r.r[j] : rng.uniform(-r.M, r.M);
      edges.push_back({i, j, value});
    }
  }
  MeasurementSet m;
  m.n = n;
  m.connected = edges_connected(n, edges);
  m.edges = std::move(edges);
  return m;
}

AssembledMatrix build_H(const MeasurementSet& m) {
  std::vector<SkewEntry> entries;
  entries.reserve(m.edges.size());
  for (const auto& e : m.edges) entries.push_back({e.i, e.j, e.value});
  AssembledMatrix out{SkewSparseMatrix(m.n, std::move(entries)), false};
  out.connected = is_connected(out.H);
  return out;
}

SkewSparseMatrix score_difference_matrix(std::span<const double> r) {
  const std::size_t n = r.size();
  std::vector<SkewEntry> entries;
  entries.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) entries.push_back({i, j, r[i] - r[j]});
  }
  return SkewSparseMatrix(n, std::move(entries));
}

}  // namespace svdrank
