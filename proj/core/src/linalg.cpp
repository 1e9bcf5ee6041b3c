#include "svdrank/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "svdrank/random.hpp"
#include "union_find.hpp"

namespace svdrank {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidParam: return "InvalidParam";
    case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::ZeroProjection: return "ZeroProjection";
    case ErrorCode::GraphDisconnected: return "GraphDisconnected";
    case ErrorCode::IsolatedNode: return "IsolatedNode";
    case ErrorCode::EmptyRatios: return "EmptyRatios";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::DegenerateScores: return "DegenerateScores";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::ZeroGap: return "ZeroGap";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "dot: lengths differ");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

SkewSparseMatrix::SkewSparseMatrix(std::size_t n, std::vector<SkewEntry> entries)
    : n_(n), entries_(std::move(entries)) {
  for (auto& e : entries_) {
    if (e.i >= n_ || e.j >= n_) throw Error(ErrorCode::InvalidParam, "entry index out of range");
    if (e.i == e.j) throw Error(ErrorCode::InvalidParam, "diagonal entry");
    if (!std::isfinite(e.value)) throw Error(ErrorCode::InvalidParam, "non-finite entry");
    if (e.i > e.j) {
      std::swap(e.i, e.j);
      e.value = -e.value;
    }
  }
  std::sort(entries_.begin(), entries_.end(), [](const SkewEntry& a, const SkewEntry& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  for (std::size_t k = 1; k < entries_.size(); ++k) {
    if (entries_[k].i == entries_[k - 1].i && entries_[k].j == entries_[k - 1].j) {
      throw Error(ErrorCode::InvalidParam, "duplicate pair (" + std::to_string(entries_[k].i) +
                                               ", " + std::to_string(entries_[k].j) + ")");
    }
  }
}

double SkewSparseMatrix::value(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw Error(ErrorCode::DimensionMismatch, "value: index out of range");
  if (i == j) return 0.0;
  const bool flip = i > j;
  if (flip) std::swap(i, j);
  auto it = std::lower_bound(entries_.begin(), entries_.end(), SkewEntry{i, j, 0.0},
                             [](const SkewEntry& a, const SkewEntry& b) {
                               return a.i != b.i ? a.i < b.i : a.j < b.j;
                             });
  if (it == entries_.end() || it->i != i || it->j != j) return 0.0;
  return flip ? -it->value : it->value;
}

double SkewSparseMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& e : entries_) m = std::max(m, std::abs(e.value));
  return m;
}

SkewSparseMatrix SkewSparseMatrix::scaled(std::span<const double> d) const {
  if (d.size() != n_) throw Error(ErrorCode::DimensionMismatch, "scaled: diagonal length");
  SkewSparseMatrix out;
  out.n_ = n_;
  out.entries_ = entries_;
  for (auto& e : out.entries_) e.value *= d[e.i] * d[e.j];
  return out;
}

SkewSparseMatrix SkewSparseMatrix::times(double c) const {
  SkewSparseMatrix out;
  out.n_ = n_;
  out.entries_ = entries_;
  for (auto& e : out.entries_) e.value *= c;
  return out;
}

std::vector<std::size_t> SkewSparseMatrix::degrees() const {
  std::vector<std::size_t> deg(n_, 0);
  for (const auto& e : entries_) {
    ++deg[e.i];
    ++deg[e.j];
  }
  return deg;
}

Vector SkewSparseMatrix::abs_row_sums() const {
  Vector d(n_, 0.0);
  for (const auto& e : entries_) {
    d[e.i] += std::abs(e.value);
    d[e.j] += std::abs(e.value);
  }
  return d;
}

Vector matvec(const SkewSparseMatrix& h, std::span<const double> x) {
  if (x.size() != h.n()) throw Error(ErrorCode::DimensionMismatch, "matvec: dim(x) != n");
  Vector y(h.n(), 0.0);
  for (const auto& e : h.entries()) {
    y[e.i] += e.value * x[e.j];
    y[e.j] -= e.value * x[e.i];
  }
  return y;
}

bool is_connected(const SkewSparseMatrix& h) {
  if (h.n() <= 1) return true;
  detail::UnionFind uf(h.n());
  for (const auto& e : h.entries()) uf.unite(e.i, e.j);
  return uf.components() == 1;
}

SpectralNotConverged::SpectralNotConverged(SpectralPair partial)
    : Error(ErrorCode::NotConverged,
            "top2_svd: residual " + std::to_string(partial.residual) + " after " +
                std::to_string(partial.iterations) + " iterations"),
      partial_(std::move(partial)) {}

namespace {

void axpy(double a, const Vector& x, Vector& y) {
  for (std::size_t k = 0; k < y.size(); ++k) y[k] += a * x[k];
}

void scale(Vector& x, double a) {
  for (auto& v : x) v *= a;
}

Vector gaussian_vector(StreamRng& rng, std::size_t n) {
  Vector v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

// Orthonormalizes (a, b) in place with two Gram-Schmidt passes. A column that
// collapses is replaced by a fresh random direction.
void orthonormalize(Vector& a, Vector& b, StreamRng& rng) {
  for (int attempt = 0; attempt < 8; ++attempt) {
    const double na = norm2(a);
    if (na > 0.0 && std::isfinite(na)) break;
    a = gaussian_vector(rng, a.size());
  }
  scale(a, 1.0 / norm2(a));
  for (int attempt = 0; attempt < 8; ++attempt) {
    const double before = norm2(b);
    for (int pass = 0; pass < 2; ++pass) axpy(-dot(a, b), a, b);
    const double after = norm2(b);
    if (after > 1e-10 * before && after > 0.0) {
      scale(b, 1.0 / after);
      return;
    }
    b = gaussian_vector(rng, b.size());
  }
  throw Error(ErrorCode::DegenerateSpectrum, "cannot build a two-dimensional basis");
}

Vector apply_gram(const SkewSparseMatrix& h, const Vector& x) {
  Vector y = matvec(h, matvec(h, x));
  scale(y, -1.0);
  return y;
}

}  // namespace

SpectralPair compute_top2(const SkewSparseMatrix& h, const SpectralOptions& opts) {
  const std::size_t n = h.n();
  if (n < 2) throw Error(ErrorCode::InvalidParam, "top2_svd requires n >= 2");
  const double hmax = h.max_abs();
  if (hmax == 0.0) throw Error(ErrorCode::DegenerateSpectrum, "matrix is zero");

  StreamRng rng(opts.seed, 0);
  Vector q1 = gaussian_vector(rng, n);
  Vector q2 = gaussian_vector(rng, n);
  orthonormalize(q1, q2, rng);

  SpectralPair out;
  const std::size_t max_iter = std::max<std::size_t>(opts.max_iter, 1);
  for (std::size_t it = 1; it <= max_iter; ++it) {
    Vector w1 = apply_gram(h, q1);
    Vector w2 = apply_gram(h, q2);

    // Rayleigh-Ritz on the 2x2 projected operator.
    const double a = dot(q1, w1);
    const double d = dot(q2, w2);
    const double b = 0.5 * (dot(q1, w2) + dot(q2, w1));
    const double theta = 0.5 * std::atan2(2.0 * b, a - d);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double lam1 = a * c * c + 2.0 * b * c * s + d * s * s;
    const double lam2 = a * s * s - 2.0 * b * c * s + d * c * c;

    Vector v1(n), v2(n), z1(n), z2(n);
    for (std::size_t k = 0; k < n; ++k) {
      v1[k] = c * q1[k] + s * q2[k];
      v2[k] = -s * q1[k] + c * q2[k];
      z1[k] = c * w1[k] + s * w2[k];
      z2[k] = -s * w1[k] + c * w2[k];
    }

    auto relative_residual = [](const Vector& z, const Vector& v, double lam) {
      if (!(lam > 0.0)) return std::numeric_limits<double>::infinity();
      double r = 0.0;
      for (std::size_t k = 0; k < z.size(); ++k) {
        const double t = z[k] - lam * v[k];
        r += t * t;
      }
      return std::sqrt(r) / lam;
    };
    const double res = std::max(relative_residual(z1, v1, lam1), relative_residual(z2, v2, lam2));

    out.u1 = std::move(v1);
    out.u2 = std::move(v2);
    out.sigma1 = std::sqrt(std::max(lam1, 0.0));
    out.sigma2 = std::sqrt(std::max(lam2, 0.0));
    out.iterations = it;
    out.residual = res;
    if (res <= opts.tol) {
      out.converged = true;
      break;
    }
    q1 = std::move(z1);
    q2 = std::move(z2);
    orthonormalize(q1, q2, rng);
  }

  if (out.sigma1 <= opts.tol * hmax * static_cast<double>(n)) {
    throw Error(ErrorCode::DegenerateSpectrum, "leading singular value is numerically zero");
  }
  return out;
}

SpectralPair top2_svd(const SkewSparseMatrix& h, const SpectralOptions& opts) {
  SpectralPair pair = compute_top2(h, opts);
  if (!pair.converged) throw SpectralNotConverged(std::move(pair));
  return pair;
}

Vector project_onto_span(std::span<const double> v, const SpectralPair& basis) {
  if (v.size() != basis.u1.size() || v.size() != basis.u2.size()) {
    throw Error(ErrorCode::DimensionMismatch, "project_onto_span: dimension");
  }
  const double c1 = dot(basis.u1, v);
  const double c2 = dot(basis.u2, v);
  Vector out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = c1 * basis.u1[k] + c2 * basis.u2[k];
  return out;
}

Vector orthonormal_complement_in_span(std::span<const double> u_bar, const SpectralPair& basis) {
  if (u_bar.size() != basis.u1.size() || u_bar.size() != basis.u2.size()) {
    throw Error(ErrorCode::DimensionMismatch, "orthonormal_complement_in_span: dimension");
  }
  if (norm2(u_bar) <= 1e-12) {
    throw Error(ErrorCode::ZeroProjection, "projected direction vanishes");
  }
  const double c1 = dot(basis.u1, u_bar);
  const double c2 = dot(basis.u2, u_bar);
  const double len = std::hypot(c1, c2);
  Vector out(u_bar.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = (-c2 * basis.u1[k] + c1 * basis.u2[k]) / len;
  }
  return out;
}

}  // namespace svdrank
