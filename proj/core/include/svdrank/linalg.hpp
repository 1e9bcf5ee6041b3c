#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "svdrank/errors.hpp"

namespace svdrank {

using Vector = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

/// One stored measurement of a skew-symmetric matrix: value at (i, j), i < j.
/// The entry at (j, i) is implied to be -value.
struct SkewEntry {
  std::size_t i = 0;
  std::size_t j = 0;
  double value = 0.0;
};

/// Sparse n x n skew-symmetric matrix stored once per unordered pair.
///
/// Entries given with i > j are folded to (j, i, -value) on construction, so
/// antisymmetry and the zero diagonal hold by construction. Entries are kept
/// sorted by (i, j). An entry whose value is exactly zero is still an
/// observed pair and counts toward degrees and connectivity.
class SkewSparseMatrix {
 public:
  SkewSparseMatrix() = default;

  /// Throws InvalidParam on out-of-range indices, diagonal entries, duplicate
  /// unordered pairs or non-finite values.
  SkewSparseMatrix(std::size_t n, std::vector<SkewEntry> entries);

  /// Empty (all-zero) matrix.
  explicit SkewSparseMatrix(std::size_t n) : n_(n) {}

  std::size_t n() const noexcept { return n_; }
  std::size_t nnz() const noexcept { return entries_.size(); }
  std::span<const SkewEntry> entries() const noexcept { return entries_; }

  /// H(i, j) with the antisymmetric completion; O(log nnz).
  double value(std::size_t i, std::size_t j) const;

  /// max |H_ij| over stored entries (0 for an empty matrix).
  double max_abs() const noexcept;

  /// Returns D H D for the diagonal matrix D = diag(d).
  SkewSparseMatrix scaled(std::span<const double> d) const;

  /// Returns c * H.
  SkewSparseMatrix times(double c) const;

  /// Number of stored pairs touching each node.
  std::vector<std::size_t> degrees() const;

  /// Row sums of |H|.
  Vector abs_row_sums() const;

 private:
  std::size_t n_ = 0;
  std::vector<SkewEntry> entries_;
};

/// y = H x. Throws DimensionMismatch.
Vector matvec(const SkewSparseMatrix& h, std::span<const double> x);

/// True iff the undirected graph of stored pairs spans all n nodes in one
/// component. A matrix with n <= 1 is connected.
bool is_connected(const SkewSparseMatrix& h);

struct SpectralOptions {
  double tol = 1e-10;
  std::size_t max_iter = 2000;
  std::uint64_t seed = 0x5eedULL;
};

/// Orthonormal basis of the dominant two-dimensional left singular subspace.
struct SpectralPair {
  Vector u1;
  Vector u2;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  std::size_t iterations = 0;
  /// max over both block vectors of ||(H H^T) v - lambda v|| / lambda.
  double residual = 0.0;
  bool converged = false;
};

/// Raised by top2_svd when max_iter is exhausted; carries the last iterate.
class SpectralNotConverged : public Error {
 public:
  explicit SpectralNotConverged(SpectralPair partial);
  const SpectralPair& partial() const noexcept { return partial_; }

 private:
  SpectralPair partial_;
};

/// Block subspace iteration (block size 2) on x -> -H(Hx) = H H^T x with a
/// Rayleigh-Ritz rotation each sweep. Never throws on non-convergence; the
/// returned pair records `converged`. Throws DegenerateSpectrum for a
/// numerically zero matrix and InvalidParam for n < 2.
SpectralPair compute_top2(const SkewSparseMatrix& h, const SpectralOptions& opts = {});

/// As compute_top2, but throws SpectralNotConverged when the residual
/// criterion is not met within max_iter sweeps.
SpectralPair top2_svd(const SkewSparseMatrix& h, const SpectralOptions& opts = {});

/// <u1, v> u1 + <u2, v> u2.
Vector project_onto_span(std::span<const double> v, const SpectralPair& basis);

/// Unit vector inside span{u1, u2} orthogonal to u_bar (which must itself lie
/// in the span). Sign is unspecified. Throws ZeroProjection when
/// ||u_bar|| <= 1e-12.
Vector orthonormal_complement_in_span(std::span<const double> u_bar, const SpectralPair& basis);

}  // namespace svdrank
