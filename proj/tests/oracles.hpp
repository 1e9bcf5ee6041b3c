#pragma once

// Independent reference implementations used only by the tests: dense Eigen
// linear algebra and O(n^2) enumerations straight from the definitions.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "svdrank/linalg.hpp"
#include "svdrank/metrics.hpp"
#include "svdrank/random.hpp"

namespace oracle {

using svdrank::SkewSparseMatrix;
using svdrank::Vector;

inline Eigen::MatrixXd dense(const SkewSparseMatrix& h) {
  const auto n = static_cast<Eigen::Index>(h.n());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : h.entries()) {
    a(static_cast<Eigen::Index>(e.i), static_cast<Eigen::Index>(e.j)) = e.value;
    a(static_cast<Eigen::Index>(e.j), static_cast<Eigen::Index>(e.i)) = -e.value;
  }
  return a;
}

inline Eigen::VectorXd to_eigen(const Vector& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline Vector from_eigen(const Eigen::VectorXd& v) { return Vector(v.data(), v.data() + v.size()); }

inline Eigen::VectorXd singular_values(const Eigen::MatrixXd& a) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues();
}

inline double spectral_norm(const Eigen::MatrixXd& a) { return singular_values(a)(0); }

/// Leading two left singular vectors from a full Jacobi SVD.
inline Eigen::MatrixXd top2_left(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU);
  return svd.matrixU().leftCols(2);
}

/// Sine of the largest principal angle between two orthonormal n x 2 bases.
inline double principal_angle_sin(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v) {
  const Eigen::MatrixXd residual = v - u * (u.transpose() * v);
  return Eigen::JacobiSVD<Eigen::MatrixXd>(residual).singularValues()(0);
}

inline Eigen::MatrixXd basis(const svdrank::SpectralPair& sp) {
  Eigen::MatrixXd b(static_cast<Eigen::Index>(sp.u1.size()), 2);
  b.col(0) = to_eigen(sp.u1);
  b.col(1) = to_eigen(sp.u2);
  return b;
}

/// Random dense skew-symmetric matrix with N(0,1) upper entries.
inline SkewSparseMatrix random_dense_skew(std::size_t n, std::uint64_t seed) {
  svdrank::StreamRng rng(seed, 99);
  std::vector<svdrank::SkewEntry> entries;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) entries.push_back({i, j, rng.normal()});
  }
  return SkewSparseMatrix(n, std::move(entries));
}

/// Minimum-norm solution of L x = B^T w via a dense pseudo-inverse.
inline Vector laplacian_pinv_solve(std::size_t n,
                                   const std::vector<std::tuple<std::size_t, std::size_t, double>>& rows) {
  const auto ni = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(ni, ni);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(ni);
  for (const auto& [i, j, w] : rows) {
    const auto a = static_cast<Eigen::Index>(i);
    const auto c = static_cast<Eigen::Index>(j);
    lap(a, a) += 1.0;
    lap(c, c) += 1.0;
    lap(a, c) -= 1.0;
    lap(c, a) -= 1.0;
    b(a) += w;
    b(c) -= w;
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(lap);
  cod.setThreshold(1e-10);
  return from_eigen(cod.pseudoInverse() * b);
}

inline std::vector<std::size_t> positions(const svdrank::Permutation& p) {
  std::vector<std::size_t> pos(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) pos[p[k]] = k;
  return pos;
}

inline std::size_t kendall(const svdrank::Permutation& a, const svdrank::Permutation& b) {
  const auto pa = positions(a);
  const auto pb = positions(b);
  std::size_t count = 0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    for (std::size_t j = i + 1; j < pa.size(); ++j) {
      const bool a_first = pa[i] < pa[j];
      const bool b_first = pb[i] < pb[j];
      count += a_first != b_first ? 1 : 0;
    }
  }
  return count;
}

inline std::size_t max_displacement(const svdrank::Permutation& pi, const svdrank::Permutation& pi_hat) {
  const auto p = positions(pi);
  const auto q = positions(pi_hat);
  std::size_t best = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::size_t c = 0;
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (p[j] > p[i] && q[j] < q[i]) ++c;
      if (p[j] < p[i] && q[j] > q[i]) ++c;
    }
    best = std::max(best, c);
  }
  return best;
}

inline int sign(double x) { return (x > 0.0) - (x < 0.0); }

inline std::size_t upsets(const SkewSparseMatrix& r, const Vector& s) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < r.n(); ++i) {
    for (std::size_t j = i + 1; j < r.n(); ++j) {
      c += sign(r.value(i, j)) * sign(s[i] - s[j]) == -1 ? 1 : 0;
    }
  }
  return c;
}

inline double weighted_upsets(const SkewSparseMatrix& r, const Vector& s) {
  double total = 0.0;
  for (const auto& e : r.entries()) total += std::abs(e.value - (s[e.i] - s[e.j]));
  return total;
}

}  // namespace oracle
