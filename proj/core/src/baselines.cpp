#include "svdrank/baselines.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "union_find.hpp"

namespace svdrank {

IncidenceSystem IncidenceSystem::from(const MeasurementSet& m) {
  IncidenceSystem sys;
  sys.rows.reserve(m.edges.size());
  for (const auto& e : m.edges) sys.rows.push_back({e.i, e.j, e.value});
  return sys;
}

IncidenceSystem IncidenceSystem::from(const SkewSparseMatrix& H) {
  IncidenceSystem sys;
  sys.rows.reserve(H.nnz());
  for (const auto& e : H.entries()) sys.rows.push_back({e.i, e.j, e.value});
  return sys;
}

Vector row_sums(const SkewSparseMatrix& H) { return matvec(H, Vector(H.n(), 1.0)); }

RankingResult rowsum_rank(const SkewSparseMatrix& H) {
  if (H.n() < 2) throw Error(ErrorCode::InvalidParam, "rowsum_rank requires n >= 2");
  RankingResult out;
  out.method = Method::RowSum;
  out.score_estimate = center(row_sums(H));
  out.beta = 1;
  out.tau = 1.0;
  try {
    const double tau = recover_scale_median(compute_ratio_entries(H, out.score_estimate));
    if (tau > 0.0 && std::isfinite(tau)) out.tau = tau;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::EmptyRatios) throw;
  }
  for (auto& x : out.score_estimate) x *= out.tau;
  out.permutation = Permutation::from_scores(out.score_estimate);
  return out;
}

RankingResult least_squares_rank(const IncidenceSystem& sys, std::size_t n, double tol,
                                 std::size_t max_iter) {
  if (n < 2) throw Error(ErrorCode::InvalidParam, "least_squares_rank requires n >= 2");
  detail::UnionFind uf(n);
  for (const auto& row : sys.rows) {
    if (row.i >= n || row.j >= n || row.i == row.j) {
      throw Error(ErrorCode::InvalidParam, "incidence row with invalid indices");
    }
    uf.unite(row.i, row.j);
  }
  if (uf.components() != 1) throw Error(ErrorCode::GraphDisconnected, "incidence graph");
  if (max_iter == 0) max_iter = 10 * n + 100;

  // Laplacian action L x = B^T B x without forming L.
  auto laplacian = [&](const Vector& x) {
    Vector y(n, 0.0);
    for (const auto& row : sys.rows) {
      const double d = x[row.i] - x[row.j];
      y[row.i] += d;
      y[row.j] -= d;
    }
    return y;
  };

  Vector b(n, 0.0);
  for (const auto& row : sys.rows) {
    b[row.i] += row.w;
    b[row.j] -= row.w;
  }
  Vector x(n, 0.0);
  Vector r = b;
  const double b_norm = norm2(b);
  if (b_norm > 0.0) {
    Vector p = r;
    double rr = dot(r, r);
    bool converged = false;
    for (std::size_t it = 0; it < max_iter; ++it) {
      const Vector q = laplacian(p);
      const double alpha = rr / dot(p, q);
      for (std::size_t k = 0; k < n; ++k) {
        x[k] += alpha * p[k];
        r[k] -= alpha * q[k];
      }
      const double rr_next = dot(r, r);
      if (std::sqrt(rr_next) <= tol * b_norm) {
        converged = true;
        break;
      }
      const double beta = rr_next / rr;
      rr = rr_next;
      for (std::size_t k = 0; k < n; ++k) p[k] = r[k] + beta * p[k];
    }
    if (!converged) {
      throw Error(ErrorCode::NotConverged, "least squares CG: relative residual " +
                                               std::to_string(std::sqrt(rr) / b_norm));
    }
  }

  RankingResult out;
  out.method = Method::LeastSquares;
  out.score_estimate = center(x);
  out.permutation = Permutation::from_scores(out.score_estimate);
  return out;
}

CompletionResult complete_matrix(const MeasurementSet& m, const CompletionConfig& cfg) {
  const std::size_t n = m.n;
  if (n > cfg.dense_limit) {
    throw Error(ErrorCode::InvalidParam, "complete_matrix: n = " + std::to_string(n) +
                                             " exceeds dense limit " +
                                             std::to_string(cfg.dense_limit));
  }
  if (!(cfg.step > 0.0) || !(cfg.threshold_scale > 0.0) || !(cfg.threshold_decay > 0.0) ||
      !(cfg.threshold_decay <= 1.0) || !(cfg.threshold_floor > 0.0) || !(cfg.tol > 0.0)) {
    throw Error(ErrorCode::InvalidParam, "complete_matrix: invalid configuration");
  }

  CompletionResult out;
  if (m.edges.empty() || n < 2) {
    out.matrix = SkewSparseMatrix(n);
    return out;
  }

  using Eigen::MatrixXd;
  const auto ni = static_cast<Eigen::Index>(n);
  MatrixXd observed = MatrixXd::Zero(ni, ni);
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> mask =
      Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(ni, ni, false);
  double sum_sq = 0.0;
  for (const auto& e : m.edges) {
    const auto i = static_cast<Eigen::Index>(e.i);
    const auto j = static_cast<Eigen::Index>(e.j);
    observed(i, j) = e.value;
    observed(j, i) = -e.value;
    mask(i, j) = mask(j, i) = true;
    sum_sq += e.value * e.value;
  }
  const double nd = static_cast<double>(n);
  const double p_hat = static_cast<double>(m.edges.size()) / (nd * (nd - 1.0) / 2.0);
  const double rms = std::sqrt(sum_sq / static_cast<double>(m.edges.size()));
  const double lambda0 = cfg.threshold_scale * std::sqrt(nd * p_hat) * std::max(rms, 1e-300);
  const double lambda_min = cfg.threshold_floor * lambda0;
  double lambda = lambda0;

  // Gradient step on 1/2 ||P(X - Y)||^2 followed by the nuclear-norm prox,
  // with Nesterov momentum.
  auto gradient_step = [&](const MatrixXd& w) {
    MatrixXd z = w;
    for (Eigen::Index j = 0; j < ni; ++j) {
      for (Eigen::Index i = 0; i < ni; ++i) {
        if (mask(i, j)) z(i, j) = w(i, j) + cfg.step * (observed(i, j) - w(i, j));
      }
    }
    z.diagonal().setZero();
    return z;
  };

  MatrixXd x = MatrixXd::Zero(ni, ni);
  MatrixXd x_prev = x;
  double t = 1.0;
  for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const MatrixXd w = x + ((t - 1.0) / t_next) * (x - x_prev);
    const MatrixXd z = gradient_step(w);

    Eigen::BDCSVD<MatrixXd> svd(z, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXd shrunk = (svd.singularValues().array() - lambda * cfg.step).max(0.0);
    std::size_t rank = 0;
    for (Eigen::Index k = 0; k < shrunk.size(); ++k) rank += shrunk(k) > 0.0 ? 1 : 0;
    MatrixXd x_next = svd.matrixU() * shrunk.asDiagonal() * svd.matrixV().transpose();
    x_next.diagonal().setZero();

    const double base = std::max(x.norm(), 1e-300);
    out.relative_change = (x_next - x).norm() / base;
    out.iterations = it;
    out.rank = rank;
    x_prev = std::move(x);
    x = std::move(x_next);
    t = t_next;

    const bool at_floor = lambda <= lambda_min * (1.0 + 1e-12);
    if (at_floor && out.relative_change <= cfg.tol) {
      out.converged = true;
      break;
    }
    lambda = std::max(lambda * cfg.threshold_decay, lambda_min);
  }

  // Data-consistency iterate: observed entries from the data, the rest from
  // the low-rank estimate; then skew-symmetrize.
  for (Eigen::Index j = 0; j < ni; ++j) {
    for (Eigen::Index i = 0; i < ni; ++i) {
      if (mask(i, j)) x(i, j) = observed(i, j);
    }
  }
  x.diagonal().setZero();
  std::vector<SkewEntry> entries;
  entries.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      entries.push_back({i, j, 0.5 * (x(ii, jj) - x(jj, ii))});
    }
  }
  out.matrix = SkewSparseMatrix(n, std::move(entries));
  return out;
}

double coherence(const ScoreVector& r) {
  const std::size_t n = r.r.size();
  if (n == 0) throw Error(ErrorCode::DegenerateScores, "empty score vector");
  const double alpha = std::accumulate(r.r.begin(), r.r.end(), 0.0) / static_cast<double>(n);
  double dev = 0.0;
  for (double v : r.r) dev += (v - alpha) * (v - alpha);
  dev = std::sqrt(dev);
  const double M = *std::max_element(r.r.begin(), r.r.end());
  if (!(dev > 0.0) || !(M > alpha)) throw Error(ErrorCode::DegenerateScores, "constant scores");
  return std::max((M - alpha) * std::sqrt(static_cast<double>(n)) / dev, 1.0);
}

}  // namespace svdrank
