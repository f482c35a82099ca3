#include "piclab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "piclab/errors.hpp"

namespace piclab::linalg {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), ErrorKind::DimensionMismatch, "matmul shapes");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          c(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return c;
}

namespace {

double column_dot(const Matrix& m, std::size_t p, std::size_t q) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, p) * m(i, q);
  return s;
}

void rotate_columns(Matrix& m, std::size_t p, std::size_t q, double c, double s) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double mp = m(i, p), mq = m(i, q);
    m(i, p) = c * mp - s * mq;
    m(i, q) = s * mp + c * mq;
  }
}

// Extends u with a deterministic completion for a column whose singular
// value vanished: the standard basis vector with the largest residual after
// orthogonalizing against every other column.
void complete_column(Matrix& u, std::size_t col) {
  const std::size_t m = u.rows();
  std::vector<double> best;
  double best_norm = 0.0;
  for (std::size_t cand = 0; cand < m; ++cand) {
    std::vector<double> w(m, 0.0);
    w[cand] = 1.0;
    for (std::size_t k = 0; k < u.cols(); ++k) {
      if (k == col) continue;
      double dot = 0.0;
      for (std::size_t i = 0; i < m; ++i) dot += w[i] * u(i, k);
      for (std::size_t i = 0; i < m; ++i) w[i] -= dot * u(i, k);
    }
    double norm = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
    if (norm > best_norm) {
      best_norm = norm;
      best = std::move(w);
    }
  }
  if (best_norm < 1e-8) fail(ErrorKind::NumericalFailure, "could not complete orthonormal basis");
  for (std::size_t i = 0; i < m; ++i) u(i, col) = best[i] / best_norm;
}

}  // namespace

Svd jacobi_svd(const Matrix& a, double tol, int max_sweeps) {
  if (a.rows() < a.cols()) {
    Svd t = jacobi_svd(a.transposed(), tol, max_sweeps);
    return Svd{std::move(t.v), std::move(t.sigma), std::move(t.u)};
  }
  const std::size_t m = a.rows(), n = a.cols();
  Matrix w = a;
  Matrix v = Matrix::identity(n);

  bool converged = false;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = column_dot(w, p, p);
        const double beta = column_dot(w, q, q);
        const double gamma = column_dot(w, p, q);
        if (std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
        converged = false;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        rotate_columns(w, p, q, c, s);
        rotate_columns(v, p, q, c, s);
      }
    }
  }
  if (!converged) fail(ErrorKind::NumericalFailure, "jacobi svd did not converge");

  Svd out;
  out.sigma.resize(n);
  out.u = Matrix(m, n);
  std::vector<std::size_t> order(n);
  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) norms[j] = std::sqrt(column_dot(w, j, j));
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

  Matrix vs(n, n);
  double max_norm = norms.empty() ? 0.0 : norms[order[0]];
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    out.sigma[j] = norms[src];
    for (std::size_t i = 0; i < n; ++i) vs(i, j) = v(i, src);
    if (norms[src] > 1e-14 * std::max(1.0, max_norm)) {
      for (std::size_t i = 0; i < m; ++i) out.u(i, j) = w(i, src) / norms[src];
    }
  }
  out.v = std::move(vs);
  for (std::size_t j = 0; j < n; ++j) {
    if (out.sigma[j] <= 1e-14 * std::max(1.0, max_norm)) {
      out.sigma[j] = std::max(out.sigma[j], 0.0);
      complete_column(out.u, j);
    }
  }
  return out;
}

SymmetricEigen jacobi_eigen(const Matrix& a, double tol, int max_sweeps) {
  require(a.rows() == a.cols(), ErrorKind::DimensionMismatch, "jacobi_eigen needs square input");
  const std::size_t n = a.rows();
  Matrix d = a;
  Matrix v = Matrix::identity(n);

  auto off_norm = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += d(i, j) * d(i, j);
    return std::sqrt(s);
  };

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(d(i, i)));
  scale = std::max(scale, 1.0);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_norm() <= tol * scale) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(d(p, q)) <= tol * scale * 1e-3) continue;
        const double theta = (d(q, q) - d(p, p)) / (2.0 * d(p, q));
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t k = 0; k < n; ++k) {
          const double dpk = d(p, k), dqk = d(q, k);
          d(p, k) = c * dpk - s * dqk;
          d(q, k) = s * dpk + c * dqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double dkp = d(k, p), dkq = d(k, q);
          d(k, p) = c * dkp - s * dkq;
          d(k, q) = s * dkp + c * dkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (off_norm() > tol * scale * 10.0)
    fail(ErrorKind::NumericalFailure, "jacobi eigen did not converge");

  SymmetricEigen out;
  out.values.resize(n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return d(x, x) > d(y, y); });
  out.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = d(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

}  // namespace piclab::linalg
