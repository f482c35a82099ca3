#include "piclab/pic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "piclab/errors.hpp"

namespace piclab::pic {

using dist::Channel;
using dist::JointPmf;
using linalg::Matrix;

namespace {

// Gram-Schmidt completion of `basis` columns [from, cols) against everything
// already present, picking for each new column the standard basis vector
// with the largest residual.
void complete_basis(Matrix& basis, std::size_t from) {
  const std::size_t dim = basis.rows();
  for (std::size_t col = from; col < basis.cols(); ++col) {
    std::vector<double> best;
    double best_norm = 0.0;
    for (std::size_t cand = 0; cand < dim; ++cand) {
      std::vector<double> w(dim, 0.0);
      w[cand] = 1.0;
      for (std::size_t c = 0; c < col; ++c) {
        double dot = 0.0;
        for (std::size_t i = 0; i < dim; ++i) dot += w[i] * basis(i, c);
        for (std::size_t i = 0; i < dim; ++i) w[i] -= dot * basis(i, c);
      }
      double norm = 0.0;
      for (double v : w) norm += v * v;
      norm = std::sqrt(norm);
      if (norm > best_norm) {
        best_norm = norm;
        best = std::move(w);
      }
    }
    if (best_norm < 1e-8) fail(ErrorKind::NumericalFailure, "basis completion failed");
    for (std::size_t i = 0; i < dim; ++i) basis(i, col) = best[i] / best_norm;
  }
}

}  // namespace

PicDecomposition decompose(const JointPmf& j, double tol) {
  const std::size_t m = j.rows(), n = j.cols();
  std::vector<double> u0(m), v0(n);
  for (std::size_t i = 0; i < m; ++i) u0[i] = std::sqrt(j.p_x()[i]);
  for (std::size_t k = 0; k < n; ++k) v0[k] = std::sqrt(j.p_y()[k]);

  // The leading triplet of Q is (1, sqrt(p_X), sqrt(p_Y)) identically, so it
  // is pinned analytically and the SVD runs on the deflated remainder. This
  // keeps f_0 = g_0 = 1 even when further singular values tie with 1.
  Matrix q_deflated(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < n; ++k)
      q_deflated(i, k) = j(i, k) / (u0[i] * v0[k]) - u0[i] * v0[k];

  linalg::Svd svd = linalg::jacobi_svd(q_deflated);
  require(svd.sigma[0] <= 1.0 + std::max(tol, 1e-6), ErrorKind::InconsistentDecomposition,
          "singular value of Q exceeds 1");

  PicDecomposition dec;
  const std::size_t r = std::min(m, n);
  dec.d = r - 1;
  dec.sigma_full.assign(r, 0.0);
  dec.sigma_full[0] = 1.0;
  dec.f_funcs = Matrix(m, r);
  dec.g_funcs = Matrix(n, r);

  Matrix u_basis(m, r), v_basis(n, r);
  for (std::size_t i = 0; i < m; ++i) u_basis(i, 0) = u0[i];
  for (std::size_t k = 0; k < n; ++k) v_basis(k, 0) = v0[k];
  std::size_t filled = 1;
  for (std::size_t k = 0; k + 1 < r && svd.sigma[k] > 1e-13; ++k, ++filled) {
    double s = svd.sigma[k];
    if (std::abs(s - 1.0) <= 1e-10) s = 1.0;
    dec.sigma_full[filled] = s;
    for (std::size_t i = 0; i < m; ++i) u_basis(i, filled) = svd.u(i, k);
    for (std::size_t i = 0; i < n; ++i) v_basis(i, filled) = svd.v(i, k);
  }
  complete_basis(u_basis, filled);
  complete_basis(v_basis, filled);

  dec.lambdas.resize(dec.d);
  for (std::size_t k = 0; k < dec.d; ++k) {
    const double s = dec.sigma_full[k + 1];
    dec.lambdas[k] = std::clamp(s * s, 0.0, 1.0);
  }

  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t i = 0; i < m; ++i) dec.f_funcs(i, k) = u_basis(i, k) / u0[i];
    for (std::size_t i = 0; i < n; ++i) dec.g_funcs(i, k) = v_basis(i, k) / v0[i];
  }

  // Deterministic signs: first nonzero entry of f_k positive; g_k follows
  // through the coupling E[f_k|Y] = sqrt(l_k) g_k while the singular value
  // is nonzero, and gets the same rule on its own once it vanishes.
  for (std::size_t k = 0; k < r; ++k) {
    double lead = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (std::abs(dec.f_funcs(i, k)) > 1e-12) {
        lead = dec.f_funcs(i, k);
        break;
      }
    }
    if (lead < 0.0) {
      for (std::size_t i = 0; i < m; ++i) dec.f_funcs(i, k) = -dec.f_funcs(i, k);
      if (dec.sigma_full[k] > 1e-12)
        for (std::size_t i = 0; i < n; ++i) dec.g_funcs(i, k) = -dec.g_funcs(i, k);
    }
    if (dec.sigma_full[k] <= 1e-12) {
      double glead = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(dec.g_funcs(i, k)) > 1e-12) {
          glead = dec.g_funcs(i, k);
          break;
        }
      }
      if (glead < 0.0)
        for (std::size_t i = 0; i < n; ++i) dec.g_funcs(i, k) = -dec.g_funcs(i, k);
    }
  }

  for (std::size_t k = 0; k < dec.d;) {
    std::size_t end = k;
    while (end + 1 < dec.d && std::abs(dec.lambdas[end] - dec.lambdas[end + 1]) < 1e-9) ++end;
    if (end > k) dec.ties.push_back({k, end});
    k = end + 1;
  }

  const double px_min = *std::min_element(j.p_x().begin(), j.p_x().end());
  const double py_min = *std::min_element(j.p_y().begin(), j.p_y().end());
  dec.ill_conditioned = (1.0 / std::min(px_min, py_min) > 1e8);
  return dec;
}

double k_correlation(const PicDecomposition& dec, std::size_t k) {
  require(k >= 1 && k <= dec.d, ErrorKind::IndexOutOfRange, "k_correlation order outside [1,d]");
  return std::accumulate(dec.lambdas.begin(), dec.lambdas.begin() + k, 0.0);
}

double maximal_correlation(const PicDecomposition& dec) {
  if (dec.d == 0) return 0.0;
  return std::sqrt(dec.lambdas[0]);
}

MmseReport mmse_of_function(const JointPmf& j, const PicDecomposition& dec,
                            const std::vector<double>& f) {
  require(f.size() == j.rows(), ErrorKind::DimensionMismatch,
          "function length differs from |X|");
  const auto& px = j.p_x();
  double mean = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) mean += px[i] * f[i];
  std::vector<double> fc(f.size());
  double var = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    fc[i] = f[i] - mean;
    var += px[i] * fc[i] * fc[i];
  }
  const double norm = std::sqrt(var);
  require(norm >= 1e-12, ErrorKind::DegenerateFunction, "function is constant after centering");

  MmseReport rep;
  rep.variance = var;
  rep.coeffs.resize(dec.d);
  double aligned = 0.0;
  for (std::size_t k = 0; k < dec.d; ++k) {
    double c = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) c += px[i] * fc[i] * dec.f_funcs(i, k + 1);
    c /= norm;
    rep.coeffs[k] = c;
    aligned += c * c * dec.lambdas[k];
  }
  rep.mmse = var * (1.0 - aligned);
  if (rep.mmse < 0.0 && rep.mmse > -1e-12) rep.mmse = 0.0;
  return rep;
}

std::vector<double> tensorize(const PicDecomposition& dec_a, const PicDecomposition& dec_b) {
  std::vector<double> la{1.0}, lb{1.0};
  la.insert(la.end(), dec_a.lambdas.begin(), dec_a.lambdas.end());
  lb.insert(lb.end(), dec_b.lambdas.begin(), dec_b.lambdas.end());
  std::vector<double> out;
  out.reserve(la.size() * lb.size() - 1);
  for (std::size_t i = 0; i < la.size(); ++i)
    for (std::size_t k = 0; k < lb.size(); ++k) {
      if (i == 0 && k == 0) continue;
      out.push_back(la[i] * lb[k]);
    }
  std::sort(out.begin(), out.end(), std::greater<double>());
  return out;
}

bool is_conforming(const JointPmf& j, double tol) {
  if (j.rows() != j.cols()) return false;
  const std::size_t m = j.rows();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = i + 1; k < m; ++k)
      if (std::abs(j(i, k) - j(k, i)) > tol) return false;
  Matrix sym(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k) sym(i, k) = 0.5 * (j(i, k) + j(k, i));
  linalg::SymmetricEigen eig = linalg::jacobi_eigen(sym);
  return eig.values.back() >= -tol;
}

Channel flatten_to_max(const JointPmf& j, const PicDecomposition& dec) {
  require(is_conforming(j), ErrorKind::NotConforming,
          "flatten_to_max needs a conforming joint");
  const std::size_t q = j.rows();
  const double sigma1 = dec.d > 0 ? std::sqrt(dec.lambdas[0]) : 0.0;
  Matrix w(q, q);
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t k = 0; k < q; ++k)
      w(i, k) = (i == k ? sigma1 : 0.0) + (1.0 - sigma1) * j.p_x()[k];
  return Channel(std::move(w));
}

JointPmf compose_markov(const JointPmf& j_xy, const Channel& ch_yz) {
  require(ch_yz.rows() == j_xy.cols(), ErrorKind::DimensionMismatch,
          "channel input alphabet differs from |Y|");
  Matrix pxz(j_xy.rows(), ch_yz.cols());
  for (std::size_t i = 0; i < j_xy.rows(); ++i)
    for (std::size_t jx = 0; jx < j_xy.cols(); ++jx) {
      const double pij = j_xy(i, jx);
      if (pij == 0.0) continue;
      for (std::size_t k = 0; k < ch_yz.cols(); ++k) pxz(i, k) += pij * ch_yz(jx, k);
    }
  std::vector<double> col_mass(ch_yz.cols(), 0.0);
  for (std::size_t i = 0; i < pxz.rows(); ++i)
    for (std::size_t k = 0; k < pxz.cols(); ++k) col_mass[k] += pxz(i, k);
  std::size_t kept = 0;
  for (double cm : col_mass) kept += cm > 0.0;
  if (kept == pxz.cols()) return JointPmf(std::move(pxz));
  Matrix restricted(pxz.rows(), kept);
  std::size_t out = 0;
  for (std::size_t k = 0; k < pxz.cols(); ++k) {
    if (col_mass[k] <= 0.0) continue;
    for (std::size_t i = 0; i < pxz.rows(); ++i) restricted(i, out) = pxz(i, k);
    ++out;
  }
  return JointPmf(std::move(restricted));
}

DpiReport dpi_check(const JointPmf& j_xy, const Channel& ch_yz) {
  JointPmf j_xz = compose_markov(j_xy, ch_yz);

  Matrix pyz(j_xy.cols(), ch_yz.cols());
  for (std::size_t jx = 0; jx < j_xy.cols(); ++jx)
    for (std::size_t k = 0; k < ch_yz.cols(); ++k)
      pyz(jx, k) = j_xy.p_y()[jx] * ch_yz(jx, k);
  std::vector<double> col_mass(ch_yz.cols(), 0.0);
  for (std::size_t jx = 0; jx < pyz.rows(); ++jx)
    for (std::size_t k = 0; k < pyz.cols(); ++k) col_mass[k] += pyz(jx, k);
  std::size_t kept = 0;
  for (double cm : col_mass) kept += cm > 0.0;
  Matrix pyz_r(pyz.rows(), kept);
  std::size_t out = 0;
  for (std::size_t k = 0; k < pyz.cols(); ++k) {
    if (col_mass[k] <= 0.0) continue;
    for (std::size_t jx = 0; jx < pyz.rows(); ++jx) pyz_r(jx, out) = pyz(jx, k);
    ++out;
  }

  DpiReport rep;
  PicDecomposition dec_xz = decompose(j_xz);
  PicDecomposition dec_xy = decompose(j_xy);
  PicDecomposition dec_yz = decompose(JointPmf(std::move(pyz_r)));
  rep.lambda1_yz = dec_yz.d > 0 ? dec_yz.lambdas[0] : 0.0;
  rep.lhs = dec_xz.lambdas;
  rep.rhs.resize(dec_xy.lambdas.size());
  for (std::size_t k = 0; k < dec_xy.lambdas.size(); ++k)
    rep.rhs[k] = rep.lambda1_yz * dec_xy.lambdas[k];
  rep.pass = true;
  const std::size_t shared = std::min(rep.lhs.size(), rep.rhs.size());
  for (std::size_t k = 0; k < shared; ++k) {
    if (rep.lhs[k] > rep.rhs[k] + 1e-8) {
      rep.pass = false;
      break;
    }
  }
  // Components of (X,Z) past the rank of (X,Y) must themselves vanish.
  for (std::size_t k = shared; k < rep.lhs.size() && rep.pass; ++k)
    if (rep.lhs[k] > 1e-8) rep.pass = false;
  return rep;
}

}  // namespace piclab::pic
