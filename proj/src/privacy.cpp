#include "piclab/privacy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "piclab/errors.hpp"

namespace piclab::privacy {

using dist::Channel;
using dist::JointPmf;
using linalg::Matrix;

namespace {

constexpr double kNullSigma = 1e-9;        // singular value certifying delta = 0
constexpr double kBorderlineSigma = 1e-6;  // above this the instance is cleanly positive

Matrix q_matrix(const JointPmf& j) {
  Matrix q(j.rows(), j.cols());
  for (std::size_t s = 0; s < j.rows(); ++s)
    for (std::size_t x = 0; x < j.cols(); ++x)
      q(s, x) = j(s, x) / std::sqrt(j.p_x()[s] * j.p_y()[x]);
  return q;
}

// Orthonormal X-side directions of Q paired with their directly computed
// residuals ||Q v||, sorted by residual ascending. Right-singular vectors
// cover min(|S|,|X|) directions; when |X| > |S| the basis is completed
// deterministically, which is exactly where the dimension-forced null space
// lives.
std::vector<std::pair<double, std::vector<double>>> x_directions(const JointPmf& j) {
  const Matrix q = q_matrix(j);
  const std::size_t nx = j.cols();
  linalg::Svd svd = linalg::jacobi_svd(q);
  Matrix basis(nx, nx);
  for (std::size_t k = 0; k < svd.v.cols(); ++k)
    for (std::size_t i = 0; i < nx; ++i) basis(i, k) = svd.v(i, k);
  for (std::size_t k = svd.v.cols(); k < nx; ++k) {
    // Deterministic Gram-Schmidt completion: best standard-basis residual.
    std::vector<double> best;
    double best_norm = 0.0;
    for (std::size_t cand = 0; cand < nx; ++cand) {
      std::vector<double> w(nx, 0.0);
      w[cand] = 1.0;
      for (std::size_t c = 0; c < k; ++c) {
        double dot = 0.0;
        for (std::size_t i = 0; i < nx; ++i) dot += w[i] * basis(i, c);
        for (std::size_t i = 0; i < nx; ++i) w[i] -= dot * basis(i, c);
      }
      const double norm = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
      if (norm > best_norm) {
        best_norm = norm;
        best = std::move(w);
      }
    }
    require(best_norm >= 1e-8, ErrorKind::NumericalFailure, "basis completion failed");
    for (std::size_t i = 0; i < nx; ++i) basis(i, k) = best[i] / best_norm;
  }
  std::vector<std::pair<double, std::vector<double>>> dirs;
  dirs.reserve(nx);
  for (std::size_t k = 0; k < nx; ++k) {
    std::vector<double> v(nx);
    for (std::size_t i = 0; i < nx; ++i) v[i] = basis(i, k);
    double res2 = 0.0;
    for (std::size_t s = 0; s < q.rows(); ++s) {
      double row = 0.0;
      for (std::size_t i = 0; i < nx; ++i) row += q(s, i) * v[i];
      res2 += row * row;
    }
    dirs.emplace_back(std::sqrt(res2), std::move(v));
  }
  std::stable_sort(dirs.begin(), dirs.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  return dirs;
}

Matrix null_space(const JointPmf& j, double sigma_tol, double* sigma_min = nullptr) {
  const auto dirs = x_directions(j);
  const std::size_t nx = j.cols();
  if (sigma_min) *sigma_min = dirs.front().first;
  std::size_t dim = 0;
  for (const auto& [sigma, v] : dirs) dim += sigma < sigma_tol;
  Matrix basis(nx, dim);
  for (std::size_t k = 0; k < dim; ++k)
    for (std::size_t i = 0; i < nx; ++i) basis(i, k) = dirs[k].second[i];
  return basis;
}

std::vector<double> conditional_expectation_given_s(const JointPmf& j,
                                                    const std::vector<double>& f) {
  std::vector<double> e(j.rows(), 0.0);
  for (std::size_t s = 0; s < j.rows(); ++s) {
    for (std::size_t x = 0; x < j.cols(); ++x) e[s] += j(s, x) * f[x];
    e[s] /= j.p_x()[s];
  }
  return e;
}

double norm_under(const std::vector<double>& weights, const std::vector<double>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += weights[i] * v[i] * v[i];
  return std::sqrt(s);
}

double tstar_objective(const std::vector<double>& p_x, const std::vector<double>& f) {
  double max_abs = 0.0;
  for (double v : f) max_abs = std::max(max_abs, std::abs(v));
  if (max_abs <= 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t x = 0; x < p_x.size(); ++x)
    s += p_x[x] * dist::binary_entropy(0.5 + f[x] / (2.0 * max_abs), dist::kBits);
  return 1.0 - s;
}

}  // namespace

double delta_coefficient(const JointPmf& j_sx) {
  if (j_sx.cols() > j_sx.rows()) return 0.0;
  pic::PicDecomposition dec = pic::decompose(j_sx);
  if (dec.d == 0) return 1.0;  // both alphabets singleton
  return dec.lambdas.back();
}

RegionCurves funnel_region_bounds(const JointPmf& j_sx, const std::vector<double>& t_grid) {
  const double h_x = dist::entropy(j_sx.p_y(), dist::kBits);
  const double i_sx = dist::mutual_information(j_sx, dist::kBits);
  const double h_x_given_s = std::max(h_x - i_sx, 0.0);
  RegionCurves curves;
  curves.t = t_grid;
  curves.lower.reserve(t_grid.size());
  curves.upper.reserve(t_grid.size());
  for (double t : t_grid) {
    require(t >= -1e-12 && t <= h_x + 1e-9, ErrorKind::TOutOfRange,
            "funnel threshold outside [0, H(X)]");
    curves.lower.push_back(std::max(t - h_x_given_s, 0.0));
    curves.upper.push_back(h_x > 0.0 ? t * i_sx / h_x : 0.0);
  }
  return curves;
}

double vstar_estimate(const JointPmf& j_sx, std::size_t iters, std::uint64_t seed) {
  const std::size_t nx = j_sx.cols();
  const std::vector<double>& px = j_sx.p_y();  // marginal of X (columns)
  const std::vector<double>& ps = j_sx.p_x();  // marginal of S (rows)

  // q_S induced from q_X through the fixed reverse channel p_{S|X}.
  Matrix s_given_x(j_sx.rows(), nx);
  for (std::size_t s = 0; s < j_sx.rows(); ++s)
    for (std::size_t x = 0; x < nx; ++x) s_given_x(s, x) = j_sx(s, x) / px[x];

  auto induced = [&](const std::vector<double>& q_x) {
    std::vector<double> q_s(j_sx.rows(), 0.0);
    for (std::size_t s = 0; s < j_sx.rows(); ++s)
      for (std::size_t x = 0; x < nx; ++x) q_s[s] += s_given_x(s, x) * q_x[x];
    return q_s;
  };
  auto ratio = [&](const std::vector<double>& q_x) {
    double l1 = 0.0;
    for (std::size_t x = 0; x < nx; ++x) l1 += std::abs(q_x[x] - px[x]);
    if (l1 < 1e-6) return std::numeric_limits<double>::infinity();  // trust-region floor
    const double den = dist::kl_divergence(q_x, px, dist::kNats);
    if (den <= 0.0) return std::numeric_limits<double>::infinity();
    return std::max(dist::kl_divergence(induced(q_x), ps, dist::kNats), 0.0) / den;
  };

  double best = 1.0;  // DPI: the ratio never exceeds 1
  if (nx == 1) return 0.0;

  // Structured starts: perturb p_X along the X-side principal directions
  // (the least one approaches the delta(p_{S,X}) bound of Lemma Ineq1) and
  // along certified null directions, whose induced q_S equals p_S exactly.
  pic::PicDecomposition dec = pic::decompose(j_sx);
  std::vector<std::vector<double>> starts;
  auto push_direction = [&](const std::vector<double>& f) {
    for (double scale : {1.0, -1.0}) {
      double max_abs = 0.0;
      for (double v : f) max_abs = std::max(max_abs, std::abs(v));
      if (max_abs <= 0.0) return;
      const double eps = std::min(1e-4, 0.25 / max_abs);
      std::vector<double> q(nx);
      double tot = 0.0;
      for (std::size_t x = 0; x < nx; ++x) {
        q[x] = px[x] * (1.0 + eps * scale * f[x]);
        tot += q[x];
      }
      for (double& v : q) v /= tot;
      starts.push_back(std::move(q));
    }
  };
  for (std::size_t k = 1; k <= dec.d; ++k) {
    std::vector<double> f(nx);
    for (std::size_t x = 0; x < nx; ++x) f[x] = dec.g_funcs(x, k);
    push_direction(f);
  }
  const Matrix null_basis = null_space(j_sx, kNullSigma);
  for (std::size_t k = 0; k < null_basis.cols(); ++k) {
    std::vector<double> f(nx);
    for (std::size_t x = 0; x < nx; ++x) f[x] = null_basis(x, k) / std::sqrt(px[x]);
    push_direction(f);
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  const std::size_t n_starts = std::max<std::size_t>(8, starts.size());
  for (std::size_t s = starts.size(); s < n_starts + 8; ++s) {
    std::vector<double> q(nx);
    double tot = 0.0;
    for (double& v : q) {
      v = unif(rng);
      tot += v;
    }
    for (double& v : q) v /= tot;
    starts.push_back(std::move(q));
  }

  // Multiplicative-weights descent on the ratio with a shrinking step.
  for (auto& q : starts) {
    double cur = ratio(q);
    best = std::min(best, cur);
    double step = 0.25;
    for (std::size_t it = 0; it < iters; ++it) {
      const std::vector<double> q_s = induced(q);
      const double num = dist::kl_divergence(q_s, ps, dist::kNats);
      const double den = dist::kl_divergence(q, px, dist::kNats);
      if (den <= 1e-15) break;
      std::vector<double> grad(nx, 0.0);
      for (std::size_t x = 0; x < nx; ++x) {
        double g_num = 0.0;
        for (std::size_t s2 = 0; s2 < j_sx.rows(); ++s2) {
          if (q_s[s2] > 0.0)
            g_num += s_given_x(s2, x) * (std::log(q_s[s2] / ps[s2]) + 1.0);
        }
        const double g_den = q[x] > 0.0 ? std::log(q[x] / px[x]) + 1.0 : -50.0;
        grad[x] = (g_num * den - num * g_den) / (den * den);
      }
      std::vector<double> next(nx);
      double tot = 0.0;
      for (std::size_t x = 0; x < nx; ++x) {
        const double ex = std::clamp(-step * grad[x], -30.0, 30.0);
        next[x] = std::max(q[x] * std::exp(ex), 1e-12);
        tot += next[x];
      }
      for (double& v : next) v /= tot;
      const double cand = ratio(next);
      if (cand < cur) {
        q = std::move(next);
        cur = cand;
        best = std::min(best, cur);
      } else {
        step *= 0.5;
        if (step < 1e-6) break;
      }
    }
  }
  return std::clamp(best, 0.0, 1.0);
}

std::optional<PerfectPrivacyMap> perfect_privacy_map(const JointPmf& j_sx, double tol) {
  const double delta = delta_coefficient(j_sx);
  if (delta > tol) return std::nullopt;

  const std::size_t nx = j_sx.cols();
  const std::vector<double> v = x_directions(j_sx).front().second;
  const std::vector<double>& px = j_sx.p_y();
  std::vector<double> f(nx);
  for (std::size_t i = 0; i < nx; ++i) f[i] = v[i] / std::sqrt(px[i]);

  const double residual = norm_under(j_sx.p_x(), conditional_expectation_given_s(j_sx, f));
  require(residual <= 10.0 * tol, ErrorKind::NumericalFailure,
          "null-vector certificate failed recheck of ||E[f|S]||");

  double max_abs = 0.0;
  for (double x : f) max_abs = std::max(max_abs, std::abs(x));
  const double eps = 1.0 / (2.0 * max_abs);

  Matrix w(nx, 2);
  for (std::size_t x = 0; x < nx; ++x) {
    w(x, 0) = std::max(0.5 - eps * f[x], 0.0);
    w(x, 1) = std::max(0.5 + eps * f[x], 0.0);
  }
  double t0 = 1.0;
  for (std::size_t x = 0; x < nx; ++x)
    t0 -= px[x] * dist::binary_entropy(0.5 + eps * f[x], dist::kBits);
  return PerfectPrivacyMap{Channel(std::move(w)), std::move(f), t0};
}

double t_star_lower(const JointPmf& j_sx, std::size_t f_candidates) {
  double sigma_min = 0.0;
  const Matrix basis = null_space(j_sx, kNullSigma, &sigma_min);
  if (basis.cols() == 0) return 0.0;  // delta > 0: only the trivial bound
  const std::vector<double>& px = j_sx.p_y();
  const std::size_t nx = j_sx.cols();
  const std::size_t dim = basis.cols();

  auto f_of = [&](const std::vector<double>& w) {
    std::vector<double> f(nx, 0.0);
    for (std::size_t k = 0; k < dim; ++k)
      for (std::size_t x = 0; x < nx; ++x) f[x] += w[k] * basis(x, k) / std::sqrt(px[x]);
    return f;
  };

  if (dim == 1) return tstar_objective(px, f_of({1.0}));

  std::mt19937_64 rng(0x5EED);
  std::normal_distribution<double> gauss;
  double best = 0.0;
  const std::size_t starts = std::max<std::size_t>(f_candidates, 2 * dim);
  for (std::size_t s = 0; s < starts; ++s) {
    std::vector<double> w(dim, 0.0);
    if (s < dim)
      w[s] = 1.0;  // axis starts first, then random ones
    else
      for (double& v : w) v = gauss(rng);
    double norm = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
    if (norm <= 0.0) continue;
    for (double& v : w) v /= norm;

    double cur = tstar_objective(px, f_of(w));
    double step = 0.5;
    while (step > 1e-7) {
      bool improved = false;
      for (std::size_t k = 0; k < dim; ++k) {
        for (double dir : {1.0, -1.0}) {
          std::vector<double> cand = w;
          cand[k] += dir * step;
          double cn = std::sqrt(std::inner_product(cand.begin(), cand.end(), cand.begin(), 0.0));
          for (double& v : cand) v /= cn;
          const double val = tstar_objective(px, f_of(cand));
          if (val > cur + 1e-15) {
            w = std::move(cand);
            cur = val;
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    best = std::max(best, cur);
  }
  return best;
}

double delta_tensor(double delta1, std::size_t n) {
  require(delta1 >= 0.0 && delta1 <= 1.0, ErrorKind::DomainError, "delta outside [0,1]");
  require(n >= 1, ErrorKind::DomainError, "tensor power must be positive");
  return std::pow(delta1, static_cast<double>(n));
}

namespace {

struct FunnelObjective {
  const JointPmf& j;          // (S, X)
  const std::vector<double>& px;
  Matrix s_joint;             // p_{S,X} copy for speed

  explicit FunnelObjective(const JointPmf& joint)
      : j(joint), px(joint.p_y()), s_joint(joint.table()) {}

  // Returns (I(S;Y), I(X;Y)) for a channel W on X.
  std::pair<double, double> informations(const Matrix& w) const {
    const std::size_t nx = w.rows(), ny = w.cols(), ns = j.rows();
    std::vector<double> p_y(ny, 0.0);
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y) p_y[y] += px[x] * w(x, y);
    double i_xy = 0.0;
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y) {
        const double v = px[x] * w(x, y);
        if (v > 0.0 && p_y[y] > 0.0) i_xy += v * std::log(w(x, y) / p_y[y]);
      }
    double i_sy = 0.0;
    for (std::size_t s = 0; s < ns; ++s) {
      for (std::size_t y = 0; y < ny; ++y) {
        double q = 0.0;
        for (std::size_t x = 0; x < nx; ++x) q += s_joint(s, x) * w(x, y);
        if (q > 0.0 && p_y[y] > 0.0) i_sy += q * std::log(q / (j.p_x()[s] * p_y[y]));
      }
    }
    const double ln2 = std::log(2.0);
    return {std::max(i_sy, 0.0) / ln2, std::max(i_xy, 0.0) / ln2};
  }
};

Matrix blend(const Matrix& a, const Matrix& b, double alpha) {
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.data().size(); ++i)
    out.data()[i] = (1.0 - alpha) * a.data()[i] + alpha * b.data()[i];
  return out;
}

}  // namespace

double funnel_estimate(const JointPmf& j_sx, double t, std::size_t restarts,
                       std::uint64_t seed) {
  const std::size_t nx = j_sx.cols();
  const std::size_t ny = nx + 1;
  const std::vector<double>& px = j_sx.p_y();
  const double h_x = dist::entropy(px, dist::kBits);
  require(t >= -1e-12 && t <= h_x + 1e-9, ErrorKind::TOutOfRange,
          "funnel threshold outside [0, H(X)]");
  t = std::clamp(t, 0.0, h_x);

  FunnelObjective obj(j_sx);

  Matrix identity_like(nx, ny);
  for (std::size_t x = 0; x < nx; ++x) identity_like(x, x) = 1.0;
  Matrix constant(nx, ny);
  for (std::size_t x = 0; x < nx; ++x) constant(x, ny - 1) = 1.0;

  // Candidate channels collected from warm starts and optimized restarts are
  // made feasible (blend toward a lossless channel) and then shrunk back to
  // the constraint boundary (blend toward a constant channel), exploiting
  // that the funnel value only grows with t.
  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](Matrix w) {
    auto [i_sy, i_xy] = obj.informations(w);
    if (i_xy < t) {
      double lo = 0.0, hi = 1.0;  // blend toward identity_like until feasible
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (obj.informations(blend(w, identity_like, mid)).second >= t)
          hi = mid;
        else
          lo = mid;
      }
      w = blend(w, identity_like, hi);
      std::tie(i_sy, i_xy) = obj.informations(w);
      if (i_xy < t) return;  // nearly exhausted; identity itself handles t = H(X)
    }
    best = std::min(best, i_sy);
    if (i_xy > t) {
      double lo = 0.0, hi = 1.0;  // shrink toward constant until I(X;Y) = t
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (obj.informations(blend(w, constant, mid)).second >= t)
          lo = mid;
        else
          hi = mid;
      }
      best = std::min(best, obj.informations(blend(w, constant, lo)).first);
    }
  };

  consider(identity_like);
  consider(constant);
  try {
    if (auto pp = perfect_privacy_map(j_sx, kNullSigma)) {
      Matrix w(nx, ny);
      for (std::size_t x = 0; x < nx; ++x) {
        w(x, 0) = pp->channel(x, 0);
        w(x, 1) = pp->channel(x, 1);
      }
      consider(std::move(w));
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NumericalFailure) throw;
  }

  for (std::size_t r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(seed + 0x9E3779B97F4A7C15ull * (r + 1));
    std::uniform_real_distribution<double> unif(0.05, 1.0);
    Matrix w(nx, ny);
    for (std::size_t x = 0; x < nx; ++x) {
      double tot = 0.0;
      for (std::size_t y = 0; y < ny; ++y) {
        w(x, y) = unif(rng);
        tot += w(x, y);
      }
      for (std::size_t y = 0; y < ny; ++y) w(x, y) /= tot;
    }

    double mu = 1.0;
    for (int round = 0; round < 5; ++round, mu *= 10.0) {
      for (int it = 0; it < 120; ++it) {
        const std::size_t ns = j_sx.rows();
        std::vector<double> p_y(ny, 0.0);
        for (std::size_t x = 0; x < nx; ++x)
          for (std::size_t y = 0; y < ny; ++y) p_y[y] += px[x] * w(x, y);
        Matrix q_sy(ns, ny);
        for (std::size_t s = 0; s < ns; ++s)
          for (std::size_t y = 0; y < ny; ++y)
            for (std::size_t x = 0; x < nx; ++x) q_sy(s, y) += j_sx(s, x) * w(x, y);
        const double i_xy = obj.informations(w).second;
        const bool violated = i_xy < t;

        for (std::size_t x = 0; x < nx; ++x) {
          double tot = 0.0;
          for (std::size_t y = 0; y < ny; ++y) {
            double g = 0.0;
            for (std::size_t s = 0; s < ns; ++s) {
              const double cond = j_sx(s, x) / px[x];
              if (q_sy(s, y) > 0.0 && p_y[y] > 0.0)
                g += cond * std::log(q_sy(s, y) / (j_sx.p_x()[s] * p_y[y]));
            }
            if (violated && w(x, y) > 0.0 && p_y[y] > 0.0)
              g -= mu * std::log(w(x, y) / p_y[y]);
            const double ex = std::clamp(-0.3 * g, -30.0, 30.0);
            w(x, y) = std::max(w(x, y) * std::exp(ex), 1e-12);
            tot += w(x, y);
          }
          for (std::size_t y = 0; y < ny; ++y) w(x, y) /= tot;
        }
      }
    }
    consider(std::move(w));
  }
  return best;
}

PrivacyAnalysis analyze(const JointPmf& j_sx, double tol, std::size_t t_points,
                        std::uint64_t seed) {
  PrivacyAnalysis out;
  out.delta = delta_coefficient(j_sx);
  double sigma_min = 0.0;
  null_space(j_sx, kNullSigma, &sigma_min);
  out.borderline = sigma_min >= kNullSigma && sigma_min <= kBorderlineSigma;
  out.vstar_upper = vstar_estimate(j_sx, 400, seed);
  const double h_x = dist::entropy(j_sx.p_y(), dist::kBits);
  std::vector<double> grid(t_points);
  for (std::size_t i = 0; i < t_points; ++i)
    grid[i] = t_points > 1 ? h_x * static_cast<double>(i) / (t_points - 1) : 0.0;
  out.region = funnel_region_bounds(j_sx, grid);
  try {
    out.constructed_map = perfect_privacy_map(j_sx, tol);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NumericalFailure) throw;
    out.constructed_map.reset();  // borderline certificate failed recheck
  }
  out.perfect_privacy_feasible = out.constructed_map.has_value();
  out.t_star_lower = t_star_lower(j_sx, 32);
  return out;
}

}  // namespace piclab::privacy
