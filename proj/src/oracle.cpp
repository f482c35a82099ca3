#include "piclab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "piclab/errors.hpp"

namespace piclab::oracle {

using dist::JointPmf;

const char* method_name(Method m) {
  switch (m) {
    case Method::ExhaustiveGrid: return "exhaustive_grid";
    case Method::AlternatingCE: return "alternating_ce";
    case Method::AlternatingLP: return "alternating_lp";
    case Method::ExhaustiveFunctions: return "exhaustive_functions";
    case Method::Bisection: return "bisection";
  }
  return "unknown";
}

namespace {

// Centers f under p and normalizes it to unit second moment.
bool center_and_normalize(const std::vector<double>& p, std::vector<double>& f) {
  double mean = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) mean += p[i] * f[i];
  double norm2 = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    f[i] -= mean;
    norm2 += p[i] * f[i] * f[i];
  }
  if (norm2 < 1e-24) return false;
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& v : f) v *= inv;
  return true;
}

}  // namespace

OracleResult maxcorr_by_ace(const JointPmf& j, std::size_t iters, std::uint64_t seed) {
  const std::size_t m = j.rows(), n = j.cols();
  OracleResult res;
  res.method = Method::AlternatingCE;
  if (m < 2 || n < 2) {
    res.value = 0.0;
    res.evaluations = 1;
    return res;
  }

  double best = 0.0;
  bool converged_any = false;
  for (std::size_t start = 0; start < 4; ++start) {
    std::mt19937_64 rng(seed + start * 0x9E3779B97F4A7C15ull);
    std::normal_distribution<double> gauss;
    std::vector<double> f(m);
    for (double& v : f) v = gauss(rng);
    if (!center_and_normalize(j.p_x(), f)) continue;

    double rho_prev = 0.0;
    for (std::size_t it = 0; it < iters; ++it) {
      std::vector<double> g(n, 0.0);
      for (std::size_t y = 0; y < n; ++y) {
        for (std::size_t x = 0; x < m; ++x) g[y] += j(x, y) * f[x];
        g[y] /= j.p_y()[y];
      }
      double rho2 = 0.0;  // ||E[f|Y]||_2
      for (std::size_t y = 0; y < n; ++y) rho2 += j.p_y()[y] * g[y] * g[y];
      const double rho = std::sqrt(rho2);

      std::vector<double> fn(m, 0.0);
      for (std::size_t x = 0; x < m; ++x) {
        for (std::size_t y = 0; y < n; ++y) fn[x] += j(x, y) * g[y];
        fn[x] /= j.p_x()[x];
      }
      if (!center_and_normalize(j.p_x(), fn)) {
        // The map collapsed: E[f|Y] vanishes, certifying rho = 0.
        best = std::max(best, rho);
        converged_any = true;
        break;
      }
      f = std::move(fn);
      ++res.evaluations;
      if (it > 2 && std::abs(rho - rho_prev) <= 1e-8 * std::max(rho, 1e-12)) {
        best = std::max(best, rho);
        converged_any = true;
        break;
      }
      rho_prev = rho;
      if (it + 1 == iters) best = std::max(best, rho);
    }
  }
  if (!converged_any && best < 1e-9)
    fail(ErrorKind::NonConvergence, "alternating conditional expectations did not settle");
  res.value = best;
  return res;
}

OracleResult pe_exhaustive(const JointPmf& j) {
  require(j.rows() * j.cols() <= 1000000, ErrorKind::TooLarge, "table too large");
  OracleResult res;
  res.method = Method::ExhaustiveFunctions;
  double correct = 0.0;
  for (std::size_t y = 0; y < j.cols(); ++y) {
    // Every deterministic estimator picks independently per column, so trying
    // each candidate estimate explicitly is an exact enumeration.
    double best_col = 0.0;
    for (std::size_t guess = 0; guess < j.rows(); ++guess) {
      const double mass = j(guess, y);
      if (mass > best_col) best_col = mass;
      ++res.evaluations;
    }
    correct += best_col;
  }
  res.value = 1.0 - correct;
  return res;
}

namespace {

// Maximizes c^T v subject to 0 <= v <= 1 and weights^T v = mass by greedy
// fractional knapsack on the ratio c_i / weights_i.
std::vector<double> knapsack_max(const std::vector<double>& c,
                                 const std::vector<double>& weights, double mass) {
  const std::size_t n = c.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return c[a] * weights[b] > c[b] * weights[a];
  });
  std::vector<double> v(n, 0.0);
  double left = mass;
  for (std::size_t idx : order) {
    if (left <= 0.0) break;
    const double take = std::min(1.0, left / weights[idx]);
    v[idx] = take;
    left -= take * weights[idx];
  }
  return v;
}

}  // namespace

OracleResult z_bilinear_max(const JointPmf& j, double a, double b, std::size_t iters,
                            std::uint64_t seed) {
  require(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0, ErrorKind::InfeasibleMass,
          "target masses must lie in [0,1]");
  const std::size_t m = j.rows(), n = j.cols();
  OracleResult res;
  res.method = Method::AlternatingLP;

  double best = 0.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t start = 0; start < 6; ++start) {
    std::vector<double> y(n);
    if (start == 0) {
      std::fill(y.begin(), y.end(), b);
    } else {
      for (double& v : y) v = unif(rng);
      double mass = 0.0;
      for (std::size_t k = 0; k < n; ++k) mass += j.p_y()[k] * y[k];
      if (mass > b) {
        for (double& v : y) v *= b / mass;
      } else if (mass < b) {
        for (std::size_t k = 0; k < n; ++k)
          y[k] = 1.0 - (1.0 - y[k]) * (1.0 - b) / (1.0 - mass);
      }
    }

    double z_prev = -1.0;
    for (std::size_t it = 0; it < iters; ++it) {
      std::vector<double> py(m, 0.0);  // P y
      for (std::size_t x = 0; x < m; ++x)
        for (std::size_t k = 0; k < n; ++k) py[x] += j(x, k) * y[k];
      std::vector<double> xv = knapsack_max(py, j.p_x(), a);

      std::vector<double> ptx(n, 0.0);  // P^T x
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t x = 0; x < m; ++x) ptx[k] += j(x, k) * xv[x];
      y = knapsack_max(ptx, j.p_y(), b);

      double z = 0.0;
      for (std::size_t k = 0; k < n; ++k) z += ptx[k] * y[k];
      ++res.evaluations;
      if (std::abs(z - z_prev) <= 1e-12) {
        best = std::max(best, z);
        break;
      }
      z_prev = z;
      if (it + 1 == iters) best = std::max(best, z);
    }
  }
  res.value = best;
  return res;
}

OracleResult variational_pic(const JointPmf& j, std::size_t k, std::size_t samples,
                             std::uint64_t seed) {
  const std::size_t m = j.rows(), n = j.cols();
  require(k >= 1 && k < std::min(m, n), ErrorKind::IndexOutOfRange,
          "PIC order outside [1, min(m,n)-1]");
  OracleResult res;
  res.method = Method::ExhaustiveGrid;

  // Found principal directions, orthogonalized under the p_X inner product.
  std::vector<std::vector<double>> found;
  auto project_out = [&](std::vector<double>& f) {
    for (const auto& g : found) {
      double dot = 0.0;
      for (std::size_t x = 0; x < m; ++x) dot += j.p_x()[x] * f[x] * g[x];
      for (std::size_t x = 0; x < m; ++x) f[x] -= dot * g[x];
    }
  };

  double lambda_k = 0.0;
  for (std::size_t level = 1; level <= k; ++level) {
    double best = -1.0;
    std::vector<double> best_f;
    const std::size_t starts = std::max<std::size_t>(4, samples);
    for (std::size_t s = 0; s < starts; ++s) {
      std::mt19937_64 rng(seed + level * 1000003ull + s * 0x9E3779B97F4A7C15ull);
      std::normal_distribution<double> gauss;
      std::vector<double> f(m);
      for (double& v : f) v = gauss(rng);
      project_out(f);
      if (!center_and_normalize(j.p_x(), f)) continue;

      double val = 0.0;
      for (std::size_t it = 0; it < 500; ++it) {
        // One step of the composed conditional-expectation map, then
        // re-projection: gradient ascent on ||E[f|Y]||^2 over the sphere.
        std::vector<double> g(n, 0.0);
        for (std::size_t y = 0; y < n; ++y) {
          for (std::size_t x = 0; x < m; ++x) g[y] += j(x, y) * f[x];
          g[y] /= j.p_y()[y];
        }
        double norm2 = 0.0;
        for (std::size_t y = 0; y < n; ++y) norm2 += j.p_y()[y] * g[y] * g[y];

        std::vector<double> fn(m, 0.0);
        for (std::size_t x = 0; x < m; ++x) {
          for (std::size_t y = 0; y < n; ++y) fn[x] += j(x, y) * g[y];
          fn[x] /= j.p_x()[x];
        }
        project_out(fn);
        if (!center_and_normalize(j.p_x(), fn)) break;
        f = std::move(fn);
        ++res.evaluations;
        if (std::abs(norm2 - val) <= 1e-10) {
          val = norm2;
          break;
        }
        val = norm2;
      }
      if (val > best) {
        best = val;
        best_f = f;
      }
    }
    if (best < 0.0) fail(ErrorKind::NonConvergence, "no usable start found");
    lambda_k = std::max(best, 0.0);
    found.push_back(best_f);
  }
  res.value = lambda_k;
  return res;
}

OracleResult one_bit_exhaustive(const JointPmf& j, OneBitMetric metric) {
  const std::size_t m = j.rows();
  require(m <= 20, ErrorKind::TooLarge, "one_bit_exhaustive supports up to 2^20 functions");
  OracleResult res;
  res.method = Method::ExhaustiveFunctions;
  const std::size_t total = std::size_t{1} << m;

  double best = metric == OneBitMetric::MI ? 0.0 : 1.0;
  for (std::size_t mask = 1; mask + 1 < total; ++mask) {  // skip constants
    std::vector<double> row0(j.cols(), 0.0), row1(j.cols(), 0.0);
    for (std::size_t x = 0; x < m; ++x) {
      for (std::size_t y = 0; y < j.cols(); ++y) {
        if ((mask >> x) & 1u)
          row1[y] += j(x, y);
        else
          row0[y] += j(x, y);
      }
    }
    ++res.evaluations;
    if (metric == OneBitMetric::MI) {
      linalg::Matrix t(2, j.cols());
      for (std::size_t y = 0; y < j.cols(); ++y) {
        t(0, y) = row0[y];
        t(1, y) = row1[y];
      }
      best = std::max(best, dist::mutual_information_table(t, dist::kBits));
    } else {
      double correct = 0.0;
      for (std::size_t y = 0; y < j.cols(); ++y) correct += std::max(row0[y], row1[y]);
      best = std::min(best, 1.0 - correct);
    }
  }
  res.value = best;
  return res;
}

}  // namespace piclab::oracle
