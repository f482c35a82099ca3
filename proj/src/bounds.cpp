#include "piclab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "piclab/errors.hpp"
#include "piclab/parallel.hpp"

namespace piclab::bounds {

using dist::JointPmf;

const char* bound_kind_name(BoundKind kind) {
  switch (kind) {
    case BoundKind::PicFano: return "pic_fano";
    case BoundKind::ChiSqUniform: return "chi2_uniform";
    case BoundKind::MaxCorr: return "maxcorr";
    case BoundKind::FanoMI: return "fano_mi";
    case BoundKind::Witsenhausen: return "witsenhausen";
  }
  return "unknown";
}

namespace {

bool sorted_descending(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1] + 1e-15) return false;
  return true;
}

std::vector<double> padded_lambdas(const std::vector<double>& lambdas, std::size_t m) {
  require(sorted_descending(lambdas), ErrorKind::UnsortedInput, "lambdas must be sorted descending");
  require(lambdas.size() <= m - 1, ErrorKind::DimensionMismatch, "more PICs than m-1");
  for (double l : lambdas)
    require(l >= -1e-12 && l <= 1.0 + 1e-12, ErrorKind::DomainError, "PIC outside [0,1]");
  std::vector<double> out(m - 1, 0.0);
  for (std::size_t i = 0; i < lambdas.size(); ++i) out[i] = std::clamp(lambdas[i], 0.0, 1.0);
  return out;
}

double sum_squares(const std::vector<double>& p) {
  return std::inner_product(p.begin(), p.end(), p.begin(), 0.0);
}

ErrorBound clamped(BoundKind kind, double raw) {
  ErrorBound b;
  b.kind = kind;
  b.vacuous = raw < 0.0;
  b.value = std::max(0.0, raw);
  return b;
}

}  // namespace

double map_error(const JointPmf& j) {
  double correct = 0.0;
  for (std::size_t y = 0; y < j.cols(); ++y) {
    double best = 0.0;
    for (std::size_t x = 0; x < j.rows(); ++x) best = std::max(best, j(x, y));
    correct += best;
  }
  return 1.0 - correct;
}

double advantage(const JointPmf& j) {
  const double pmax = *std::max_element(j.p_x().begin(), j.p_x().end());
  return std::max(0.0, 1.0 - map_error(j) - pmax);
}

double f0(double alpha, const std::vector<double>& p_x, const std::vector<double>& lambdas) {
  require(sorted_descending(p_x), ErrorKind::UnsortedInput, "p_x must be sorted descending");
  const std::size_t m = p_x.size();
  require(m >= 1, ErrorKind::EmptyInput, "empty marginal");
  const std::vector<double> lam = padded_lambdas(lambdas, m);
  const std::size_t d = m - 1;
  if (d == 0) return 0.0;

  auto c = [&](std::size_t i) {  // 1-based, c_{d+1} = 0
    if (i > d) return 0.0;
    return std::max(lam[i - 1] - alpha, 0.0);
  };
  double s = 0.0;
  for (std::size_t i = 2; i <= d + 1; ++i)
    s += p_x[i - 1] * (lam[i - 2] + c(i) - c(i - 1));
  s += p_x[0] * (c(1) + alpha);
  s -= alpha * sum_squares(p_x);
  return s;
}

F0Star f0_star(const std::vector<double>& p_x, const std::vector<double>& lambdas) {
  require(sorted_descending(p_x), ErrorKind::UnsortedInput, "p_x must be sorted descending");
  const std::size_t m = p_x.size();
  std::vector<double> lam = padded_lambdas(lambdas, m);
  lam.push_back(0.0);  // lambda_m = 0
  const double pp = sum_squares(p_x);

  std::size_t k_star = 1;
  for (std::size_t k = 1; k <= m; ++k)
    if (p_x[k - 1] >= pp) k_star = k;

  double value = 0.0;
  for (std::size_t i = 1; i <= k_star; ++i) value += lam[i - 1] * p_x[i - 1];
  for (std::size_t i = k_star + 1; i <= m; ++i) value += lam[i - 2] * p_x[i - 1];
  value -= lam[k_star - 1] * pp;
  return F0Star{value, k_star};
}

namespace {

// Minimizes a function convex on each [lo,hi] segment by golden section.
double golden_min(double lo, double hi, const auto& fn) {
  static const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = fn(c), fd = fn(d);
  while (b - a > 1e-10) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fn(d);
    }
  }
  return std::min({fn(a), fn(b), fc, fd});
}

}  // namespace

ErrorBound pic_fano_bound(std::vector<double> p_x, std::vector<double> lambdas) {
  require(!p_x.empty(), ErrorKind::EmptyInput, "empty marginal");
  std::vector<std::size_t> perm(p_x.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  const bool was_sorted = sorted_descending(p_x);
  if (!was_sorted) {
    std::stable_sort(perm.begin(), perm.end(),
                     [&](std::size_t a, std::size_t b) { return p_x[a] > p_x[b]; });
    std::vector<double> sorted(p_x.size());
    for (std::size_t i = 0; i < perm.size(); ++i) sorted[i] = p_x[perm[i]];
    p_x = std::move(sorted);
  }
  std::sort(lambdas.begin(), lambdas.end(), std::greater<double>());

  const std::size_t m = p_x.size();
  const F0Star fs = f0_star(p_x, lambdas);
  const double beta_max = m >= 2 ? p_x[1] : 0.0;

  auto objective = [&](double beta) {
    double tail = 0.0;
    for (double p : p_x) {
      const double t = std::max(p - beta, 0.0);
      tail += t * t;
    }
    return beta + std::sqrt(std::max(fs.value + tail, 0.0));
  };

  // The tail term changes expression at each atom of p_x; the objective is
  // convex between consecutive breakpoints, so scan segment by segment.
  std::vector<double> knots{0.0, beta_max};
  for (double p : p_x)
    if (p > 0.0 && p < beta_max) knots.push_back(p);
  std::sort(knots.begin(), knots.end());
  double u = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < knots.size(); ++i)
    u = std::min(u, golden_min(knots[i], knots[i + 1], objective));
  for (double k : knots) u = std::min(u, objective(k));

  ErrorBound b = clamped(BoundKind::PicFano, 1.0 - u);
  b.params.push_back({"f0_star", fs.value});
  b.params.push_back({"k_star", static_cast<double>(fs.k_star)});
  b.params.push_back({"u", u});
  if (!was_sorted)
    for (std::size_t i = 0; i < perm.size(); ++i)
      b.params.push_back({"perm_" + std::to_string(i), static_cast<double>(perm[i])});
  return b;
}

ErrorBound chi2_uniform_bound(std::size_t m, double chi2) {
  require(chi2 >= 0.0, ErrorKind::DomainError, "chi2 must be nonnegative");
  require(m >= 1, ErrorKind::EmptyInput, "empty alphabet");
  const double md = static_cast<double>(m);
  ErrorBound b = clamped(BoundKind::ChiSqUniform,
                         1.0 - 1.0 / md - std::sqrt((md - 1.0) * chi2) / md);
  b.params.push_back({"m", md});
  b.params.push_back({"chi2", chi2});
  return b;
}

ErrorBound maxcorr_bound(std::vector<double> p_x, double rho) {
  require(rho >= 0.0 && rho <= 1.0, ErrorKind::DomainError, "rho outside [0,1]");
  require(!p_x.empty(), ErrorKind::EmptyInput, "empty marginal");
  std::sort(p_x.begin(), p_x.end(), std::greater<double>());
  const double spread = std::sqrt(std::max(1.0 - sum_squares(p_x), 0.0));
  ErrorBound b = clamped(BoundKind::MaxCorr, 1.0 - p_x[0] - rho * spread);
  b.params.push_back({"rho", rho});
  b.params.push_back({"adv_bound", rho * spread});
  b.params.push_back({"adv_cap", rho});
  return b;
}

namespace {

// Solves h_b(d) + d log(M-1) = rhs on [0, (M-1)/M]; rhs is clamped into the
// range of the left side. The left side is flat at the right endpoint, so a
// saturated rhs short-circuits to d_max instead of fighting roundoff there.
double error_rate_root(std::size_t alphabet, double rhs, double base) {
  const double md = static_cast<double>(alphabet);
  const double log_m1 = alphabet >= 2 ? std::log(md - 1.0) / std::log(base) : 0.0;
  auto lhs = [&](double d) { return dist::binary_entropy(d, base) + d * log_m1; };
  const double d_max = (md - 1.0) / md;
  if (rhs <= 0.0) return 0.0;
  if (rhs >= lhs(d_max)) return d_max;
  double lo = 0.0, hi = d_max;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (lhs(mid) < rhs)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double fano_mi_error_rate(const std::vector<double>& p_x, double theta, double base) {
  require(p_x.size() >= 2, ErrorKind::DomainError, "error-rate function needs m >= 2");
  require(theta >= 0.0, ErrorKind::DomainError, "theta must be nonnegative");
  const double h = dist::entropy(p_x, base);
  return error_rate_root(p_x.size(), h - theta, base);
}

AggregatedPmf aggregate_gM(std::vector<double> p_x, std::size_t M) {
  const std::size_t m = p_x.size();
  require(M >= 2 && M <= m, ErrorKind::IndexOutOfRange, "aggregation order outside [2,m]");
  std::sort(p_x.begin(), p_x.end(), std::greater<double>());
  AggregatedPmf agg;
  agg.m = m;
  agg.M = M;
  agg.p_u.resize(M);
  for (std::size_t i = 0; i < m - M + 1; ++i) agg.p_u[0] += p_x[i];
  for (std::size_t k = 1; k < M; ++k) agg.p_u[k] = p_x[m - M + k];
  std::sort(agg.p_u.begin(), agg.p_u.end(), std::greater<double>());
  return agg;
}

ErrorBound pem_bound_mi(const std::vector<double>& p_x, std::size_t M, double theta,
                        double base, bool literal_min_clamp) {
  const AggregatedPmf agg = aggregate_gM(p_x, M);
  const double h_u = dist::entropy(agg.p_u, base);
  const double rhs = literal_min_clamp ? std::min(h_u - theta, 0.0)
                                       : std::max(h_u - theta, 0.0);
  ErrorBound b;
  b.kind = BoundKind::FanoMI;
  b.value = error_rate_root(M, rhs, base);
  b.params.push_back({"M", static_cast<double>(M)});
  b.params.push_back({"theta", theta});
  b.params.push_back({"H_U", h_u});
  b.params.push_back({"literal_min_clamp", literal_min_clamp ? 1.0 : 0.0});
  b.vacuous = b.value == 0.0;
  return b;
}

ErrorBound pem_bound_rho(const std::vector<double>& p_x, std::size_t M, double rho) {
  require(rho >= 0.0 && rho <= 1.0, ErrorKind::DomainError, "rho outside [0,1]");
  const AggregatedPmf agg = aggregate_gM(p_x, M);
  const double spread = std::sqrt(std::max(1.0 - sum_squares(agg.p_u), 0.0));
  ErrorBound b = clamped(BoundKind::MaxCorr, 1.0 - agg.p_u[0] - rho * spread);
  b.params.push_back({"M", static_cast<double>(M)});
  b.params.push_back({"rho", rho});
  return b;
}

double adv_m_bound(double rho, std::size_t M) {
  require(rho >= 0.0 && rho <= 1.0, ErrorKind::DomainError, "rho outside [0,1]");
  require(M >= 2, ErrorKind::IndexOutOfRange, "adv_m_bound needs M >= 2");
  return rho * std::sqrt(1.0 - 1.0 / static_cast<double>(M));
}

double pem_exact(const JointPmf& j, std::size_t M) {
  const std::size_t m = j.rows();
  require(M >= 2 && M <= m, ErrorKind::IndexOutOfRange, "function range outside [2,m]");
  require(m <= 10, ErrorKind::TooLarge, "pem_exact supports m <= 10");
  double total_d = std::pow(static_cast<double>(M), static_cast<double>(m));
  require(total_d <= 1e7, ErrorKind::TooLarge, "pem_exact map count exceeds 1e7");
  const std::size_t total = static_cast<std::size_t>(total_d);

  const unsigned workers = worker_count();
  std::vector<double> best(workers, std::numeric_limits<double>::infinity());
  const std::size_t chunk = (total + workers - 1) / workers;

  parallel_chunks(total, [&](std::size_t begin, std::size_t end) {
    const std::size_t slot = std::min<std::size_t>(begin / std::max<std::size_t>(chunk, 1),
                                                   workers - 1);
    std::vector<std::size_t> digits(m);
    std::vector<double> mass(M);
    double local = std::numeric_limits<double>::infinity();
    for (std::size_t code = begin; code < end; ++code) {
      std::size_t rem = code;
      std::size_t seen = 0;
      std::vector<bool> hit(M, false);
      for (std::size_t i = 0; i < m; ++i) {
        digits[i] = rem % M;
        rem /= M;
        if (!hit[digits[i]]) {
          hit[digits[i]] = true;
          ++seen;
        }
      }
      if (seen != M) continue;  // not surjective
      double correct = 0.0;
      for (std::size_t y = 0; y < j.cols(); ++y) {
        std::fill(mass.begin(), mass.end(), 0.0);
        for (std::size_t x = 0; x < m; ++x) mass[digits[x]] += j(x, y);
        correct += *std::max_element(mass.begin(), mass.end());
      }
      local = std::min(local, 1.0 - correct);
    }
    best[slot] = local;
  });
  return *std::min_element(best.begin(), best.end());
}

}  // namespace piclab::bounds
