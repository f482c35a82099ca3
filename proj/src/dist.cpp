#include "piclab/dist.hpp"

#include <cmath>
#include <map>
#include <numeric>

#include "piclab/errors.hpp"

namespace piclab::dist {

namespace {

double checked_total(const linalg::Matrix& p, const char* what) {
  double total = 0.0;
  for (double v : p.data()) {
    require(v >= 0.0, ErrorKind::InvalidPmf, std::string(what) + " has a negative entry");
    require(std::isfinite(v), ErrorKind::InvalidPmf, std::string(what) + " has a non-finite entry");
    total += v;
  }
  return total;
}

}  // namespace

JointPmf::JointPmf(linalg::Matrix p) : p_(std::move(p)) {
  require(p_.rows() > 0 && p_.cols() > 0, ErrorKind::EmptyInput, "empty joint table");
  const double total = checked_total(p_, "joint pmf");
  require(std::abs(total - 1.0) <= kRenormTolerance, ErrorKind::InvalidPmf,
          "joint pmf mass deviates from 1 beyond 1e-9");
  if (std::abs(total - 1.0) > kSumTolerance) {
    for (double& v : p_.data()) v /= total;
  }
  p_x_.assign(p_.rows(), 0.0);
  p_y_.assign(p_.cols(), 0.0);
  for (std::size_t i = 0; i < p_.rows(); ++i)
    for (std::size_t j = 0; j < p_.cols(); ++j) {
      p_x_[i] += p_(i, j);
      p_y_[j] += p_(i, j);
    }
  for (std::size_t i = 0; i < p_.rows(); ++i)
    require(p_x_[i] > 0.0, ErrorKind::ZeroMassRow, "joint pmf has an all-zero row");
  for (std::size_t j = 0; j < p_.cols(); ++j)
    require(p_y_[j] > 0.0, ErrorKind::ZeroMassRow, "joint pmf has an all-zero column");
}

Channel::Channel(linalg::Matrix w) : w_(std::move(w)) {
  require(w_.rows() > 0 && w_.cols() > 0, ErrorKind::EmptyInput, "empty channel table");
  for (std::size_t i = 0; i < w_.rows(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < w_.cols(); ++j) {
      require(w_(i, j) >= 0.0 && std::isfinite(w_(i, j)), ErrorKind::InvalidPmf,
              "channel has an invalid entry");
      row += w_(i, j);
    }
    require(std::abs(row - 1.0) <= kRenormTolerance, ErrorKind::InvalidPmf,
            "channel row mass deviates from 1 beyond 1e-9");
    if (std::abs(row - 1.0) > kSumTolerance)
      for (std::size_t j = 0; j < w_.cols(); ++j) w_(i, j) /= row;
  }
}

Channel Channel::bsc(double delta) {
  require(delta >= 0.0 && delta <= 1.0, ErrorKind::DomainError, "bsc crossover outside [0,1]");
  linalg::Matrix w(2, 2);
  w(0, 0) = 1.0 - delta;
  w(0, 1) = delta;
  w(1, 0) = delta;
  w(1, 1) = 1.0 - delta;
  return Channel(std::move(w));
}

Channel Channel::symmetric(std::size_t q, double eps) {
  require(q >= 2, ErrorKind::DomainError, "symmetric channel needs q >= 2");
  require(eps >= 0.0 && eps <= 1.0 - 1.0 / static_cast<double>(q), ErrorKind::DomainError,
          "symmetric channel crossover outside [0, 1 - 1/q]");
  linalg::Matrix w(q, q, eps / static_cast<double>(q - 1));
  for (std::size_t i = 0; i < q; ++i) w(i, i) = 1.0 - eps;
  return Channel(std::move(w));
}

FGenerator FGenerator::kl(double base) {
  const double scale = 1.0 / std::log(base);
  return FGenerator(Tag::KL, base, [scale](double t) {
    if (t <= 0.0) return 0.0;  // t log t -> 0 by continuity
    return t * std::log(t) * scale;
  });
}

FGenerator FGenerator::chi_squared() {
  return FGenerator(Tag::ChiSq, 0.0, [](double t) { return t * t - 1.0; });
}

FGenerator FGenerator::total_variation() {
  return FGenerator(Tag::TotalVariation, 0.0, [](double t) { return std::abs(t - 1.0) / 2.0; });
}

FGenerator FGenerator::custom(std::function<double(double)> f) {
  require(std::abs(f(1.0)) <= 1e-12, ErrorKind::DomainError,
          "custom f-generator must satisfy f(1) = 0");
  return FGenerator(Tag::Custom, 0.0, std::move(f));
}

double FGenerator::operator()(double t) const {
  const double v = f_(t);
  if (!std::isfinite(v)) fail(ErrorKind::DomainError, "f-generator undefined at evaluation point");
  return v;
}

JointPmf joint_from_channel(const std::vector<double>& p_x, const Channel& ch) {
  require(p_x.size() == ch.rows(), ErrorKind::DimensionMismatch,
          "input marginal length differs from channel rows");
  double total = 0.0;
  for (double v : p_x) {
    require(v >= 0.0, ErrorKind::InvalidPmf, "input marginal has a negative entry");
    require(v > 0.0, ErrorKind::ZeroMassRow, "input marginal has a zero atom; restrict support first");
    total += v;
  }
  require(std::abs(total - 1.0) <= kRenormTolerance, ErrorKind::InvalidPmf,
          "input marginal mass deviates from 1");
  linalg::Matrix p(ch.rows(), ch.cols());
  for (std::size_t i = 0; i < ch.rows(); ++i)
    for (std::size_t j = 0; j < ch.cols(); ++j) p(i, j) = p_x[i] * ch(i, j);
  return JointPmf(std::move(p));
}

double entropy(const std::vector<double>& p, double base) {
  const double lb = std::log(base);
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h / lb;
}

double binary_entropy(double x, double base) {
  if (x <= 1e-12 || x >= 1.0 - 1e-12) return 0.0;
  return (-x * std::log(x) - (1.0 - x) * std::log(1.0 - x)) / std::log(base);
}

double mutual_information(const JointPmf& j, double base) {
  const double lb = std::log(base);
  double mi = 0.0;
  for (std::size_t i = 0; i < j.rows(); ++i)
    for (std::size_t k = 0; k < j.cols(); ++k) {
      const double p = j(i, k);
      if (p > 0.0) mi += p * std::log(p / (j.p_x()[i] * j.p_y()[k]));
    }
  mi /= lb;
  return mi < 0.0 ? 0.0 : mi;
}

double chi_squared(const JointPmf& j) {
  double s = 0.0;
  for (std::size_t i = 0; i < j.rows(); ++i)
    for (std::size_t k = 0; k < j.cols(); ++k)
      s += j(i, k) * j(i, k) / (j.p_x()[i] * j.p_y()[k]);
  return s - 1.0;
}

double f_information(const JointPmf& j, const FGenerator& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < j.rows(); ++i)
    for (std::size_t k = 0; k < j.cols(); ++k) {
      const double q = j.p_x()[i] * j.p_y()[k];
      s += q * f(j(i, k) / q);
    }
  return s;
}

double kl_divergence(const std::vector<double>& p, const std::vector<double>& q,
                     double base) {
  require(p.size() == q.size(), ErrorKind::DimensionMismatch, "kl_divergence length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    require(q[i] > 0.0, ErrorKind::SupportMismatch, "kl_divergence: support(p) not within support(q)");
    s += p[i] * std::log(p[i] / q[i]);
  }
  return s / std::log(base);
}

double mutual_information_table(const linalg::Matrix& p, double base) {
  std::vector<double> px(p.rows(), 0.0), py(p.cols(), 0.0);
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < p.cols(); ++j) {
      px[i] += p(i, j);
      py[j] += p(i, j);
    }
  double mi = 0.0;
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < p.cols(); ++j) {
      const double v = p(i, j);
      if (v > 0.0) mi += v * std::log(v / (px[i] * py[j]));
    }
  mi /= std::log(base);
  return mi < 0.0 ? 0.0 : mi;
}

EmpiricalJoint empirical_joint(
    const std::vector<std::pair<std::string, std::string>>& samples) {
  require(!samples.empty(), ErrorKind::EmptyInput, "empirical_joint needs at least one sample");
  std::map<std::string, std::size_t> xi, yi;
  std::vector<std::string> xs, ys;
  for (const auto& [x, y] : samples) {
    if (xi.emplace(x, xs.size()).second) xs.push_back(x);
    if (yi.emplace(y, ys.size()).second) ys.push_back(y);
  }
  linalg::Matrix counts(xs.size(), ys.size());
  for (const auto& [x, y] : samples) counts(xi[x], yi[y]) += 1.0;
  for (double& v : counts.data()) v /= static_cast<double>(samples.size());
  return EmpiricalJoint{JointPmf(std::move(counts)), std::move(xs), std::move(ys)};
}

}  // namespace piclab::dist
