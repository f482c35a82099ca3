#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "piclab/linalg.hpp"

namespace piclab::dist {

inline constexpr double kSumTolerance = 1e-12;
inline constexpr double kRenormTolerance = 1e-9;

// Log bases used throughout; `base` parameters accept any value > 1.
inline constexpr double kBits = 2.0;
inline constexpr double kNats = 2.718281828459045235360287471352662498;

// Validated joint probability table of (X, Y) with cached marginals.
// Rows index X, columns index Y. Construction rejects tables whose total
// mass deviates from 1 by more than 1e-9, renormalizes smaller deviations,
// and rejects any all-zero row or column: the decomposition downstream
// divides by the marginals.
class JointPmf {
 public:
  explicit JointPmf(linalg::Matrix p);

  std::size_t rows() const { return p_.rows(); }
  std::size_t cols() const { return p_.cols(); }

  double operator()(std::size_t i, std::size_t j) const { return p_(i, j); }
  const linalg::Matrix& table() const { return p_; }

  const std::vector<double>& p_x() const { return p_x_; }
  const std::vector<double>& p_y() const { return p_y_; }

  JointPmf transposed() const { return JointPmf(p_.transposed()); }

 private:
  linalg::Matrix p_;
  std::vector<double> p_x_;
  std::vector<double> p_y_;
};

// Row-stochastic conditional table p_{Y|X}(j|i).
class Channel {
 public:
  explicit Channel(linalg::Matrix w);

  std::size_t rows() const { return w_.rows(); }
  std::size_t cols() const { return w_.cols(); }
  double operator()(std::size_t i, std::size_t j) const { return w_(i, j); }
  const linalg::Matrix& table() const { return w_; }

  static Channel bsc(double delta);
  // q-ary symmetric channel: crossover mass eps spread over the q-1 wrong symbols.
  static Channel symmetric(std::size_t q, double eps);

 private:
  linalg::Matrix w_;
};

// Generator of an f-divergence: convex f with f(1) = 0.
class FGenerator {
 public:
  enum class Tag { KL, ChiSq, TotalVariation, Custom };

  static FGenerator kl(double base = kNats);
  static FGenerator chi_squared();
  static FGenerator total_variation();
  static FGenerator custom(std::function<double(double)> f);

  Tag tag() const { return tag_; }
  double operator()(double t) const;

 private:
  FGenerator(Tag tag, double base, std::function<double(double)> f)
      : tag_(tag), base_(base), f_(std::move(f)) {}
  Tag tag_;
  double base_;
  std::function<double(double)> f_;
};

JointPmf joint_from_channel(const std::vector<double>& p_x, const Channel& ch);

double entropy(const std::vector<double>& p, double base);

// h_b with arguments snapped to {0,1} within 1e-12 so that degenerate
// constructions (e.g. perfect-privacy certificates) evaluate exactly.
double binary_entropy(double x, double base);

double mutual_information(const JointPmf& j, double base);

double chi_squared(const JointPmf& j);

double f_information(const JointPmf& j, const FGenerator& f);

double kl_divergence(const std::vector<double>& p, const std::vector<double>& q,
                     double base);

// Mutual information of a raw nonnegative table that may contain zero rows
// or columns (they contribute nothing). Used where a strict JointPmf cannot
// be formed, e.g. constant one-bit functions.
double mutual_information_table(const linalg::Matrix& p, double base);

struct EmpiricalJoint {
  JointPmf joint;
  std::vector<std::string> x_labels;
  std::vector<std::string> y_labels;
};

EmpiricalJoint empirical_joint(
    const std::vector<std::pair<std::string, std::string>>& samples);

}  // namespace piclab::dist
