#include "piclab/boolean.hpp"

#include <algorithm>
#include <cmath>

#include "piclab/errors.hpp"
#include "piclab/parallel.hpp"

namespace piclab::boolean {

using dist::Channel;
using dist::JointPmf;
using linalg::Matrix;

namespace {

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

std::size_t log2_size(std::size_t len) {
  require(is_power_of_two(len), ErrorKind::NotPowerOfTwo, "length must be a power of two");
  std::size_t n = 0;
  while ((std::size_t{1} << n) < len) ++n;
  return n;
}

void check_pmf(const std::vector<double>& p) {
  double total = 0.0;
  for (double v : p) {
    require(v >= 0.0 && std::isfinite(v), ErrorKind::InvalidPmf, "pmf entry invalid");
    total += v;
  }
  require(std::abs(total - 1.0) <= dist::kRenormTolerance, ErrorKind::InvalidPmf,
          "pmf mass deviates from 1");
}

}  // namespace

std::vector<double> hadamard_transform(std::vector<double> v) {
  const std::size_t len = v.size();
  log2_size(len);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::size_t h = 1; h < len; h <<= 1) {
    for (std::size_t i = 0; i < len; i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double x = v[j], y = v[j + h];
        v[j] = (x + y) * inv_sqrt2;
        v[j + h] = (x - y) * inv_sqrt2;
      }
    }
  }
  return v;
}

NoiseSpectrum noise_spectrum(const std::vector<double>& p_z) {
  check_pmf(p_z);
  NoiseSpectrum s;
  s.n = log2_size(p_z.size());
  s.p_z = p_z;
  s.c = hadamard_transform(p_z);
  const double scale = std::pow(2.0, static_cast<double>(s.n) / 2.0);
  for (double& v : s.c) v *= scale;
  require(std::abs(s.c[0] - 1.0) <= 1e-12, ErrorKind::InvalidPmf,
          "empty-set coefficient deviates from 1");
  s.c[0] = 1.0;
  return s;
}

std::vector<double> additive_channel_pics(const std::vector<double>& p_z, bool p_x_uniform) {
  require(p_x_uniform, ErrorKind::UniformityRequired,
          "closed-form PICs need uniform input; use pic::decompose otherwise");
  NoiseSpectrum s = noise_spectrum(p_z);
  std::vector<double> pics;
  pics.reserve(s.c.size() - 1);
  for (std::size_t mask = 1; mask < s.c.size(); ++mask) pics.push_back(s.c[mask] * s.c[mask]);
  std::sort(pics.begin(), pics.end(), std::greater<double>());
  return pics;
}

OneBitInstance::OneBitInstance(double a, double b, double z) : a_(a), b_(b), z_(z) {
  require(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0, ErrorKind::InvalidPmf,
          "one-bit masses outside [0,1]");
  require(z >= -1e-12 && z <= std::min(a, b) + 1e-12 && z >= a + b - 1.0 - 1e-12,
          ErrorKind::InvalidPmf, "agreement mass incompatible with the marginals");
}

Matrix OneBitInstance::table() const {
  Matrix p(2, 2);
  p(0, 0) = std::max(z_, 0.0);
  p(0, 1) = std::max(a_ - z_, 0.0);
  p(1, 0) = std::max(b_ - z_, 0.0);
  p(1, 1) = std::max(1.0 - a_ - b_ + z_, 0.0);
  return p;
}

double OneBitInstance::mutual_information(double base) const {
  return dist::mutual_information_table(table(), base);
}

ParityMembership parity_membership_check(const Channel& ch, double tol) {
  require(ch.rows() == ch.cols(), ErrorKind::DimensionMismatch, "channel must be square");
  const std::size_t len = ch.rows();
  log2_size(len);
  ParityMembership out;
  for (std::size_t s = 1; s < len; ++s) {
    for (std::size_t x = 0; x < len; ++x) {
      for (std::size_t y = 0; y < len; ++y) {
        if (std::abs(ch(x ^ s, y ^ s) - ch(x, y)) > tol) return out;
      }
    }
  }
  out.is_member = true;
  out.p_z.resize(len);
  for (std::size_t z = 0; z < len; ++z) out.p_z[z] = ch(0, z);
  out.c = noise_spectrum(out.p_z).c;
  return out;
}

JointPmf additive_channel_joint(const std::vector<double>& p_z) {
  check_pmf(p_z);
  const std::size_t len = p_z.size();
  log2_size(len);
  Matrix p(len, len);
  const double px = 1.0 / static_cast<double>(len);
  for (std::size_t x = 0; x < len; ++x)
    for (std::size_t y = 0; y < len; ++y) p(x, y) = px * p_z[x ^ y];
  return JointPmf(std::move(p));
}

double qary_f_information(double a, double sigma1, const dist::FGenerator& f) {
  require(a > 0.0 && a < 1.0, ErrorKind::DomainError, "a must lie strictly inside (0,1)");
  require(sigma1 >= 0.0 && sigma1 <= 1.0, ErrorKind::DomainError, "sigma1 outside [0,1]");
  const double c = (1.0 - a) / a;
  return a * a * f(1.0 + sigma1 * c) + 2.0 * a * (1.0 - a) * f(1.0 - sigma1) +
         (1.0 - a) * (1.0 - a) * f(1.0 + sigma1 / c);
}

double z_upper(double a, double b, double rho) {
  require(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0, ErrorKind::DomainError,
          "masses outside [0,1]");
  require(rho >= 0.0 && rho <= 1.0, ErrorKind::DomainError, "rho outside [0,1]");
  const double raw = a * b + rho * std::sqrt(a * (1.0 - a) * b * (1.0 - b));
  return std::min(raw, std::min(a, b));
}

double witsenhausen_bound(double a, double b, double rho) {
  require(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0, ErrorKind::DomainError,
          "masses outside [0,1]");
  require(rho >= 0.0 && rho <= 1.0, ErrorKind::DomainError, "rho outside [0,1]");
  const double raw =
      a + b - 2.0 * a * b - 2.0 * rho * std::sqrt(a * (1.0 - a) * b * (1.0 - b));
  return std::max(raw, 0.0);
}

double witsenhausen_bound_minb(double a, double rho) {
  require(a >= 0.0 && a <= 1.0, ErrorKind::DomainError, "a outside [0,1]");
  require(rho >= 0.0 && rho <= 1.0, ErrorKind::DomainError, "rho outside [0,1]");
  const double inner = 1.0 - 4.0 * a * (1.0 - a) * (1.0 - rho * rho);
  return 0.5 * (1.0 - std::sqrt(std::max(inner, 0.0)));
}

double unbiased_estimator_info_bound(double a, double sigma1, const dist::FGenerator& f) {
  return qary_f_information(a, sigma1, f);
}

double one_bit_mutual_information(double a, double b, double z, double base) {
  return OneBitInstance(a, b, z).mutual_information(base);
}

namespace {

// I(b(X^n); Y) for a joint of (X^n, Y) with uniform X and a function given
// by a bitmask over the 2^n inputs.
double mi_of_function(const Matrix& joint, std::uint64_t mask, double base) {
  Matrix b(2, joint.cols());
  for (std::size_t x = 0; x < joint.rows(); ++x) {
    const std::size_t row = (mask >> x) & 1u;
    for (std::size_t y = 0; y < joint.cols(); ++y) b(row, y) += joint(x, y);
  }
  return dist::mutual_information_table(b, base);
}

}  // namespace

ConjectureReport conjecture_search(std::size_t n, double delta) {
  require(n >= 1 && n <= 4, ErrorKind::TooLarge, "conjecture search supports n in [1,4]");
  require(delta >= 0.0 && delta <= 0.5, ErrorKind::DomainError, "delta outside [0,1/2]");
  const std::size_t len = std::size_t{1} << n;

  // BSC(delta)^n noise pmf: bit value 1 in the index means a flipped coordinate.
  std::vector<double> p_z(len);
  for (std::size_t z = 0; z < len; ++z) {
    double v = 1.0;
    for (std::size_t i = 0; i < n; ++i) v *= ((z >> i) & 1u) ? delta : 1.0 - delta;
    p_z[z] = v;
  }
  const JointPmf bsc_joint = additive_channel_joint(p_z);

  // All-pass counterpart: (eps, 2^n)-SC with eps = 2 delta (1 - 2^{-n}).
  const double eps = 2.0 * delta * (1.0 - 1.0 / static_cast<double>(len));
  std::vector<double> uniform(len, 1.0 / static_cast<double>(len));
  const JointPmf flat_joint = dist::joint_from_channel(uniform, Channel::symmetric(len, eps));

  ConjectureReport rep;
  rep.bound = 1.0 - dist::binary_entropy(delta, dist::kBits);

  const std::uint64_t total = std::uint64_t{1} << len;
  std::vector<double> mi_bsc(total / 2), mi_flat(total / 2);
  // Enumerate up to complement: keep the representative with b(all-ones) = 0.
  parallel_chunks(total / 2, [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      const std::uint64_t mask = static_cast<std::uint64_t>(idx) << 1;
      mi_bsc[idx] = mi_of_function(bsc_joint.table(), mask, dist::kBits);
      mi_flat[idx] = mi_of_function(flat_joint.table(), mask, dist::kBits);
    }
  });

  for (std::size_t idx = 0; idx < total / 2; ++idx) {
    const std::uint64_t mask = static_cast<std::uint64_t>(idx) << 1;
    if (mi_bsc[idx] > rep.max_mi) {
      rep.max_mi = mi_bsc[idx];
      rep.argmax_mask = mask;
    }
    if (mi_bsc[idx] > mi_flat[idx] + 1e-10 || mi_bsc[idx] > rep.bound + 1e-10)
      rep.violations.push_back(mask);
  }
  return rep;
}

}  // namespace piclab::boolean
