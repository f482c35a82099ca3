#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "piclab/dist.hpp"

namespace piclab::boolean {

// Subsets S of [n] are bitmasks with bit i standing for coordinate i+1.
// Symbol +1 maps to bit value 0, so the all-ones string is index 0 and
// entrywise products of strings become XOR of indices.

// Parity coefficients of a binary additive-noise channel: c[S] = E[chi_S(Z)],
// the scaled Hadamard transform of the noise pmf.
struct NoiseSpectrum {
  std::size_t n = 0;
  std::vector<double> c;    // length 2^n, c[0] = 1
  std::vector<double> p_z;  // length 2^n
};

struct ParityMembership {
  bool is_member = false;
  std::vector<double> p_z;  // recovered noise pmf when member
  std::vector<double> c;    // its spectrum when member
};

// One-bit function/estimator pair summarized by a = Pr{B=0}, b = Pr{B^=0}
// and the agreement mass z = Pr{B = B^ = 0}. Construction validates that the
// implied 2x2 table is a distribution.
class OneBitInstance {
 public:
  OneBitInstance(double a, double b, double z);

  double a() const { return a_; }
  double b() const { return b_; }
  double z() const { return z_; }

  linalg::Matrix table() const;  // [[z, a-z], [b-z, 1-a-b+z]]
  double mutual_information(double base = dist::kBits) const;

 private:
  double a_, b_, z_;
};

struct ConjectureReport {
  double max_mi = 0.0;             // max over b of I(b(X^n); Y^n)
  std::uint64_t argmax_mask = 0;   // function bitmask attaining it
  double bound = 0.0;              // 1 - h_b(delta)
  // Function masks violating I(b;Y) <= I(b;Y~) or the 1 - h_b(delta) cap.
  std::vector<std::uint64_t> violations;
};

// In-place normalized Walsh-Hadamard butterfly; involutive.
std::vector<double> hadamard_transform(std::vector<double> v);

NoiseSpectrum noise_spectrum(const std::vector<double>& p_z);

// {c_S^2 : S != empty} sorted descending; the PICs of (X^n, Y^n) for uniform
// input. Callers with non-uniform inputs must go through pic::decompose.
std::vector<double> additive_channel_pics(const std::vector<double>& p_z, bool p_x_uniform);

// Shift-invariance test p(y^s | x^s) = p(y|x); members are exactly the
// additive-noise channels and yield their noise pmf.
ParityMembership parity_membership_check(const dist::Channel& ch, double tol = 1e-9);

// Joint of (X^n, Y^n) for uniform X^n and additive noise p_z.
dist::JointPmf additive_channel_joint(const std::vector<double>& p_z);

// Closed form for I_f(B; Y~) through a q-ary symmetric channel, B a balanced
// aq-subset indicator of a uniform X.
double qary_f_information(double a, double sigma1, const dist::FGenerator& f);

double z_upper(double a, double b, double rho);

// Lower bound on Pr{B != B^}: a + b - 2ab - 2 rho sqrt(a(1-a)b(1-b)).
double witsenhausen_bound(double a, double b, double rho);

// The same bound minimized over b.
double witsenhausen_bound_minb(double a, double rho);

double unbiased_estimator_info_bound(double a, double sigma1, const dist::FGenerator& f);

// Mutual information of the 2x2 one-bit table [[z, a-z], [b-z, 1-a-b+z]].
double one_bit_mutual_information(double a, double b, double z, double base = dist::kBits);

ConjectureReport conjecture_search(std::size_t n, double delta);

}  // namespace piclab::boolean
