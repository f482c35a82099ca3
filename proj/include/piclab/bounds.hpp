#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "piclab/dist.hpp"

namespace piclab::bounds {

enum class BoundKind { PicFano, ChiSqUniform, MaxCorr, FanoMI, Witsenhausen };

const char* bound_kind_name(BoundKind kind);

struct BoundParam {
  std::string name;
  double value;
};

// A lower bound on estimation error with provenance for the report.
struct ErrorBound {
  double value = 0.0;
  BoundKind kind = BoundKind::PicFano;
  bool vacuous = false;  // raw expression fell below 0 and was clamped
  std::vector<BoundParam> params;
};

// Marginal of U = g_M(X): the m-M+1 heaviest atoms merged into one.
struct AggregatedPmf {
  std::vector<double> p_u;  // sorted descending
  std::size_t m = 0;
  std::size_t M = 0;
};

// Exact MAP error 1 - sum_y max_x p(x,y).
double map_error(const dist::JointPmf& j);

// Advantage over blind-guessing the modal symbol, clamped at 0.
double advantage(const dist::JointPmf& j);

// Dual objective f_0(alpha) from the error-bound linear program. p_x and
// lambdas must be sorted descending; lambdas is padded with zeros to m-1.
double f0(double alpha, const std::vector<double>& p_x, const std::vector<double>& lambdas);

struct F0Star {
  double value = 0.0;
  std::size_t k_star = 0;  // 1-based pivot index
};

// Closed-form minimum of f0 over alpha.
F0Star f0_star(const std::vector<double>& p_x, const std::vector<double>& lambdas);

// Fano-style lower bound on P_e(X|Y) from the marginal and the PIC vector.
ErrorBound pic_fano_bound(std::vector<double> p_x, std::vector<double> lambdas);

// Uniform-input chi-squared bound: 1 - 1/m - sqrt((m-1) chi2)/m.
ErrorBound chi2_uniform_bound(std::size_t m, double chi2);

// Maximal-correlation bound: 1 - p_x(1) - rho sqrt(1 - ||p_x||^2).
ErrorBound maxcorr_bound(std::vector<double> p_x, double rho);

// Error-rate function for mutual information: d* solving
// h_b(d*) + d* log(m-1) = max(H(X) - theta, 0).
double fano_mi_error_rate(const std::vector<double>& p_x, double theta,
                          double base = dist::kBits);

AggregatedPmf aggregate_gM(std::vector<double> p_x, std::size_t M);

// Lower bound on P_{e,M} via the error-rate function of U. The literal
// min{H(U)-theta, 0} clamp collapses the bound to zero; pass
// literal_min_clamp to evaluate that variant.
ErrorBound pem_bound_mi(const std::vector<double>& p_x, std::size_t M, double theta,
                        double base = dist::kBits, bool literal_min_clamp = false);

ErrorBound pem_bound_rho(const std::vector<double>& p_x, std::size_t M, double rho);

// Advantage of guessing any surjective M-ary function: rho sqrt(1 - 1/M).
double adv_m_bound(double rho, std::size_t M);

// Exact min over surjective f:[m]->[M] of the MAP error of f(X) given Y.
double pem_exact(const dist::JointPmf& j, std::size_t M);

}  // namespace piclab::bounds
