#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "piclab/dist.hpp"
#include "piclab/linalg.hpp"

namespace piclab::pic {

// Principal inertia decomposition of a joint pmf: singular triplets of
// Q = D_X^{-1/2} P D_Y^{-1/2}. lambdas holds the PICs (squared singular
// values past the leading 1) sorted descending; f_funcs and g_funcs hold the
// principal functions f_0..f_d on X and g_0..g_d on Y, with f_0 = g_0 = 1.
struct PicDecomposition {
  std::size_t d = 0;
  std::vector<double> lambdas;        // length d
  linalg::Matrix f_funcs;             // m x (d+1)
  linalg::Matrix g_funcs;             // n x (d+1)
  std::vector<double> sigma_full;     // length d+1: (1, sqrt(l_1), ...)
  // Inclusive index ranges [first,last] into lambdas where neighbouring PICs
  // coincide within 1e-9; principal functions inside a cluster are basis
  // dependent and should only be consumed through invariant quantities.
  std::vector<std::array<std::size_t, 2>> ties;
  // Set when min p_X / min p_Y puts the D^{-1/2} scaling past condition 1e8.
  bool ill_conditioned = false;
};

struct MmseReport {
  double variance = 0.0;          // ||f(X)||^2 after centering
  std::vector<double> coeffs;     // c_i = E[f f_i]/||f||, i = 1..d
  double mmse = 0.0;
};

struct DpiReport {
  std::vector<double> lhs;   // PICs of (X,Z)
  std::vector<double> rhs;   // lambda_1(Y;Z) * PICs of (X,Y)
  double lambda1_yz = 0.0;
  bool pass = false;
};

PicDecomposition decompose(const dist::JointPmf& j, double tol = 1e-6);

double k_correlation(const PicDecomposition& dec, std::size_t k);

double maximal_correlation(const PicDecomposition& dec);

MmseReport mmse_of_function(const dist::JointPmf& j, const PicDecomposition& dec,
                            const std::vector<double>& f);

// PICs of the product source p_{(X1,X2),(Y1,Y2)}: all pairwise products
// including the lambda_0 = 1 cross terms, sorted descending.
std::vector<double> tensorize(const PicDecomposition& dec_a, const PicDecomposition& dec_b);

// Square, symmetric, positive semi-definite joint table.
bool is_conforming(const dist::JointPmf& j, double tol = 1e-9);

// Channel taking X to a variable whose PICs all equal lambda_1; for uniform
// p_X this is the q-ary symmetric channel with crossover
// (q-1)(1-sqrt(lambda_1))/q.
dist::Channel flatten_to_max(const dist::JointPmf& j, const PicDecomposition& dec);

DpiReport dpi_check(const dist::JointPmf& j_xy, const dist::Channel& ch_yz);

// Joint of (X, Z) for the chain X -> Y -> Z, with zero-mass Z columns removed.
dist::JointPmf compose_markov(const dist::JointPmf& j_xy, const dist::Channel& ch_yz);

}  // namespace piclab::pic
