#pragma once

#include <cstdint>
#include <vector>

#include "piclab/dist.hpp"

namespace piclab::oracle {

// Verifiers used by the test suite and the `verify` subcommand. They share
// only the distribution type with the main modules: every numerical kernel
// here is written from scratch so the two paths can disagree when one is
// wrong.

enum class Method {
  ExhaustiveGrid,
  AlternatingCE,
  AlternatingLP,
  ExhaustiveFunctions,
  Bisection,
};

const char* method_name(Method m);

struct OracleResult {
  double value = 0.0;
  Method method = Method::ExhaustiveGrid;
  std::size_t evaluations = 0;
};

// Maximal correlation by alternating conditional expectations (power
// iteration on T_X T_Y), multi-start.
OracleResult maxcorr_by_ace(const dist::JointPmf& j, std::size_t iters, std::uint64_t seed);

// MAP error by explicit per-column enumeration of deterministic estimators.
OracleResult pe_exhaustive(const dist::JointPmf& j);

// Best z = x^T P y over the box-with-mass sets C^m(a, P^T) x C^n(b, P) by
// alternating fractional-knapsack steps; a lower witness for z_u*.
OracleResult z_bilinear_max(const dist::JointPmf& j, double a, double b,
                            std::size_t iters, std::uint64_t seed);

// k-th PIC by deflated projected power iteration over centered functions.
OracleResult variational_pic(const dist::JointPmf& j, std::size_t k,
                             std::size_t samples, std::uint64_t seed);

enum class OneBitMetric { MI, Pe };

// Exact extremum (max MI / min Pe) over all non-constant b : X -> {0,1}.
OracleResult one_bit_exhaustive(const dist::JointPmf& j, OneBitMetric metric);

}  // namespace piclab::oracle
