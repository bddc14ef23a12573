#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lindyn/action.hpp"

namespace lindyn {

struct CheckResult {
  bool pass = false;
  std::string witness;  // indices and exact values when failing
};

/// Per-block eigen relation: after 2*block_len applications a basis vector
/// of block n scales by the exact square of (recurrence_inv * interior
/// product). Verifies the compatibility equation between a block and its
/// parent first, then checks sampled coordinates by plain iteration.
CheckResult eigen_period_check(const OperatorSpec& spec, std::size_t n,
                               std::span<const std::uint64_t> coords);

/// Section scalar identity: for support(x) within blocks <= n, the orbit
/// returns to 2^(-2*head_len(n)) x after 2*block_len(n) steps (unit
/// recurrence), checked by plain iteration against the exact scalar.
CheckResult section_period_check(const OperatorSpec& spec, const FinVec& x, std::size_t n);

struct InvertibilityReport {
  bool pass = false;
  std::int64_t first_failing_index = -1;
  std::string detail;
};

/// Coupling decay (2^(-tau_m) <= 2^(-m)) and the chain-product sum bound
/// (<= 2) for every index <= limit, in exact arithmetic.
InvertibilityReport invertibility_check(const OperatorSpec& spec, std::uint64_t limit);

/// Finite certificate that ||T^k y|| <= 2^(-slope*k) for all k >= k0:
/// an exhaustive window of one full section period plus the exact
/// per-period scalar, whose decay dominates the bound's.
struct DecayCertificate {
  std::int64_t slope_num = 0;
  std::int64_t slope_den = 1;
  std::int64_t k0 = 0;
  std::int64_t window_lo = 0;
  std::int64_t window_hi = 0;  // exclusive
  Dyadic period_scalar;        // exact factor per 2*block_len steps
  std::size_t section_block = 0;
  bool period_factor_dominates = false;
};

DecayCertificate decay_certificate(const OperatorSpec& spec, const FinVec& y,
                                   std::int64_t scan_cap = -1);

/// Generation-level basis decay: the smallest checkable generation k >= k_min
/// whose first `count` blocks satisfy the slope bound from step 0, certified
/// by an exhaustive window of one period per block. The proof-side constant
/// (sup over the first `count`+1 early basis orbits) is recomputed, and the
/// candidate generation must clear (C+1)^3 < 2^head_len before any window
/// scan runs.
struct BasisDecayCertificate {
  int generation = -1;
  std::vector<std::size_t> blocks;
  std::int64_t window = 0;
  Dyadic early_orbit_sup;  // the recomputed constant C
};

BasisDecayCertificate basis_decay_certificate(const OperatorSpec& spec, int k_min,
                                              std::uint64_t count);

/// ||T^{-1} x|| <= 2 ||x||, exact comparison.
CheckResult inverse_contraction_check(const OperatorSpec& spec, const FinVec& x);

/// Leakage of block n into ancestor block l after j inverse steps:
/// ||P_l T^{-j} P_n x|| <= 2^(j - tau_{l+s-1}) ||P_n x|| for n in the s-fold
/// preimage of l, exact on both sides.
CheckResult cross_block_check(const OperatorSpec& spec, std::size_t l, std::int64_t s,
                              std::size_t n, std::int64_t j, const FinVec& x);

/// The compressed inverse action P_l T^{-j} P_l on block l is monomial: each
/// coordinate maps to a signed power of two times one coordinate. min_exp[j]
/// is the exact log2 of the smallest coefficient magnitude at step j.
struct GainProfile {
  std::size_t block = 0;
  std::vector<std::int64_t> min_exp;
  std::int64_t period = 0;             // 2*block_len
  std::int64_t period_growth_exp = 0;  // gains scale by 2^(2*head_len) per period
  bool floor_ok = false;               // min_exp[j] >= head*floor(j/block_len) - tail for all j
};

GainProfile gain_profile(const OperatorSpec& spec, std::size_t l, std::int64_t j_max);

/// Exact per-coordinate gain exponent of P_l T^{-j} P_l at block offset u.
std::int64_t gain_exponent(const OperatorSpec& spec, std::size_t l, std::int64_t j,
                           std::int64_t u);

}  // namespace lindyn
