#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lindyn/finvec.hpp"
#include "lindyn/operator_spec.hpp"

namespace lindyn {

/// One forward application: within-block shift by the weight, block wraps
/// feed the parent block through the coupling and recur at the block start.
FinVec apply_forward(const OperatorSpec& spec, const FinVec& x);

/// One inverse application (Unit recurrence only): within-block backshift by
/// the inverse weight; block starts fan out to the chain of parent block
/// ends plus the own block end.
FinVec apply_inverse(const OperatorSpec& spec, const FinVec& x);

enum class PowerMode {
  Reduced,    // fold whole periods into the exact per-period scalar
  Iterative,  // plain composition; the oracle for the reduced path
};

/// Exact T^power x. Reduced mode takes the enclosing section's period
/// 2*block_len and applies the per-period scalar, then iterates the rest.
FinVec apply_power(const OperatorSpec& spec, FinVec x, std::int64_t power,
                   PowerMode mode = PowerMode::Reduced);

/// Restriction to the coordinates of block n.
FinVec project_block(const OperatorSpec& spec, const FinVec& x, std::size_t n);
/// Sum of block restrictions over a set of block indices (sorted or not).
FinVec project_blocks(const OperatorSpec& spec, const FinVec& x,
                      std::span<const std::size_t> blocks);

/// In-place orbit stepper for long scans; reuses buffers, moves coefficients.
class OrbitWalker {
 public:
  OrbitWalker(const OperatorSpec& spec, FinVec start);
  const FinVec& current() const { return cur_; }
  void step_forward();
  void step_inverse();

 private:
  const OperatorSpec& spec_;
  FinVec cur_;
  std::vector<FinVec::Entry> scratch_;
};

/// Dense exact matrix of the section span{e_k : k < block_start(n_blocks)},
/// which both the operator and its inverse leave invariant.
class SectionMatrix {
 public:
  /// columns[k] = image of e_k under one application.
  static SectionMatrix forward(const OperatorSpec& spec, std::size_t n_blocks);
  static SectionMatrix inverse(const OperatorSpec& spec, std::size_t n_blocks);

  std::size_t dim() const { return dim_; }
  const Dyadic& at(std::size_t row, std::size_t col) const { return m_[row * dim_ + col]; }

  std::vector<Dyadic> apply(std::span<const Dyadic> v) const;
  SectionMatrix multiply(const SectionMatrix& o) const;
  bool is_identity() const;

  static std::vector<Dyadic> to_dense(const FinVec& x, std::size_t dim);
  static FinVec to_sparse(std::span<const Dyadic> v);

 private:
  std::size_t dim_ = 0;
  std::vector<Dyadic> m_;  // row-major
};

// Budget: sections above this many coordinates refuse to densify.
inline constexpr std::size_t kMaxSectionDim = 4096;

}  // namespace lindyn
