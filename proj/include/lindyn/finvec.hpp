#pragma once

#include <cstdint>
#include <vector>

#include "lindyn/dyadic.hpp"

namespace lindyn {

/// Finitely supported vector over l1(N): sorted sparse index -> Dyadic map.
/// Invariants: indices strictly increasing, no stored zero coefficients.
class FinVec {
 public:
  struct Entry {
    std::uint64_t index;
    Dyadic coeff;
  };

  FinVec() = default;
  static FinVec basis(std::uint64_t k, Dyadic c = Dyadic(1));
  /// Sorts, merges duplicate indices, prunes exact zeros.
  static FinVec from_entries(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const { return entries_; }
  /// Moves the entry storage out, leaving the vector zero.
  std::vector<Entry> release() {
    std::vector<Entry> out = std::move(entries_);
    entries_.clear();
    return out;
  }
  bool is_zero() const { return entries_.empty(); }
  std::size_t support_size() const { return entries_.size(); }
  /// Largest stored index; requires a nonzero vector.
  std::uint64_t support_max() const;
  Dyadic coeff(std::uint64_t index) const;

  FinVec& scale(const Dyadic& c);
  FinVec& scale_pow2(std::int64_t e);
  FinVec& negate();

  friend FinVec operator+(const FinVec& a, const FinVec& b);
  friend FinVec operator-(const FinVec& a, const FinVec& b);

  Dyadic norm_l1() const;

  friend bool operator==(const FinVec& a, const FinVec& b);

 private:
  std::vector<Entry> entries_;
};

Dyadic dist_l1(const FinVec& a, const FinVec& b);

/// Exact order of ||x||_1 against bound; early-exit, no full sum unless needed.
std::strong_ordering compare_norm(const FinVec& x, const Dyadic& bound);

/// Exact order of ||x - y||_1 against bound.
std::strong_ordering compare_dist(const FinVec& x, const FinVec& y, const Dyadic& bound);

}  // namespace lindyn
