#pragma once

#include <cstdint>
#include <vector>

#include "lindyn/errors.hpp"

namespace lindyn {

/// Exact prefix-density curve of a subset of N over [1, horizon].
struct DensityCurve {
  std::uint64_t horizon = 0;
  std::vector<std::uint64_t> counts;  // counts[N-1] = #(A intersect [0,N)), N in [1, horizon]

  /// Exact density at N as the pair (count, N).
  std::pair<std::uint64_t, std::uint64_t> density(std::uint64_t n) const {
    return {counts.at(n - 1), n};
  }
};

DensityCurve prefix_density(const std::vector<std::uint64_t>& sorted_members,
                            std::uint64_t horizon);

/// Family of pairwise disjoint positive-lower-density sets with a separation
/// radius and a floor per set: members of set j keep distance >= radius_j +
/// radius_j' from every member of set j', and min >= floor_j.
///
/// Built on an interval ladder [c_i, 2c_i) with guard gaps between
/// intervals; interval i is owned by the set whose 1-based index j has
/// i = 2^(j-1) (mod 2^j), and an owned interval carries an arithmetic
/// progression whose stride is the doubled governing parameter rounded up
/// to a power of two. All properties are finitely checkable and the
/// lower-density bound falls out of the ladder geometry.
class SeparatedFamily {
 public:
  struct Pair {
    std::uint64_t separation = 1;  // radius s
    std::uint64_t floor = 1;       // min element l
  };

  struct SetInfo {
    Pair request;
    std::uint64_t governing = 0;  // max(separation, floor, previous + 1)
    std::uint64_t stride = 0;
    std::vector<std::uint64_t> members;  // within [0, horizon)
    // Certified lower-density bound as an exact fraction, valid for every
    // prefix length in [burn_in, horizon].
    std::uint64_t bound_num = 0;
    std::uint64_t bound_den = 1;
    std::uint64_t burn_in = 0;
  };

  static SeparatedFamily build(const std::vector<Pair>& pairs, std::uint64_t horizon);

  std::size_t set_count() const { return sets_.size(); }
  std::uint64_t horizon() const { return horizon_; }
  const SetInfo& set(std::size_t j) const;  // 1-based, matching ownership
  /// Members of set j below limit (limit <= horizon).
  std::vector<std::uint64_t> members(std::size_t j, std::uint64_t limit) const;

 private:
  std::uint64_t horizon_ = 0;
  std::vector<SetInfo> sets_;
};

}  // namespace lindyn
