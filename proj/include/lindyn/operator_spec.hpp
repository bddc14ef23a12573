#pragma once

#include <cstdint>
#include <vector>

#include "lindyn/dyadic.hpp"
#include "lindyn/schedule.hpp"

namespace lindyn {

/// Fully derived operator data for a validated schedule: block boundaries,
/// generation membership, parent map, weight table and coupling exponents,
/// materialized for every block below the horizon.
///
/// Immutable after construction; all queries are pure and safe to share
/// across threads.
class OperatorSpec {
 public:
  static OperatorSpec derive(const Schedule& schedule);

  const Schedule& schedule() const { return schedule_; }
  RecurrenceKind recurrence() const { return schedule_.recurrence; }

  std::size_t num_blocks() const { return blocks_; }
  int max_generation() const { return schedule_.k_max; }
  /// First coordinate past the horizon: block_start(num_blocks()).
  std::uint64_t horizon_coord() const { return b_.back(); }

  std::uint64_t block_start(std::size_t n) const;
  std::uint64_t block_end(std::size_t n) const { return block_start(n + 1); }
  int generation_of(std::size_t n) const;
  std::int64_t block_len(std::size_t n) const { return gen_of_block_checked(n).block_len; }
  std::int64_t head_len(std::size_t n) const { return gen_of_block_checked(n).head_len; }
  std::int64_t tail_len(std::size_t n) const { return gen_of_block_checked(n).tail_len; }
  GenerationParams generation_params(int k) const;

  /// Block containing coordinate; throws horizon_error past the horizon.
  std::size_t block_of(std::uint64_t coord) const;

  /// parent(n) < n for n >= 1; block n feeds block parent(n) at its wrap.
  std::size_t parent(std::size_t n) const;
  /// Iterations of parent() needed to reach block 0.
  std::int64_t depth_to_root(std::size_t n) const;

  /// Coupling exponent tau_m (v over parent slot m equals 2^(-tau_m)).
  std::int64_t tau(std::uint64_t m) const;
  std::size_t tau_count() const { return tau_.size(); }
  /// Coupling coefficient of block n >= 1: 2^(-tau(parent(n))).
  Dyadic coupling(std::size_t n) const;

  /// log2 of weight at coordinate i: -1, 0 or +1. i must lie strictly inside
  /// a block; block boundaries and i = 0 carry no weight.
  int weight_exp(std::uint64_t i) const;
  Dyadic weight(std::uint64_t i) const;

  /// Sum of weight_exp over the path block_start(n)+1 .. i, in closed form
  /// from the branch layout. Zero when i == block_start(n).
  std::int64_t weight_prefix_exp(std::size_t n, std::uint64_t i) const;

  /// Inverse recurrent coefficient magnitude: 1 (Unit) or 2^head_len (Matched).
  Dyadic recurrence_inv(std::size_t n) const;
  /// Interior weight product over the open block, computed by direct product.
  Dyadic interior_product(std::size_t n) const;

  /// Orbit decay slope as the reduced fraction num/den
  /// (head_len(gen 0) over 3*block_len(gen 0)).
  std::int64_t decay_slope_num() const { return slope_num_; }
  std::int64_t decay_slope_den() const { return slope_den_; }

  /// Replace the coupling table (used once, after synthesis). Values must be
  /// strictly increasing positive.
  void replace_tau(std::vector<std::int64_t> values);

 private:
  Schedule schedule_;
  std::size_t blocks_ = 0;
  std::vector<std::uint64_t> b_;      // block starts, size blocks_+1
  std::vector<int> gen_;              // generation per block
  std::vector<GenerationParams> gp_;  // per generation
  std::vector<std::int64_t> tau_;
  std::int64_t slope_num_ = 0, slope_den_ = 1;

  const GenerationParams& gen_of_block_checked(std::size_t n) const;
};

}  // namespace lindyn
