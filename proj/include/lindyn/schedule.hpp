#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lindyn/errors.hpp"

namespace lindyn {

enum class ScheduleKind { Canonical, Geometric, Explicit };

/// Unit keeps the recurrent coefficient at -1 (invertible family);
/// Matched sets it to the interior weight product, which makes every
/// finite vector periodic.
enum class RecurrenceKind { Unit, Matched };

/// Per-generation block layout: block_len coordinates per block, a head run
/// of halving weights of length head_len, and tail runs of length tail_len
/// (halving then doubling) at the block end.
struct GenerationParams {
  std::int64_t block_len = 0;  // must exceed 2*tail_len + head_len
  std::int64_t head_len = 0;
  std::int64_t tail_len = 0;
};

/// Rule or table producing the coupling exponents (tau_m): v = 2^(-tau).
struct TauRule {
  enum class Kind { Affine, Table, Synthesized };
  Kind kind = Kind::Affine;
  // Affine: tau_m = offset + step*m.
  std::int64_t offset = 1;
  std::int64_t step = 1;
  std::vector<std::int64_t> table;
  // Synthesized: exact values up to this index, monotone extension beyond.
  // Negative means the built-in default of min(block horizon, 16).
  std::int64_t synth_limit = -1;
};

struct Schedule {
  ScheduleKind kind = ScheduleKind::Canonical;
  int beta = 8;  // geometric ratio; canonical is geometric(8)
  int k_max = 2;
  RecurrenceKind recurrence = RecurrenceKind::Unit;
  std::vector<GenerationParams> generations;  // explicit kind only
  TauRule tau;

  static Schedule canonical(int k_max);
  static Schedule geometric(int beta, int k_max);

  /// Generation parameters for k <= k_max.
  GenerationParams generation(int k) const;

  /// Throws validation_error naming the violated constraint.
  void validate() const;
};

/// Number of blocks in generations < k, i.e. the first block of generation k.
std::uint64_t generation_start(int k);

}  // namespace lindyn
