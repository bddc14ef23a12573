#include "lindyn/schedule.hpp"

namespace lindyn {

std::uint64_t generation_start(int k) {
  if (k <= 0) return 0;
  return std::uint64_t(1) << (k - 1);
}

Schedule Schedule::canonical(int k_max) {
  Schedule s;
  s.kind = ScheduleKind::Canonical;
  s.beta = 8;
  s.k_max = k_max;
  return s;
}

Schedule Schedule::geometric(int beta, int k_max) {
  Schedule s;
  s.kind = ScheduleKind::Geometric;
  s.beta = beta;
  s.k_max = k_max;
  return s;
}

GenerationParams Schedule::generation(int k) const {
  if (k < 0 || k > k_max) {
    throw horizon_error("generation " + std::to_string(k) + " beyond horizon k_max=" +
                        std::to_string(k_max));
  }
  if (kind == ScheduleKind::Explicit) return generations.at(static_cast<std::size_t>(k));
  GenerationParams g;
  std::int64_t p = 1;
  for (int i = 0; i < k; ++i) p *= beta;  // beta^k
  g.head_len = p;
  g.tail_len = p;
  g.block_len = p * beta;  // beta^(k+1)
  return g;
}

void Schedule::validate() const {
  if (k_max < 0) throw validation_error("k_max must be >= 0");
  if (kind != ScheduleKind::Explicit) {
    if (beta < 4) throw validation_error("geometric ratio must be >= 4 (2*tail + head < block fails)");
    if (beta % 2 != 0) {
      throw validation_error("geometric ratio must be even (block_len(k+1) multiple of 2*block_len(k) fails)");
    }
    // beta^(k_max+1) must fit an int64 with slack for step arithmetic.
    double approx = 1.0;
    for (int i = 0; i <= k_max + 1; ++i) approx *= beta;
    if (approx > 9.0e17) throw validation_error("geometric schedule overflows 64-bit block sizes");
  } else {
    if (generations.size() < static_cast<std::size_t>(k_max) + 1) {
      throw validation_error("explicit schedule needs generation params for every k <= k_max");
    }
    const GenerationParams& g0 = generations[0];
    for (int k = 0; k <= k_max; ++k) {
      const GenerationParams& g = generations[static_cast<std::size_t>(k)];
      if (g.block_len <= 0 || g.head_len <= 0 || g.tail_len <= 0) {
        throw validation_error("generation parameters must be positive (k=" + std::to_string(k) + ")");
      }
      if (2 * g.tail_len + g.head_len >= g.block_len) {
        throw validation_error("constraint violated: 2*tail_len + head_len < block_len (k=" +
                               std::to_string(k) + ")");
      }
      // head/block ratio must match generation 0 exactly
      if (g.head_len * g0.block_len != g0.head_len * g.block_len) {
        throw validation_error("constraint violated: head_len/block_len must be constant (k=" +
                               std::to_string(k) + ")");
      }
      if (k > 0) {
        const GenerationParams& p = generations[static_cast<std::size_t>(k - 1)];
        if (g.block_len <= p.block_len || g.head_len <= p.head_len || g.tail_len <= p.tail_len) {
          throw validation_error("generation sequences must be increasing (k=" + std::to_string(k) + ")");
        }
        if (g.block_len % (2 * p.block_len) != 0) {
          throw validation_error("constraint violated: block_len(k) multiple of 2*block_len(k-1) (k=" +
                                 std::to_string(k) + ")");
        }
      }
    }
  }
  // Coupling exponents must be strictly increasing positive integers.
  switch (tau.kind) {
    case TauRule::Kind::Affine:
      if (tau.offset < 1) throw validation_error("tau offset must be a positive integer");
      if (tau.step < 1) throw validation_error("tau must be strictly increasing (step >= 1)");
      break;
    case TauRule::Kind::Table: {
      if (tau.table.empty()) throw validation_error("tau table is empty");
      std::int64_t prev = 0;
      for (std::size_t i = 0; i < tau.table.size(); ++i) {
        if (tau.table[i] < 1) throw validation_error("tau values must be positive integers");
        if (i > 0 && tau.table[i] <= prev) {
          throw validation_error("tau table must be strictly increasing (index " + std::to_string(i) + ")");
        }
        prev = tau.table[i];
      }
      const std::uint64_t needed = k_max >= 1 ? generation_start(k_max) : 1;
      if (tau.table.size() < needed) {
        throw validation_error("tau table too short for horizon: need " + std::to_string(needed) +
                               " values");
      }
      break;
    }
    case TauRule::Kind::Synthesized:
      break;  // produced increasing by construction, revalidated after synthesis
  }
}

}  // namespace lindyn
