#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lindyn/fhc.hpp"
#include "lindyn/inverse_analysis.hpp"

namespace lindyn {

/// Batch kernels run either on the serial reference path or OpenMP-parallel
/// across independent tasks. Results are written into task-indexed slots,
/// so the two paths are bit-identical and tests assert exactly that.
enum class Exec { Serial, Parallel };

struct BatchOutcome {
  bool pass = true;
  std::vector<std::string> failures;  // one witness per failing task
};

/// T^-1 then T (and T then T^-1) reproduce every basis vector below `dim`.
BatchOutcome roundtrip_basis_batch(const OperatorSpec& spec, std::uint64_t dim, Exec exec);

/// Section scalar identity on a batch of vectors, one enclosing block each.
BatchOutcome section_period_batch(const OperatorSpec& spec, const std::vector<FinVec>& vecs,
                                  const std::vector<std::size_t>& blocks, Exec exec);

/// Dense-section oracle against the sparse power path, one signed power per
/// vector. Matrix powers run by repeated exact mat-vec.
BatchOutcome power_oracle_batch(const OperatorSpec& spec, std::size_t section_blocks,
                                const std::vector<FinVec>& vecs,
                                const std::vector<std::int64_t>& powers, Exec exec);

/// One-period basis decay windows for a run of blocks (used by the plan
/// search and the generation certificates).
BatchOutcome basis_decay_batch(const OperatorSpec& spec,
                               const std::vector<std::size_t>& blocks, Exec exec);

/// Pairwise disjointness/separation/floor scan over family members.
BatchOutcome separation_scan_batch(const SeparatedFamily& family, Exec exec);

/// ||T^-1 x|| <= 2||x|| over a batch of vectors.
BatchOutcome contraction_batch(const OperatorSpec& spec, const std::vector<FinVec>& vecs,
                               Exec exec);

/// Visit checks across the visit times of target j.
VisitReport visit_check_batch(const OperatorSpec& spec, const FhcPlan& plan, int j,
                              Exec exec);

/// Decay-certificate spot checks: recompute the orbit norm at the given
/// steps from scratch and re-verify the certified bound.
BatchOutcome decay_spot_check_batch(const OperatorSpec& spec, const FinVec& y,
                                    const DecayCertificate& cert,
                                    const std::vector<std::int64_t>& steps, Exec exec);

}  // namespace lindyn
