#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lindyn/certificates.hpp"
#include "lindyn/separated_sets.hpp"

namespace lindyn {

/// Deterministic dense enumeration of finitely supported dyadic vectors,
/// reindexed so target j keeps its degree below block_start(2^j).
struct DenseCorpus {
  std::vector<FinVec> targets;  // targets[j-1] is the j-th target
};

DenseCorpus corpus_generate(const OperatorSpec& spec, int j_max);

/// Raw enumeration stream (before degree reindexing), for tests: the first
/// `count` vectors in canonical order.
std::vector<FinVec> corpus_stream_prefix(std::size_t count);

/// Constants making the staged copies of each target recoverable: per
/// target, the lead periods N, the separation radius s and floor l of its
/// visit set, and per visit time m the hosting generation k_m.
struct FhcPlan {
  int target_count = 0;       // J
  std::uint64_t horizon = 0;  // H

  struct PerTarget {
    FinVec target;
    Dyadic target_norm;
    std::int64_t lead = 1;           // N_j
    std::uint64_t separation = 0;    // s_j
    std::uint64_t floor = 0;         // l_j
    std::int64_t decay_start = 0;    // max k0 over the early basis certificates
    Dyadic tolerance;                // inflated visit tolerance
    std::vector<std::pair<std::uint64_t, int>> hosts;  // (m, k_m), m below horizon
  };
  std::vector<PerTarget> per;
  SeparatedFamily family;
};

/// Smallest-first search for the plan constants, every inequality checked
/// in exact arithmetic. Throws horizon_error naming the first condition
/// that cannot be met below the horizon.
FhcPlan choose_plan(const OperatorSpec& spec, const DenseCorpus& corpus, int target_count,
                    std::uint64_t horizon);

/// The staged copy of target j parked for visit time m: each target
/// coefficient is planted near the end of a hosting block so that m forward
/// steps recover it exactly.
FinVec build_block_vector(const OperatorSpec& spec, const FhcPlan& plan, int j,
                          std::uint64_t m);

struct Assembled {
  FinVec x;
  Dyadic included_norm;
  Dyadic tail_bound;       // analytic bound on the terms past the horizon
  bool per_term_bound_ok = false;
};

Assembled assemble(const OperatorSpec& spec, const FhcPlan& plan);

struct VisitReport {
  struct Visit {
    std::uint64_t step = 0;  // m
    Dyadic distance;         // ||T^m x - target||, exact
    Dyadic case_same;        // distance contribution of the m-term itself
    Dyadic case_later;       // sum over terms parked after m
    Dyadic case_earlier;     // sum over terms parked before m
    bool coordinate_recovery = false;  // target coords reproduced exactly
    bool pass = false;
  };
  std::vector<Visit> visits;
  Dyadic tolerance;
  bool all_pass = false;
};

VisitReport::Visit visit_check_single(const OperatorSpec& spec, const FhcPlan& plan, int j,
                                      std::uint64_t m);
VisitReport visit_check(const OperatorSpec& spec, const FhcPlan& plan, int j);

struct DensityProfile {
  DensityCurve curve;
  std::vector<std::uint64_t> visits;
};

/// Exact membership scan of the forward orbit in the radius-ball of y.
DensityProfile density_profile(const OperatorSpec& spec, const FinVec& x, const FinVec& y,
                               const Dyadic& radius, std::uint64_t horizon);

}  // namespace lindyn
