#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lindyn/certificates.hpp"

namespace lindyn {

/// Required gain exponent for block l: sum over l' <= l of
/// (2*block_len(l') + l').
std::int64_t required_gain_exp(const OperatorSpec& spec, std::size_t l);

/// Certified onset: the least step past which the compressed inverse action
/// on block l gains at least 2^required for every later step. Gains are
/// coupling-independent, so this is computable before the coupling schedule
/// is chosen. Certification uses the exhaustive window of one period plus
/// the exact per-period growth 2^(2*head_len).
struct GainCertificate {
  std::size_t block = 0;
  std::int64_t required_exp = 0;
  std::int64_t onset = 0;  // least J with gain >= 2^required for all j >= J
  std::int64_t window = 0;
  std::int64_t period_growth_exp = 0;
};

GainCertificate certify_gain_onset(const OperatorSpec& spec, std::size_t l);
GainCertificate certify_gain_onset(const OperatorSpec& spec, std::size_t l,
                                   std::int64_t required_exp);

/// Coupling schedule synthesized to make the inverse starve: each value is
/// the least integer meeting both displayed inequalities and strict growth,
/// tagged with the constraint that bound it. Beyond `limit` the schedule
/// continues by +1 steps (tagged monotone-extension).
struct TauSchedule {
  std::vector<std::int64_t> values;
  std::vector<std::string> binding;
  std::int64_t exact_limit = 0;  // values with index <= this are synthesized
};

TauSchedule synthesize_tau(const OperatorSpec& structure, std::int64_t limit);

/// Default synthesis horizon when none is requested.
std::int64_t default_tau_limit(const OperatorSpec& structure);

/// Applies a synthesized schedule to a spec whose tau rule asked for it.
void finalize_synthesized_tau(OperatorSpec& spec);

/// Inverse-orbit scarcity of returns: the share of steps j < horizon at
/// which ||T^-j x|| stays above three quarters of the anchor block mass.
/// The anchor is the first block l >= 1 holding at least 2^-l of the mass
/// of x outside block 0. Chain records are extracted when the defining
/// minima are realized below the horizon; the trace reports, it does not
/// assert.
struct ScarcityTrace {
  std::size_t anchor_block = 0;
  Dyadic anchor_mass;        // ||P_anchor x||
  std::uint64_t horizon = 0;
  std::uint64_t hits = 0;    // #{j < horizon : ||T^-j x|| >= (3/4) anchor_mass}
  struct ChainStep {
    std::uint64_t step = 0;       // j_m
    std::int64_t fanout = 0;      // s_m
    std::size_t block = 0;        // l_m
    bool mass_floor_ok = false;   // 2^{S_{l_m}} ||P_{l_m} x|| >= anchor_mass
  };
  std::vector<ChainStep> chain;
  std::vector<Dyadic> norms;  // filled only when requested
};

ScarcityTrace scarcity_profile(const OperatorSpec& spec, const FinVec& x,
                               std::uint64_t horizon, bool keep_norms = false);

/// Exact norms ||T^-j e_{block_start(l)}|| for j < horizon, with the gain
/// floor 2^(head*floor(j/len) - tail) asserted along the way.
struct GrowthCurve {
  std::vector<Dyadic> norms;
  bool floor_ok = false;
};

GrowthCurve inverse_growth_curve(const OperatorSpec& spec, std::size_t l,
                                 std::uint64_t horizon);

}  // namespace lindyn
