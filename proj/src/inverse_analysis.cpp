#include "lindyn/inverse_analysis.hpp"

#include <algorithm>
#include <map>

namespace lindyn {

std::int64_t required_gain_exp(const OperatorSpec& spec, std::size_t l) {
  std::int64_t s = 0;
  for (std::size_t lp = 0; lp <= l; ++lp) {
    s = checked_add_exp(s, checked_add_exp(2 * spec.block_len(lp),
                                           static_cast<std::int64_t>(lp)));
  }
  return s;
}

GainCertificate certify_gain_onset(const OperatorSpec& spec, std::size_t l) {
  return certify_gain_onset(spec, l, required_gain_exp(spec, l));
}

GainCertificate certify_gain_onset(const OperatorSpec& spec, std::size_t l,
                                   std::int64_t required_exp) {
  GainCertificate cert;
  cert.block = l;
  cert.required_exp = required_exp;
  const std::int64_t len = spec.block_len(l);
  const std::int64_t growth = 2 * spec.head_len(l);
  cert.window = 2 * len;
  cert.period_growth_exp = growth;
  // Exhaustive window of one period; beyond it every gain repeats shifted
  // by the exact growth exponent, so the last failing step per residue is
  // closed-form.
  std::int64_t last_fail = -1;
  for (std::int64_t r = 0; r < cert.window; ++r) {
    std::int64_t e = gain_exponent(spec, l, r, 0);
    for (std::int64_t u = 1; u < len; ++u) e = std::min(e, gain_exponent(spec, l, r, u));
    const std::int64_t deficit = required_exp - e;
    if (deficit <= 0) continue;
    // gain exponent at r + window*t is e + growth*t; fails while t < ceil(deficit/growth)
    const std::int64_t t = (deficit + growth - 1) / growth;
    last_fail = std::max(last_fail, r + cert.window * (t - 1));
  }
  cert.onset = last_fail + 1;
  return cert;
}

std::int64_t default_tau_limit(const OperatorSpec& structure) {
  return std::min<std::int64_t>(static_cast<std::int64_t>(structure.tau_count()) - 1, 16);
}

TauSchedule synthesize_tau(const OperatorSpec& structure, std::int64_t limit) {
  TauSchedule ts;
  const std::int64_t count = static_cast<std::int64_t>(structure.tau_count());
  limit = std::min(limit, count - 1);
  if (limit < 0) throw validation_error("tau synthesis needs a nonnegative limit");
  ts.exact_limit = limit;
  ts.values.reserve(static_cast<std::size_t>(count));
  ts.binding.reserve(static_cast<std::size_t>(count));
  std::int64_t prev = 0;
  for (std::int64_t l = 0; l <= limit; ++l) {
    const std::size_t lb = static_cast<std::size_t>(l);
    const std::int64_t s_l = required_gain_exp(structure, lb);
    const std::int64_t onset = certify_gain_onset(structure, lb, s_l).onset;
    const std::int64_t growth_req = checked_add_exp(
        s_l, checked_add_exp(2 * structure.head_len(lb),
                             checked_add_exp(structure.tail_len(lb), 2 * l + 3)));
    if (l >= 63) throw arithmetic_fault("tau synthesis exponent overflow");
    if (onset > (INT64_MAX >> l) / 2) throw arithmetic_fault("tau synthesis overflow");
    const std::int64_t onset_req = checked_add_exp(
        (std::int64_t(1) << l) * onset,
        checked_add_exp(l, checked_add_exp(s_l, checked_add_exp(structure.tail_len(lb), 3))));
    std::int64_t v = std::max({growth_req, onset_req, prev + 1, std::int64_t(1)});
    const char* tag = "monotonicity";
    if (v == growth_req) tag = "growth-inequality";
    if (v == onset_req) tag = "onset-inequality";
    // Substitution self-check of both inequalities.
    if (v < growth_req || (std::int64_t(1) << l) * onset > v - l - s_l - structure.tail_len(lb) - 3) {
      throw arithmetic_fault("tau synthesis failed substitution check at l=" + std::to_string(l));
    }
    ts.values.push_back(v);
    ts.binding.emplace_back(tag);
    prev = v;
  }
  for (std::int64_t l = limit + 1; l < count; ++l) {
    ts.values.push_back(++prev);
    ts.binding.emplace_back("monotone-extension");
  }
  return ts;
}

void finalize_synthesized_tau(OperatorSpec& spec) {
  if (spec.schedule().tau.kind != TauRule::Kind::Synthesized) return;
  std::int64_t limit = spec.schedule().tau.synth_limit;
  if (limit < 0) limit = default_tau_limit(spec);
  spec.replace_tau(synthesize_tau(spec, limit).values);
}

namespace {

Dyadic block_mass(const OperatorSpec& spec, const FinVec& x, std::size_t n) {
  return project_block(spec, x, n).norm_l1();
}

// Support blocks of x, ascending.
std::vector<std::size_t> support_blocks(const OperatorSpec& spec, const FinVec& x) {
  std::vector<std::size_t> out;
  for (const auto& e : x.entries()) {
    const std::size_t n = spec.block_of(e.index);
    if (out.empty() || out.back() != n) out.push_back(n);
  }
  return out;
}

// Fanout s >= 1 with parent^s(b) == l, or -1.
std::int64_t fanout_to(const OperatorSpec& spec, std::size_t b, std::size_t l) {
  std::int64_t s = 0;
  while (b > l) {
    b = spec.parent(b);
    ++s;
    if (b == l) return s;
  }
  return -1;
}

}  // namespace

ScarcityTrace scarcity_profile(const OperatorSpec& spec, const FinVec& x,
                               std::uint64_t horizon, bool keep_norms) {
  ScarcityTrace trace;
  trace.horizon = horizon;
  FinVec tail = x - project_block(spec, x, 0);
  if (tail.is_zero()) {
    throw validation_error("anchor undefined: vector is supported in block 0 only");
  }
  const Dyadic tail_mass = tail.norm_l1();
  const std::vector<std::size_t> blocks = support_blocks(spec, tail);
  std::size_t anchor = 0;
  Dyadic anchor_mass;
  for (std::size_t b : blocks) {
    if (b == 0) continue;
    Dyadic mass = block_mass(spec, x, b);
    Dyadic floor = tail_mass;
    floor.mul_pow2(-static_cast<std::int64_t>(b));
    if (mass >= floor) {
      anchor = b;
      anchor_mass = std::move(mass);
      break;
    }
  }
  if (anchor == 0) throw validation_error("no anchor block found");
  trace.anchor_block = anchor;
  trace.anchor_mass = anchor_mass;

  Dyadic threshold = anchor_mass * Dyadic::scaled(3, -2);
  {
    OrbitWalker w(spec, x);
    for (std::uint64_t j = 0; j < horizon; ++j) {
      if (keep_norms) trace.norms.push_back(w.current().norm_l1());
      if (compare_norm(w.current(), threshold) >= 0) ++trace.hits;
      w.step_inverse();
    }
  }

  // Chain extraction: repeat the proof's selection while its minima are
  // realized below the horizon.
  std::size_t l_prev = anchor;
  for (;;) {
    const FinVec anchor_part = project_block(spec, x, l_prev);
    if (anchor_part.is_zero()) break;
    // Preimage parts of l_prev among the support blocks, grouped by fanout.
    std::map<std::int64_t, FinVec> parts;
    for (std::size_t b : support_blocks(spec, x)) {
      if (b == 0 || b <= l_prev) continue;
      const std::int64_t s = fanout_to(spec, b, l_prev);
      if (s >= 1) {
        FinVec pb = project_block(spec, x, b);
        auto [it, fresh] = parts.try_emplace(s, std::move(pb));
        if (!fresh) it->second = it->second + pb;
      }
    }
    if (parts.empty()) break;
    std::map<std::int64_t, OrbitWalker> walkers;
    for (auto& [s, y] : parts) walkers.emplace(s, OrbitWalker(spec, y));
    OrbitWalker anchor_walker(spec, anchor_part);
    bool found = false;
    std::uint64_t j_m = 0;
    std::int64_t s_m = 0;
    for (std::uint64_t j = 0; j < horizon && !found; ++j) {
      const Dyadic a_j = project_block(spec, anchor_walker.current(), l_prev).norm_l1();
      Dyadic total;
      for (auto& [s, w] : walkers) {
        total += project_block(spec, w.current(), l_prev).norm_l1();
      }
      Dyadic quarter = a_j;
      quarter.mul_pow2(-2);
      if (total > quarter) {
        found = true;
        j_m = j;
        for (auto& [s, w] : walkers) {
          Dyadic share = a_j;
          share.mul_pow2(-(s + 2));
          if (project_block(spec, w.current(), l_prev).norm_l1() > share) {
            s_m = s;
            break;
          }
        }
        break;
      }
      anchor_walker.step_inverse();
      for (auto& [s, w] : walkers) w.step_inverse();
    }
    if (!found || s_m == 0) break;
    // Smallest preimage block at fanout s_m clearing its pigeonhole share.
    const Dyadic a_jm = project_block(spec, anchor_walker.current(), l_prev).norm_l1();
    std::size_t l_m = 0;
    for (std::size_t b : support_blocks(spec, x)) {
      if (b == 0 || b <= l_prev || fanout_to(spec, b, l_prev) != s_m) continue;
      const FinVec moved =
          apply_power(spec, project_block(spec, x, b), -static_cast<std::int64_t>(j_m),
                      PowerMode::Iterative);
      Dyadic share = a_jm;
      share.mul_pow2(-(static_cast<std::int64_t>(b) + s_m + 3));
      if (project_block(spec, moved, l_prev).norm_l1() > share) {
        l_m = b;
        break;
      }
    }
    if (l_m == 0) break;
    ScarcityTrace::ChainStep step;
    step.step = j_m;
    step.fanout = s_m;
    step.block = l_m;
    Dyadic scaled_mass = block_mass(spec, x, l_m);
    scaled_mass.mul_pow2(required_gain_exp(spec, l_m));
    step.mass_floor_ok = scaled_mass >= anchor_mass;
    trace.chain.push_back(step);
    l_prev = l_m;
  }
  return trace;
}

GrowthCurve inverse_growth_curve(const OperatorSpec& spec, std::size_t l,
                                 std::uint64_t horizon) {
  GrowthCurve curve;
  curve.floor_ok = true;
  const std::int64_t len = spec.block_len(l);
  const std::int64_t head = spec.head_len(l);
  const std::int64_t tail = spec.tail_len(l);
  OrbitWalker w(spec, FinVec::basis(spec.block_start(l)));
  for (std::uint64_t j = 0; j < horizon; ++j) {
    curve.norms.push_back(w.current().norm_l1());
    const std::int64_t floor_exp =
        head * (static_cast<std::int64_t>(j) / len) - tail;
    if (compare_norm(w.current(), Dyadic::pow2(floor_exp)) < 0) curve.floor_ok = false;
    w.step_inverse();
  }
  return curve;
}

}  // namespace lindyn
