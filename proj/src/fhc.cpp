#include "lindyn/fhc.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace lindyn {

namespace {

// --- deterministic enumeration -------------------------------------------

// Nonzero scalars of a given weight = bitlen(|mantissa|) + |exponent|,
// mantissa odd. Ascending mantissa, negative exponent first, + before -.
void scalars_of_weight(std::int64_t weight, std::vector<Dyadic>& out) {
  for (std::int64_t bits = 1; bits <= weight; ++bits) {
    const std::int64_t e = weight - bits;
    std::vector<std::int64_t> exps;
    if (e == 0) {
      exps = {0};
    } else {
      exps = {-e, e};
    }
    for (std::int64_t exp : exps) {
      for (std::int64_t m = (std::int64_t(1) << (bits - 1)) | 1;
           m < (std::int64_t(1) << bits); m += 2) {
        out.push_back(Dyadic::scaled(m, exp));
        out.push_back(Dyadic::scaled(-m, exp));
      }
    }
  }
}

// All vectors of exact total weight w with support indices >= min_index,
// where an entry at index i with scalar weight cw contributes 1 + i + cw.
void vectors_of_weight(std::int64_t w, std::uint64_t min_index,
                       std::vector<FinVec::Entry>& stack, std::vector<FinVec>& out) {
  if (w == 0) {
    out.push_back(FinVec::from_entries(stack));
    return;
  }
  for (std::uint64_t i = min_index; static_cast<std::int64_t>(i) + 2 <= w; ++i) {
    for (std::int64_t cw = 1; cw <= w - 1 - static_cast<std::int64_t>(i); ++cw) {
      std::vector<Dyadic> coeffs;
      scalars_of_weight(cw, coeffs);
      for (const Dyadic& c : coeffs) {
        stack.push_back({i, c});
        vectors_of_weight(w - 1 - static_cast<std::int64_t>(i) - cw, i + 1, stack, out);
        stack.pop_back();
      }
    }
  }
}

}  // namespace

std::vector<FinVec> corpus_stream_prefix(std::size_t count) {
  std::vector<FinVec> out;
  std::vector<FinVec::Entry> stack;
  for (std::int64_t w = 0; out.size() < count; ++w) {
    vectors_of_weight(w, 0, stack, out);
    if (w > 64) throw budget_error("corpus enumeration weight runaway");
  }
  out.resize(count);
  return out;
}

DenseCorpus corpus_generate(const OperatorSpec& spec, int j_max) {
  DenseCorpus corpus;
  std::deque<FinVec> deferred;
  std::vector<FinVec> buffer;
  std::vector<FinVec::Entry> stack;
  std::int64_t next_weight = 0;
  std::size_t buffer_pos = 0;
  for (int j = 1; j <= j_max; ++j) {
    const std::uint64_t gen_blocks = generation_start(j + 1);
    if (gen_blocks > spec.num_blocks()) {
      throw horizon_error("corpus degree bound needs block " + std::to_string(gen_blocks) +
                          " below the horizon");
    }
    const std::uint64_t degree_cap = spec.block_start(static_cast<std::size_t>(gen_blocks));
    auto fits = [&](const FinVec& y) {
      return y.is_zero() || y.support_max() < degree_cap;
    };
    bool assigned = false;
    for (auto it = deferred.begin(); it != deferred.end(); ++it) {
      if (fits(*it)) {
        corpus.targets.push_back(*it);
        deferred.erase(it);
        assigned = true;
        break;
      }
    }
    while (!assigned) {
      if (buffer_pos == buffer.size()) {
        buffer.clear();
        buffer_pos = 0;
        vectors_of_weight(next_weight++, 0, stack, buffer);
        if (next_weight > 64) throw budget_error("corpus enumeration weight runaway");
        continue;
      }
      FinVec y = buffer[buffer_pos++];
      if (fits(y)) {
        corpus.targets.push_back(std::move(y));
        assigned = true;
      } else {
        deferred.push_back(std::move(y));
      }
    }
  }
  return corpus;
}

namespace {

// Smallest t with value <= 2^t; requires value > 0.
std::int64_t min_pow2_cover(const Dyadic& value) {
  const std::int64_t f = value.floor_log2_abs();
  return value == Dyadic::pow2(f) ? f : f + 1;
}

// Largest coupling exponent among parent slots below block 2^j.
std::int64_t coupling_sup_exp(const OperatorSpec& spec, int j) {
  const std::uint64_t hi = generation_start(j + 1);  // n_{j+1} = 2^j
  if (hi > spec.tau_count()) {
    throw horizon_error("coupling exponents beyond horizon for target " + std::to_string(j));
  }
  return spec.tau(hi - 1);  // increasing, so the sup is the last one
}

// Basis decay over one period window of block n, from step 0.
bool block_decay_window_ok(const OperatorSpec& spec, std::size_t n) {
  const std::int64_t window = 2 * spec.block_len(n);
  OrbitWalker w(spec, FinVec::basis(spec.block_start(n)));
  for (std::int64_t k = 0; k < window; ++k) {
    std::int64_t q = (-spec.decay_slope_num() * k) / spec.decay_slope_den();
    if ((-spec.decay_slope_num() * k) % spec.decay_slope_den() != 0 &&
        (-spec.decay_slope_num() * k) < 0)
      --q;
    if (compare_norm(w.current(), Dyadic::pow2(q)) > 0) {
      if (!le_pow2_rational(w.current().norm_l1(), -spec.decay_slope_num() * k,
                            spec.decay_slope_den())) {
        return false;
      }
    }
    w.step_forward();
  }
  return true;
}

}  // namespace

FhcPlan choose_plan(const OperatorSpec& spec, const DenseCorpus& corpus, int target_count,
                    std::uint64_t horizon) {
  if (target_count < 1 ||
      static_cast<std::size_t>(target_count) > corpus.targets.size()) {
    throw validation_error("target count outside the corpus");
  }
  FhcPlan plan;
  plan.target_count = target_count;
  plan.horizon = horizon;
  const std::int64_t q = spec.decay_slope_num();
  const std::int64_t p = spec.decay_slope_den();

  std::vector<SeparatedFamily::Pair> pairs;
  for (int j = 1; j <= target_count; ++j) {
    if (j > spec.max_generation()) {
      throw horizon_error("target generation " + std::to_string(j) + " beyond horizon");
    }
    FhcPlan::PerTarget t;
    t.target = corpus.targets[static_cast<std::size_t>(j - 1)];
    t.target_norm = t.target.norm_l1();
    const GenerationParams g = spec.generation_params(j);
    const std::int64_t tau_sup = coupling_sup_exp(spec, j);

    // Lead periods: the parking depth must absorb the target norm, the
    // coupling sup and the 2^-j budget.
    std::int64_t lead = 1;
    auto lead_ok = [&](std::int64_t n2) {
      const std::int64_t e =
          2 * n2 * g.block_len - (2 * n2 + 1) * g.head_len - j - tau_sup;
      return t.target_norm <= Dyadic::pow2(e);
    };
    while (!lead_ok(lead)) {
      ++lead;
      if (lead > (std::int64_t(1) << 40)) {
        throw horizon_error("lead periods diverge for target " + std::to_string(j));
      }
    }
    t.lead = lead;

    // Decay onset over the early basis vectors feeds the separation floor.
    std::int64_t k0_max = 0;
    for (std::uint64_t r = 0; r < generation_start(j + 1); ++r) {
      const DecayCertificate cert =
          decay_certificate(spec, FinVec::basis(spec.block_start(r)));
      k0_max = std::max(k0_max, cert.k0);
    }
    t.decay_start = k0_max;

    const std::int64_t parked = (2 * lead + 1) * g.block_len;
    const std::int64_t cover = t.target_norm.is_zero() ? INT64_MIN / 4
                                                       : min_pow2_cover(t.target_norm);
    std::int64_t sep = parked + 1;
    sep = std::max(sep, parked + (2 * lead + 1) * g.head_len + 1 + j + tau_sup + cover);
    if (!t.target_norm.is_zero()) {
      // slope * s >= cover + (2N+1)head + 1 + tau_sup + j
      const std::int64_t rhs = cover + (2 * lead + 1) * g.head_len + 1 + tau_sup + j;
      sep = std::max(sep, (rhs * p + q - 1) / q);
    }
    sep = std::max(sep, parked + k0_max);
    auto sep_ok = [&](std::int64_t s) {
      if (s <= parked) return false;
      if (s - parked < k0_max) return false;
      const std::int64_t e2 = s - parked - (2 * lead + 1) * g.head_len - 1 - j - tau_sup;
      if (!(t.target_norm <= Dyadic::pow2(e2))) return false;
      // target_norm * 2^{(2N+1)head + 1 + tau_sup + j} <= 2^{slope*s}
      Dyadic lhs = t.target_norm;
      lhs.mul_pow2((2 * lead + 1) * g.head_len + 1 + tau_sup + j);
      return le_pow2_rational(lhs, q * s, p);
    };
    while (!sep_ok(sep)) ++sep;
    t.separation = static_cast<std::uint64_t>(sep);

    std::int64_t flo = std::max<std::int64_t>(
        parked + 1, parked + (2 * lead + 1) * g.head_len + 2 + j + tau_sup + cover);
    auto floor_ok = [&](std::int64_t l) {
      if (l <= parked) return false;
      const std::int64_t e3 = l - parked - (2 * lead + 1) * g.head_len - 2 - j - tau_sup;
      return t.target_norm <= Dyadic::pow2(e3);
    };
    while (!floor_ok(flo)) ++flo;
    t.floor = static_cast<std::uint64_t>(flo);

    pairs.push_back({t.separation, t.floor});
    plan.per.push_back(std::move(t));
  }

  plan.family = SeparatedFamily::build(pairs, horizon);

  // Hosting generations per visit time, smallest first; the window decay
  // scan is cached per generation since it does not depend on m.
  std::map<std::pair<int, int>, bool> window_cache;
  for (int j = 1; j <= target_count; ++j) {
    FhcPlan::PerTarget& t = plan.per[static_cast<std::size_t>(j - 1)];
    const GenerationParams g = spec.generation_params(j);
    const std::uint64_t copies = generation_start(j + 1);  // blocks used per copy
    for (std::uint64_t m : plan.family.members(static_cast<std::size_t>(j), horizon)) {
      int k = j + 2;  // least k with gen_start(k) > 2^j, so the copy fits
      bool placed = false;
      for (; k <= spec.max_generation(); ++k) {
        const GenerationParams gk = spec.generation_params(k);
        if (gk.head_len < (2 * t.lead + 1) * g.block_len) continue;
        if (gk.tail_len < static_cast<std::int64_t>(m)) continue;
        auto key = std::make_pair(j, k);
        auto it = window_cache.find(key);
        if (it == window_cache.end()) {
          bool ok = true;
          for (std::uint64_t off = 0; off < copies && ok; ++off) {
            ok = block_decay_window_ok(
                spec, static_cast<std::size_t>(generation_start(k) + off));
          }
          it = window_cache.emplace(key, ok).first;
        }
        if (!it->second) continue;
        t.hosts.emplace_back(m, k);
        placed = true;
        break;
      }
      if (!placed) {
        throw horizon_error("no hosting generation below horizon for visit time " +
                            std::to_string(m) + " of target " + std::to_string(j));
      }
    }

    // Inflated tolerance: 2^-j, the later-terms series, the earlier-terms
    // series via the slope majorant, and the truncation tail past the horizon.
    Dyadic tol = Dyadic::pow2(-j);
    tol += Dyadic::pow2(-(static_cast<std::int64_t>(t.separation) - 1));
    const std::int64_t per_step = (q * static_cast<std::int64_t>(t.separation)) / p;
    Dyadic geo = Dyadic(2 * ((p + q - 1) / q));
    geo.mul_pow2(-per_step);
    tol += geo;
    for (int jp = 1; jp <= target_count; ++jp) {
      const FhcPlan::PerTarget& u = plan.per[static_cast<std::size_t>(jp - 1)];
      if (u.target_norm.is_zero()) continue;
      Dyadic b = u.target_norm;
      const GenerationParams gp = spec.generation_params(jp);
      b.mul_pow2((2 * u.lead + 1) * (gp.block_len + gp.head_len) + 1 +
                 coupling_sup_exp(spec, jp) + 1 - static_cast<std::int64_t>(horizon));
      tol += b;
    }
    t.tolerance = tol;
  }
  return plan;
}

FinVec build_block_vector(const OperatorSpec& spec, const FhcPlan& plan, int j,
                          std::uint64_t m) {
  const FhcPlan::PerTarget& t = plan.per.at(static_cast<std::size_t>(j - 1));
  int host_gen = -1;
  for (const auto& [mm, k] : t.hosts) {
    if (mm == m) host_gen = k;
  }
  if (host_gen < 0) throw validation_error("visit time has no hosting generation in the plan");
  const GenerationParams g = spec.generation_params(j);
  const std::uint64_t base = generation_start(host_gen);
  std::vector<FinVec::Entry> out;
  for (const auto& e : t.target.entries()) {
    const std::size_t n = spec.block_of(e.index);
    const std::uint64_t b_n = spec.block_start(n);
    const std::size_t host = static_cast<std::size_t>(base) + n;
    // Placement offset from the host block end; stays inside the doubling
    // tail run by the plan inequalities.
    const std::int64_t off = static_cast<std::int64_t>(m) -
                             static_cast<std::int64_t>(e.index - b_n) -
                             2 * t.lead * g.block_len;
    if (off < 1 || off > spec.tail_len(host)) {
      throw validation_error("placement offset " + std::to_string(off) +
                             " escapes the hosting tail run (plan bug)");
    }
    const std::uint64_t idx = spec.block_end(host) - static_cast<std::uint64_t>(off);
    Dyadic c = e.coeff;
    c.mul_pow2(-off + 2 * t.lead * g.head_len + 1 +
               spec.tau(static_cast<std::uint64_t>(n)) - spec.weight_prefix_exp(n, e.index));
    out.push_back({idx, std::move(c)});
  }
  return FinVec::from_entries(std::move(out));
}

Assembled assemble(const OperatorSpec& spec, const FhcPlan& plan) {
  Assembled a;
  a.per_term_bound_ok = true;
  FinVec x;
  Dyadic tail;
  for (int j = 1; j <= plan.target_count; ++j) {
    const FhcPlan::PerTarget& t = plan.per[static_cast<std::size_t>(j - 1)];
    const GenerationParams g = spec.generation_params(j);
    Dyadic coeff = t.target_norm;
    coeff.mul_pow2((2 * t.lead + 1) * (g.block_len + g.head_len) + 1 +
                   coupling_sup_exp(spec, j));
    for (const auto& [m, k] : t.hosts) {
      const FinVec xm = build_block_vector(spec, plan, j, m);
      Dyadic bound = coeff;
      bound.mul_pow2(-static_cast<std::int64_t>(m));
      if (compare_norm(xm, bound) > 0) a.per_term_bound_ok = false;
      x = x + xm;
    }
    Dyadic tj = coeff;
    tj.mul_pow2(1 - static_cast<std::int64_t>(plan.horizon));
    tail += tj;
  }
  a.x = std::move(x);
  a.included_norm = a.x.norm_l1();
  a.tail_bound = std::move(tail);
  return a;
}

VisitReport::Visit visit_check_single(const OperatorSpec& spec, const FhcPlan& plan, int j,
                                      std::uint64_t m) {
  const FhcPlan::PerTarget& t = plan.per.at(static_cast<std::size_t>(j - 1));
  VisitReport::Visit v;
  v.step = m;
  FinVec moved_total;
  Dyadic later, earlier;
  for (int jp = 1; jp <= plan.target_count; ++jp) {
    const FhcPlan::PerTarget& u = plan.per[static_cast<std::size_t>(jp - 1)];
    for (const auto& [mm, k] : u.hosts) {
      const FinVec xm = build_block_vector(spec, plan, jp, mm);
      const FinVec moved =
          apply_power(spec, xm, static_cast<std::int64_t>(m), PowerMode::Iterative);
      moved_total = moved_total + moved;
      if (jp == j && mm == m) {
        v.case_same = dist_l1(moved, t.target);
        v.coordinate_recovery = true;
        for (const auto& e : t.target.entries()) {
          if (!(moved.coeff(e.index) == e.coeff)) v.coordinate_recovery = false;
        }
      } else if (mm > m) {
        later += moved.norm_l1();
      } else {
        earlier += moved.norm_l1();
      }
    }
  }
  v.case_later = later;
  v.case_earlier = earlier;
  v.distance = dist_l1(moved_total, t.target);
  v.pass = v.distance <= t.tolerance;
  return v;
}

VisitReport visit_check(const OperatorSpec& spec, const FhcPlan& plan, int j) {
  const FhcPlan::PerTarget& t = plan.per.at(static_cast<std::size_t>(j - 1));
  VisitReport rep;
  rep.tolerance = t.tolerance;
  rep.all_pass = true;
  for (const auto& [m, k] : t.hosts) {
    rep.visits.push_back(visit_check_single(spec, plan, j, m));
    if (!rep.visits.back().pass) rep.all_pass = false;
  }
  return rep;
}

DensityProfile density_profile(const OperatorSpec& spec, const FinVec& x, const FinVec& y,
                               const Dyadic& radius, std::uint64_t horizon) {
  if (!(radius > Dyadic(0))) throw validation_error("radius must be positive");
  DensityProfile prof;
  OrbitWalker w(spec, x);
  for (std::uint64_t n = 0; n < horizon; ++n) {
    if (compare_dist(w.current(), y, radius) <= 0) prof.visits.push_back(n);
    w.step_forward();
  }
  prof.curve = prefix_density(prof.visits, horizon);
  return prof;
}

}  // namespace lindyn
