#include "lindyn/certificates.hpp"

#include <algorithm>

namespace lindyn {

namespace {

// Exact test ||x|| <= 2^(num/den) with integer-exponent envelopes first.
bool norm_le_pow2_rational(const FinVec& x, std::int64_t num, std::int64_t den) {
  if (x.is_zero()) return true;
  std::int64_t q = num / den;
  if (num % den != 0 && ((num < 0) != (den < 0))) --q;
  if (compare_norm(x, Dyadic::pow2(q)) <= 0) return true;
  if (compare_norm(x, Dyadic::pow2(q + 1)) > 0) return false;
  return le_pow2_rational(x.norm_l1(), num, den);
}

}  // namespace

CheckResult eigen_period_check(const OperatorSpec& spec, std::size_t n,
                               std::span<const std::uint64_t> coords) {
  // Compatibility between block n and its parent, checked before any orbit.
  const Dyadic rho = spec.recurrence_inv(n) * spec.interior_product(n);
  if (n >= 1) {
    const std::size_t p = spec.parent(n);
    const Dyadic rho_p = spec.recurrence_inv(p) * spec.interior_product(p);
    const std::int64_t len_n = spec.block_len(n);
    const std::int64_t len_p = spec.block_len(p);
    if (len_p <= 0 || len_n % len_p != 0) {
      return {false, "block " + std::to_string(n) + ": length not a multiple of parent length"};
    }
    const Dyadic lifted = rho_p.pow(static_cast<std::uint64_t>(len_n / len_p));
    if (!(rho == lifted)) {
      return {false, "block " + std::to_string(n) + ": compatibility fails, " + rho.to_string() +
                         " != " + lifted.to_string()};
    }
  }
  const Dyadic scalar = rho * rho;
  const std::int64_t period = 2 * spec.block_len(n);
  const std::uint64_t lo = spec.block_start(n);
  const std::uint64_t hi = spec.block_end(n);
  for (std::uint64_t k : coords) {
    if (k < lo || k >= hi) {
      return {false, "coordinate " + std::to_string(k) + " outside block " + std::to_string(n)};
    }
    OrbitWalker w(spec, FinVec::basis(k));
    for (std::int64_t i = 0; i < period; ++i) w.step_forward();
    FinVec expected = FinVec::basis(k);
    expected.scale(scalar);
    if (!(w.current() == expected)) {
      return {false, "coordinate " + std::to_string(k) + ": orbit after " +
                         std::to_string(period) + " steps is not " + scalar.to_string() +
                         " * e_k"};
    }
  }
  return {true, ""};
}

CheckResult section_period_check(const OperatorSpec& spec, const FinVec& x, std::size_t n) {
  if (!x.is_zero() && x.support_max() >= spec.block_end(n)) {
    throw validation_error("support leaves the section of block " + std::to_string(n));
  }
  if (x.is_zero()) return {true, ""};
  const std::int64_t period = 2 * spec.block_len(n);
  OrbitWalker w(spec, x);
  for (std::int64_t i = 0; i < period; ++i) w.step_forward();
  FinVec expected = x;
  if (spec.recurrence() == RecurrenceKind::Unit) {
    expected.scale_pow2(-2 * spec.head_len(n));
  }
  if (!(w.current() == expected)) {
    return {false, "section orbit after " + std::to_string(period) +
                       " steps differs from the exact scalar multiple"};
  }
  return {true, ""};
}

InvertibilityReport invertibility_check(const OperatorSpec& spec, std::uint64_t limit) {
  InvertibilityReport rep;
  if (spec.recurrence() != RecurrenceKind::Unit) {
    rep.detail = "non-unit recurrence";
    return rep;
  }
  const std::uint64_t m_hi = std::min<std::uint64_t>(limit, spec.tau_count() - 1);
  std::int64_t prev = 0;
  for (std::uint64_t m = 0; m <= m_hi; ++m) {
    const std::int64_t t = spec.tau(m);
    if (t < 1 || (m > 0 && t <= prev)) {
      rep.first_failing_index = static_cast<std::int64_t>(m);
      rep.detail = "coupling exponents not strictly increasing positive at " + std::to_string(m);
      return rep;
    }
    if (t < static_cast<std::int64_t>(m)) {
      rep.first_failing_index = static_cast<std::int64_t>(m);
      rep.detail = "coupling decay fails at " + std::to_string(m) + ": 2^-" + std::to_string(t) +
                   " > 2^-" + std::to_string(m);
      return rep;
    }
    prev = t;
  }
  const std::size_t l_hi =
      std::min<std::size_t>(static_cast<std::size_t>(limit), spec.num_blocks() - 1);
  for (std::size_t l = 1; l <= l_hi; ++l) {
    Dyadic sum;
    Dyadic prod(1);
    std::size_t a = l;
    const std::int64_t depth = spec.depth_to_root(l);
    for (std::int64_t m = 0; m < depth; ++m) {
      prod *= spec.coupling(a);
      a = spec.parent(a);
      sum += prod;
    }
    if (sum > Dyadic(2)) {
      rep.first_failing_index = static_cast<std::int64_t>(l);
      rep.detail = "chain-product sum exceeds 2 at block " + std::to_string(l) + ": " +
                   sum.to_string();
      return rep;
    }
  }
  rep.pass = true;
  return rep;
}

DecayCertificate decay_certificate(const OperatorSpec& spec, const FinVec& y,
                                   std::int64_t scan_cap) {
  DecayCertificate cert;
  cert.slope_num = spec.decay_slope_num();
  cert.slope_den = spec.decay_slope_den();
  if (y.is_zero()) {
    cert.period_scalar = Dyadic(1);
    cert.period_factor_dominates = true;
    return cert;
  }
  const std::size_t n = spec.block_of(y.support_max());
  cert.section_block = n;
  const std::int64_t period = 2 * spec.block_len(n);
  const std::int64_t head = spec.head_len(n);
  cert.period_scalar = Dyadic::pow2(-2 * head);
  // Per-period decay must dominate the bound's per-period step.
  cert.period_factor_dominates = 2 * head * cert.slope_den >= cert.slope_num * period;
  if (!cert.period_factor_dominates) {
    throw validation_error("period factor does not dominate the decay slope");
  }
  if (scan_cap < 0) scan_cap = std::max<std::int64_t>(16 * period, 4096);

  OrbitWalker w(spec, y);
  std::int64_t last_fail = -1;
  for (std::int64_t k = 0;; ++k) {
    if (!norm_le_pow2_rational(w.current(), -cert.slope_num * k, cert.slope_den)) {
      last_fail = k;
    }
    if (k - last_fail >= period) break;  // window [last_fail+1, last_fail+period] passed
    if (k >= scan_cap) {
      throw budget_error("no decay window within scan budget of " + std::to_string(scan_cap) +
                         " steps");
    }
    w.step_forward();
  }
  cert.k0 = last_fail + 1;
  cert.window_lo = cert.k0;
  cert.window_hi = cert.k0 + period;
  return cert;
}

BasisDecayCertificate basis_decay_certificate(const OperatorSpec& spec, int k_min,
                                              std::uint64_t count) {
  if (count < 1) throw validation_error("basis decay certificate needs count >= 1");
  // Recomputed proof-side constant: sup over the first count+1 basis orbits
  // of one full period each.
  Dyadic c_sup;
  for (std::uint64_t m = 0; m <= count; ++m) {
    const std::int64_t window = 2 * spec.block_len(static_cast<std::size_t>(m));
    OrbitWalker w(spec, FinVec::basis(spec.block_start(static_cast<std::size_t>(m))));
    for (std::int64_t j = 0; j < window; ++j) {
      const Dyadic nb = w.current().norm_l1();
      if (nb > c_sup) c_sup = nb;
      w.step_forward();
    }
  }
  const Dyadic gate = (c_sup + Dyadic(1)).pow(3);
  for (int k = std::max(k_min, 1); k <= spec.max_generation(); ++k) {
    const std::uint64_t gen_blocks = generation_start(k + 1) - generation_start(k);
    if (gen_blocks <= count) continue;
    const GenerationParams g = spec.generation_params(k);
    if (!(gate < Dyadic::pow2(g.head_len))) continue;
    BasisDecayCertificate cert;
    cert.generation = k;
    cert.window = 2 * g.block_len;
    cert.early_orbit_sup = c_sup;
    bool ok = true;
    for (std::uint64_t off = 0; off < count && ok; ++off) {
      const std::size_t n = static_cast<std::size_t>(generation_start(k) + off);
      cert.blocks.push_back(n);
      OrbitWalker w(spec, FinVec::basis(spec.block_start(n)));
      for (std::int64_t j = 0; j < cert.window; ++j) {
        if (!norm_le_pow2_rational(w.current(), -spec.decay_slope_num() * j,
                                   spec.decay_slope_den())) {
          ok = false;
          break;
        }
        w.step_forward();
      }
    }
    if (ok) return cert;
  }
  throw horizon_error("no certifiable generation within horizon k_max=" +
                      std::to_string(spec.max_generation()));
}

CheckResult inverse_contraction_check(const OperatorSpec& spec, const FinVec& x) {
  const FinVec inv = apply_inverse(spec, x);
  Dyadic bound = x.norm_l1();
  bound.mul_pow2(1);
  if (compare_norm(inv, bound) > 0) {
    return {false, "||T^-1 x|| = " + inv.norm_l1().to_string() + " exceeds 2||x|| = " +
                       bound.to_string()};
  }
  return {true, ""};
}

CheckResult cross_block_check(const OperatorSpec& spec, std::size_t l, std::int64_t s,
                              std::size_t n, std::int64_t j, const FinVec& x) {
  if (n == 0 || s < 1) throw validation_error("cross-block check needs n >= 1, s >= 1");
  std::size_t a = n;
  for (std::int64_t i = 0; i < s; ++i) {
    if (a == l) {  // chain reached l too early: not an exact s-fold preimage
      a = n;
      break;
    }
    a = spec.parent(a);
  }
  if (a != l || (l == 0 && s != spec.depth_to_root(n))) {
    throw validation_error("block " + std::to_string(n) + " is not an s=" + std::to_string(s) +
                           " preimage of block " + std::to_string(l));
  }
  const FinVec pn = project_block(spec, x, n);
  Dyadic rhs = pn.norm_l1();
  rhs.mul_pow2(j - spec.tau(static_cast<std::uint64_t>(l) + static_cast<std::uint64_t>(s) - 1));
  OrbitWalker w(spec, pn);
  for (std::int64_t i = 0; i < j; ++i) w.step_inverse();
  const FinVec lhs = project_block(spec, w.current(), l);
  if (compare_norm(lhs, rhs) > 0) {
    return {false, "leakage bound fails at l=" + std::to_string(l) + " s=" + std::to_string(s) +
                       " n=" + std::to_string(n) + " j=" + std::to_string(j)};
  }
  return {true, ""};
}

std::int64_t gain_exponent(const OperatorSpec& spec, std::size_t l, std::int64_t j,
                           std::int64_t u) {
  const std::uint64_t lo = spec.block_start(l);
  const std::int64_t len = spec.block_len(l);
  const std::int64_t head = spec.head_len(l);
  if (u < 0 || u >= len) throw validation_error("gain offset outside block");
  auto prefix = [&](std::int64_t v) {
    return spec.weight_prefix_exp(l, lo + static_cast<std::uint64_t>(v));
  };
  // Backward walk from offset u: j <= u stays on the straight run; past the
  // block start it wraps to the block end, gaining head per full cycle.
  if (j <= u) return prefix(u - j) - prefix(u);
  const std::int64_t after = j - u - 1;
  const std::int64_t cycles = after / len;
  const std::int64_t r = after % len;
  return -prefix(u) + head * cycles + prefix(len - 1 - r) + head;
}

GainProfile gain_profile(const OperatorSpec& spec, std::size_t l, std::int64_t j_max) {
  GainProfile gp;
  gp.block = l;
  const std::int64_t len = spec.block_len(l);
  const std::int64_t head = spec.head_len(l);
  const std::int64_t tail = spec.tail_len(l);
  gp.period = 2 * len;
  gp.period_growth_exp = 2 * head;
  gp.min_exp.reserve(static_cast<std::size_t>(j_max) + 1);
  gp.floor_ok = true;
  for (std::int64_t j = 0; j <= j_max; ++j) {
    std::int64_t best = gain_exponent(spec, l, j, 0);
    for (std::int64_t u = 1; u < len; ++u) {
      best = std::min(best, gain_exponent(spec, l, j, u));
    }
    gp.min_exp.push_back(best);
    if (best < head * (j / len) - tail) gp.floor_ok = false;
  }
  return gp;
}

}  // namespace lindyn
