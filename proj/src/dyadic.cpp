#include "lindyn/dyadic.hpp"

#include <algorithm>
#include <vector>

namespace lindyn {

namespace {

// Mantissa alignment budget: spreads beyond this many bits fault loudly.
constexpr std::int64_t kMaxAlignBits = std::int64_t(1) << 26;

std::int64_t bit_length(const mpz_class& m) {
  return static_cast<std::int64_t>(mpz_sizeinbase(m.get_mpz_t(), 2));
}

}  // namespace

std::int64_t checked_add_exp(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw arithmetic_fault("dyadic exponent overflow: " + std::to_string(a) + " + " +
                           std::to_string(b));
  }
  return r;
}

void Dyadic::normalize() {
  if (mpz_sgn(mant_.get_mpz_t()) == 0) {
    exp_ = 0;
    return;
  }
  const mp_bitcnt_t tz = mpz_scan1(mant_.get_mpz_t(), 0);
  if (tz > 0) {
    mant_ >>= tz;
    exp_ = checked_add_exp(exp_, static_cast<std::int64_t>(tz));
  }
}

Dyadic Dyadic::scaled(mpz_class mantissa, std::int64_t exponent) {
  Dyadic d;
  d.mant_ = std::move(mantissa);
  d.exp_ = exponent;
  d.normalize();
  return d;
}

Dyadic Dyadic::pow2(std::int64_t exponent) {
  Dyadic d;
  d.mant_ = 1;
  d.exp_ = exponent;
  return d;
}

Dyadic Dyadic::from_parts(const std::string& mantissa_dec, std::int64_t exponent) {
  return scaled(mpz_class(mantissa_dec, 10), exponent);
}

std::int64_t Dyadic::floor_log2_abs() const {
  if (is_zero()) throw arithmetic_fault("floor_log2_abs of zero");
  return checked_add_exp(exp_, bit_length(mant_) - 1);
}

Dyadic Dyadic::operator-() const {
  Dyadic d = *this;
  d.mant_ = -d.mant_;
  return d;
}

Dyadic Dyadic::abs() const {
  Dyadic d = *this;
  d.mant_ = ::abs(d.mant_);
  return d;
}

Dyadic& Dyadic::negate() {
  mant_ = -mant_;
  return *this;
}

Dyadic& Dyadic::mul_pow2(std::int64_t e) {
  if (!is_zero()) exp_ = checked_add_exp(exp_, e);
  return *this;
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const std::int64_t e = std::min(a.exp_, b.exp_);
  const std::int64_t sa = a.exp_ - e;
  const std::int64_t sb = b.exp_ - e;
  if (sa > kMaxAlignBits || sb > kMaxAlignBits) {
    throw arithmetic_fault("dyadic alignment exceeds mantissa budget (spread " +
                           std::to_string(std::max(sa, sb)) + " bits)");
  }
  mpz_class m = (a.mant_ << static_cast<mp_bitcnt_t>(sa)) +
                (b.mant_ << static_cast<mp_bitcnt_t>(sb));
  return Dyadic::scaled(std::move(m), e);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
  if (a.is_zero() || b.is_zero()) return Dyadic();
  Dyadic d;
  d.mant_ = a.mant_ * b.mant_;
  d.exp_ = checked_add_exp(a.exp_, b.exp_);
  return d;  // product of odd mantissas stays odd
}

Dyadic Dyadic::pow(std::uint64_t n) const {
  if (n == 0) return Dyadic(1);
  if (is_zero()) return Dyadic();
  Dyadic d;
  mpz_pow_ui(d.mant_.get_mpz_t(), mant_.get_mpz_t(), static_cast<unsigned long>(n));
  if (exp_ != 0) {
    if (static_cast<std::uint64_t>(std::abs(exp_)) >
        static_cast<std::uint64_t>(INT64_MAX) / n) {
      throw arithmetic_fault("dyadic exponent overflow in pow");
    }
    d.exp_ = exp_ * static_cast<std::int64_t>(n);
  }
  return d;
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  const int sa = a.sign();
  const int sb = b.sign();
  if (sa != sb) return sa <=> sb;
  if (sa == 0) return std::strong_ordering::equal;
  // Same nonzero sign: magnitude envelopes first, aligned compare only on overlap.
  const std::int64_t fa = a.floor_log2_abs();
  const std::int64_t fb = b.floor_log2_abs();
  if (fa != fb) {
    const bool a_smaller_mag = fa < fb;
    if (sa > 0) {
      return a_smaller_mag ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return a_smaller_mag ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  // Equal envelopes: exponent gap is bounded by the bit-length gap.
  const std::int64_t e = std::min(a.exp_, b.exp_);
  mpz_class ma = a.mant_ << static_cast<mp_bitcnt_t>(a.exp_ - e);
  mpz_class mb = b.mant_ << static_cast<mp_bitcnt_t>(b.exp_ - e);
  const int c = mpz_cmp(ma.get_mpz_t(), mb.get_mpz_t());
  return c <=> 0;
}

std::string Dyadic::to_string() const {
  return mant_.get_str() + "*2^" + std::to_string(exp_);
}

std::strong_ordering compare_abs_sum(std::span<const Dyadic> terms, const Dyadic& bound) {
  std::vector<const Dyadic*> live;
  live.reserve(terms.size());
  for (const Dyadic& t : terms) {
    if (!t.is_zero()) live.push_back(&t);
  }
  std::sort(live.begin(), live.end(), [](const Dyadic* x, const Dyadic* y) {
    return x->floor_log2_abs() > y->floor_log2_abs();
  });
  Dyadic partial;
  for (std::size_t i = 0; i < live.size(); ++i) {
    partial += live[i]->abs();
    if (partial > bound) return std::strong_ordering::greater;
    const std::size_t remaining = live.size() - i - 1;
    if (remaining == 0) break;
    // remaining terms sum to < remaining * 2^(f+1) <= 2^(f+1+ceil_log2(remaining))
    const std::int64_t f = live[i + 1]->floor_log2_abs();
    std::int64_t lg_r = 0;
    while ((std::size_t(1) << lg_r) < remaining) ++lg_r;
    const Dyadic envelope = Dyadic::pow2(checked_add_exp(f, 1 + lg_r));
    if (bound - partial >= envelope) return std::strong_ordering::less;
  }
  return partial <=> bound;
}

bool le_pow2_rational(const Dyadic& d, std::int64_t num, std::int64_t den) {
  if (den < 1) throw arithmetic_fault("le_pow2_rational: nonpositive denominator");
  if (d.sign() <= 0) return true;
  // floor(num/den) toward -inf
  std::int64_t q = num / den;
  if (num % den != 0 && ((num < 0) != (den < 0))) --q;
  const std::int64_t f = d.floor_log2_abs();
  if (f < q) return true;                       // d < 2^q <= 2^(num/den)... 2^f <= d < 2^{f+1} <= 2^q
  if (f > q) return false;                      // d >= 2^f >= 2^{q+1} > 2^(num/den)
  if (d <= Dyadic::pow2(q)) return true;        // 2^q <= 2^(num/den)
  if (num % den == 0) return false;
  return d.pow(static_cast<std::uint64_t>(den)) <= Dyadic::pow2(num);
}

}  // namespace lindyn
